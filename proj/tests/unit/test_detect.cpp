#include <doctest.h>

#include <random>
#include <variant>

#include "khdetect/corpus.hpp"
#include "khdetect/detect.hpp"
#include "khdetect/error.hpp"
#include "khdetect/report.hpp"

using namespace khdetect;
using namespace khdetect::detect;
using khovanov::LGradedRanks;

namespace {

LGradedRanks L(std::vector<std::size_t> r, std::vector<int> g) { return LGradedRanks::from_lists(r, g); }

const LGradedRanks kL1 = L({1, 3, 1, 3, 2, 1, 1}, {4, 6, 7, 8, 9, 10, 11});
const LGradedRanks kL2 = L({1, 3, 1, 3, 2, 1, 1}, {2, 4, 5, 6, 7, 8, 9});
const LGradedRanks kL6a3 = L({1, 2, 1, 2, 2, 2, 1, 1}, {4, 6, 7, 8, 9, 10, 11, 12});

linkdiag::PDLink corpus_link(const std::string& name) { return corpus::entry_link(*corpus::find(corpus::builtin(), name)); }

LGradedRanks random_table(std::mt19937_64& rng) {
  LGradedRanks r;
  const int n = static_cast<int>(rng() % 6);
  for (int i = 0; i < n; ++i) r.add(static_cast<int>(rng() % 13) - 6, 1 + rng() % 3);
  return r;
}

// The expected outcome of the case analysis, written out independently.
// Returns the error code or the case.
std::variant<ErrorCode, HflCase> expected_case(const std::map<int, std::size_t>& raw, int l) {
  if (l <= 0) return ErrorCode::InvalidLinking;
  std::map<int, std::size_t> d;
  for (const auto& [a, v] : raw)
    if (v) d[a] = v;
  for (const auto& [a, v] : d)
    if (v % 2) return ErrorCode::OddDim;
  for (const auto& [a, v] : d) {
    const auto it = d.find(-a);
    if (it == d.end() || it->second != v) return ErrorCode::AsymmetricDims;
  }
  std::size_t tot = 0;
  for (const auto& [a, v] : d) tot += v;
  if (tot > 12) return ErrorCode::DimTooLarge;
  if (!d.count(l)) return ErrorCode::TopBelowHalfL;
  const auto [s, top] = *d.rbegin();
  if (top == 2) return HflCase::Braid;
  if (top == 4) return s == l ? HflCase::ParityContradiction : HflCase::FourDegrees;
  if (top == 6) return HflCase::Meridian;
  return ErrorCode::DimTooLarge;
}

std::variant<ErrorCode, HflCase> actual_case(const std::map<int, std::size_t>& d, int l) {
  try {
    return hfl_case(d, l);
  } catch (const Error& e) {
    return e.code();
  }
}

}  // namespace

TEST_SUITE("detect") {

TEST_CASE("Batson-Seed inequality") {
  const LGradedRanks tl = knot_table(KnotType::TrefoilLeft);
  const LGradedRanks tr = knot_table(KnotType::TrefoilRight);
  const LGradedRanks u = knot_table(KnotType::Unknot);
  CHECK(batson_seed_check(kL1, tl, u, -2));
  // equality at every grading
  CHECK(khovanov::shift(khovanov::tensor(tl, u), 4) == kL1);
  CHECK(batson_seed_check(kL2, tl, u, -1));
  CHECK(khovanov::shift(khovanov::tensor(tl, u), 2) == kL2);
  CHECK_FALSE(batson_seed_check(kL2, tr, u, -1));
  CHECK_FALSE(batson_seed_check(kL1, tr, u, -2));
  // the orientation that makes lk positive is incompatible with these tables
  CHECK_FALSE(batson_seed_check(kL1, tl, u, 2));
}

TEST_CASE("Batson-Seed is symmetric in the components") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 500; ++i) {
    const LGradedRanks a = random_table(rng), b = random_table(rng), c = random_table(rng);
    const int lk = static_cast<int>(rng() % 7) - 3;
    CHECK(batson_seed_check(a, b, c, lk) == batson_seed_check(a, c, b, lk));
  }
}

TEST_CASE("rank constraints") {
  const RankConstraints u2 = rank_constraints(target_table(Target::U2));
  CHECK(u2.total == 4);
  CHECK(u2.mult4);
  CHECK(rank_constraints(kL1).total == 12);
  CHECK(rank_constraints(kL1).mult4);
  const RankConstraints ten = rank_constraints(L({4, 6}, {0, 2}));
  CHECK(ten.total == 10);
  CHECK_FALSE(ten.mult4);
}

TEST_CASE("signature match") {
  CHECK(signature_match(kL1, Target::L1).exact);
  CHECK_FALSE(signature_match(kL6a3, Target::L1).exact);
  CHECK_FALSE(signature_match(kL6a3, Target::L1).as_mirror);
  CHECK_FALSE(signature_match(kL6a3, Target::L2).exact);
  CHECK(signature_match(target_table(Target::RightTU), Target::TU).as_mirror);
  // shifted tables never match
  CHECK_FALSE(signature_match(khovanov::shift(kL1, 2), Target::L1).exact);
  CHECK(parse_target("L6a3") == Target::L6a3);
  try {
    parse_target("L9n9");
    FAIL("expected UnknownTarget");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownTarget);
  }
  for (Target t : {Target::U2, Target::L1, Target::L2, Target::L6a3, Target::L4a1, Target::L6a2, Target::TU,
                   Target::RightTU}) {
    const LGradedRanks& x = target_table(t);
    CHECK(signature_match(x, t).exact == signature_match(khovanov::negate_grading(x), t).as_mirror);
    for (Target u : {Target::L1, Target::L2}) {
      CHECK(signature_match(x, u).exact == signature_match(khovanov::negate_grading(x), u).as_mirror);
    }
  }
}

TEST_CASE("hfl_case examples") {
  CHECK(hfl_case({{-2, 2}, {0, 6}, {2, 2}}, 2) == HflCase::Braid);
  CHECK(hfl_case({{-2, 2}, {0, 4}, {2, 2}}, 2) == HflCase::Braid);
  CHECK(hfl_case({{-1, 6}, {1, 6}}, 1) == HflCase::Meridian);
  CHECK(hfl_case({{-1, 4}, {1, 4}}, 1) == HflCase::ParityContradiction);
  CHECK(hfl_case({{-3, 4}, {-1, 2}, {1, 2}, {3, 4}}, 1) == HflCase::FourDegrees);
  CHECK(std::get<ErrorCode>(actual_case({{-1, 3}, {1, 3}}, 1)) == ErrorCode::OddDim);
  CHECK(std::get<ErrorCode>(actual_case({{-1, 2}, {1, 4}}, 1)) == ErrorCode::AsymmetricDims);
  CHECK(std::get<ErrorCode>(actual_case({{-3, 2}, {3, 2}}, 1)) == ErrorCode::TopBelowHalfL);
  CHECK(std::get<ErrorCode>(actual_case({{-1, 8}, {1, 8}}, 1)) == ErrorCode::DimTooLarge);
  CHECK(std::get<ErrorCode>(actual_case({{1, 2}}, 0)) == ErrorCode::InvalidLinking);
}

TEST_CASE("hfl_case randomized property suite") {
  std::mt19937_64 rng(59);
  std::map<std::string, int> seen;
  const int cases = 4000;
  for (int i = 0; i < cases; ++i) {
    const int l = 1 + static_cast<int>(rng() % 4);
    std::map<int, std::size_t> d;
    // start from symmetric even data, then maybe break one law
    const int spots = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < spots; ++k) {
      const int a = static_cast<int>(rng() % 5);
      const std::size_t v = 2 * (1 + rng() % 3);
      d[a] = d[-a] = v;
    }
    if (rng() % 2) d[l] = d[-l] = 2 * (1 + rng() % 3);
    switch (rng() % 5) {
      case 0: d[static_cast<int>(rng() % 9) - 4] += 1; break;  // odd
      case 1: d[1 + static_cast<int>(rng() % 4)] += 2; break;   // asymmetric
      default: break;
    }
    const auto want = expected_case(d, l);
    const auto got = actual_case(d, l);
    CHECK(want == got);
    seen[std::holds_alternative<ErrorCode>(got) ? std::string(error_name(std::get<ErrorCode>(got)))
                                                : hfl_case_name(std::get<HflCase>(got))]++;
  }
  // every outcome is exercised
  for (const char* k : {"OddDim", "AsymmetricDims", "DimTooLarge", "TopBelowHalfL", "Braid", "FourDegrees",
                        "ParityContradiction", "Meridian"}) {
    CAPTURE(k);
    CHECK(seen[k] > 0);
  }
  // no input violating evenness or symmetry gets a case
  std::mt19937_64 rng2(61);
  for (int i = 0; i < 1000; ++i) {
    std::map<int, std::size_t> d;
    for (int k = 0; k < 4; ++k) d[static_cast<int>(rng2() % 9) - 4] = rng2() % 7;
    const auto got = actual_case(d, 1 + static_cast<int>(rng2() % 3));
    bool even = true, sym = true;
    for (const auto& [a, v] : d) {
      if (v % 2) even = false;
      const std::size_t other = d.count(-a) ? d.at(-a) : 0;
      if (other != v) sym = false;
    }
    if (!even) {
      CHECK(std::get<ErrorCode>(got) == ErrorCode::OddDim);
    } else if (!sym) {
      CHECK(std::get<ErrorCode>(got) == ErrorCode::AsymmetricDims);
    }
  }
}

TEST_CASE("component classification") {
  const auto t = classify_component(linkdiag::closure(linkdiag::parse_braid("s1 s1 s1", 2, false)));
  CHECK(t.type == KnotType::TrefoilLeft);
  CHECK(t.reduced_rank == 3);
  CHECK(classify_component(linkdiag::closure(linkdiag::parse_braid("s1^-1 s1^-1 s1^-1", 2, false))).type ==
        KnotType::TrefoilRight);
  CHECK(classify_component(linkdiag::parse_pd("U")).type == KnotType::Unknot);
  // figure eight
  CHECK(classify_component(linkdiag::closure(linkdiag::parse_braid("s1 s2^-1 s1 s2^-1", 3, false))).type ==
        KnotType::Other);
}

TEST_CASE("classify") {
  const Certificate l1 = classify(linkdiag::closure(linkdiag::parse_braid("s1 s1 s1", 2, true)));
  CHECK(l1.final == Verdict::MatchesL1);
  CHECK_FALSE(l1.mirror);
  for (const Step& s : l1.steps) CHECK(s.verdict != "fail");

  const linkdiag::PDLink t = linkdiag::closure(linkdiag::parse_braid("s1 s1 s1", 2, false));
  const Certificate l2 = classify(linkdiag::meridian_union(t, t.edges().front()));
  CHECK(l2.final == Verdict::MatchesL2);
  CHECK_FALSE(l2.f2_only);

  const Certificate l6a3 = classify(linkdiag::closure(linkdiag::parse_braid("s1 s2", 3, true)));
  CHECK(l6a3.final == Verdict::RuledOut);
  CHECK(l6a3.reason.find("despite total rank 12") != std::string::npos);

  const Certificate l4a1 = classify(linkdiag::closure(linkdiag::parse_braid("s1", 2, true)));
  CHECK(l4a1.final == Verdict::RuledOut);
  CHECK(l4a1.reason.find("total rank 8") != std::string::npos);

  const Certificate m = classify(linkdiag::mirror(linkdiag::closure(linkdiag::parse_braid("s1 s1 s1", 2, true))));
  CHECK(m.final == Verdict::MatchesL1);
  CHECK(m.mirror);

  CHECK_THROWS_AS(classify(t), Error);
}

TEST_CASE("classify without a grid is inconclusive") {
  // same link as L2 but the meridian sits on a different edge, so no curated grid applies
  const linkdiag::PDLink t = linkdiag::closure(linkdiag::parse_braid("s1 s1 s1", 2, false));
  const linkdiag::PDLink other = linkdiag::meridian_union(t, t.edges().back());
  REQUIRE_FALSE(curated_grid(other));
  const Certificate c = classify(other);
  CHECK(c.final == Verdict::Inconclusive);
  bool grid_failed = false;
  for (const Step& s : c.steps) grid_failed |= s.step == "grid" && s.verdict == "fail";
  CHECK(grid_failed);
}

TEST_CASE("certificates are deterministic and replay") {
  for (const char* name : {"L7n1", "L2", "L6a3", "L4a1", "hopf", "U2"}) {
    CAPTURE(name);
    const linkdiag::PDLink link = corpus_link(name);
    const Certificate a = classify(link);
    const Certificate b = classify(link);
    CHECK(a == b);
    CHECK(report::certificate_json(a) == report::certificate_json(b));
    const Certificate back = report::certificate_from_json(report::certificate_json(a));
    CHECK(back == a);
    CHECK(replay(back).ok);
    CHECK(a.steps.size() == 11);
  }
}

TEST_CASE("replay detects tampering") {
  Certificate c = classify(corpus_link("L7n1"));
  Certificate forged = c;
  forged.final = Verdict::MatchesL2;
  CHECK_FALSE(replay(forged).ok);
  forged = c;
  forged.steps[3].detail = "edited";
  const ReplayResult r = replay(forged);
  CHECK_FALSE(r.ok);
  REQUIRE(r.mismatches.size() == 1);
  CHECK(r.mismatches[0] == "step component_types");
  CHECK_THROWS_AS(report::certificate_from_json("{\"input\": 3}"), Error);
}

}
