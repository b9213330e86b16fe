// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "khdetect/corpus.hpp"
#include "khdetect/detect.hpp"
#include "khdetect/error.hpp"
#include "khdetect/gridfloer.hpp"
#include "khdetect/khovanov.hpp"
#include "khdetect/laurent.hpp"
#include "khdetect/linkdiag.hpp"
#include "khdetect/report.hpp"

using namespace khdetect;
using khovanov::LGradedRanks;
using linkdiag::PDLink;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

LGradedRanks table(std::vector<std::size_t> r, std::vector<int> g) { return LGradedRanks::from_lists(r, g); }

PDLink braid(const char* w, int k, bool axis) { return linkdiag::closure(linkdiag::parse_braid(w, k, axis)); }

PDLink left_trefoil() { return braid("s1 s1 s1", 2, false); }
PDLink right_trefoil() { return braid("s1^-1 s1^-1 s1^-1", 2, false); }
PDLink unknot() { return braid("", 1, false); }
PDLink link_L1() { return braid("s1 s1 s1", 2, true); }
PDLink link_L2() { return linkdiag::meridian_union(left_trefoil(), left_trefoil().edges().front()); }
PDLink link_L6a3() { return braid("s1 s2", 3, true); }
PDLink link_L4a1() { return braid("s1", 2, true); }

gridfloer::GridDiagram corpus_grid(const char* name) {
  return *corpus::entry_grid(*corpus::find(corpus::builtin(), name));
}

LGradedRanks kh_l(const PDLink& l) { return khovanov::l_collapse(khovanov::kh_ranks(l)); }

std::size_t total(const gridfloer::GradedDims& d) {
  std::size_t t = 0;
  for (const auto& kv : d) t += kv.second;
  return t;
}

Outcome criterion1() {
  Outcome o;
  struct Case {
    std::string name;
    std::function<LGradedRanks()> compute;
    LGradedRanks want;
  };
  const LGradedRanks tu = table({1, 3, 1, 3, 2, 1, 1}, {0, 2, 3, 4, 5, 6, 7});
  const std::vector<Case> cases{
      {"U2", [] { return kh_l(linkdiag::parse_pd("U U")); }, table({1, 2, 1}, {-2, 0, 2})},
      {"T(x)U", [] { return khovanov::tensor(kh_l(left_trefoil()), kh_l(unknot())); }, tu},
      {"Tbar(x)U", [] { return khovanov::tensor(kh_l(right_trefoil()), kh_l(unknot())); }, khovanov::negate_grading(tu)},
      {"L1", [] { return kh_l(link_L1()); }, table({1, 3, 1, 3, 2, 1, 1}, {4, 6, 7, 8, 9, 10, 11})},
      {"L2", [] { return kh_l(link_L2()); }, table({1, 3, 1, 3, 2, 1, 1}, {2, 4, 5, 6, 7, 8, 9})},
      {"L6a3", [] { return kh_l(link_L6a3()); }, table({1, 2, 1, 2, 2, 2, 1, 1}, {4, 6, 7, 8, 9, 10, 11, 12})},
  };
  std::ostringstream times;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const LGradedRanks got = c.compute();
    const double dt = seconds_since(t0);
    o.expect(got == c.want, c.name + " table");
    o.expect(dt < 1.0, c.name + " runtime " + fmt(dt));
    times << c.name << " " << fmt(dt) << " ";
  }
  o.expect(kh_l(link_L1()).total() == 12 && kh_l(link_L2()).total() == 12 && kh_l(link_L6a3()).total() == 12,
           "totals 12");
  o.note(times.str());
  return o;
}

Outcome criterion2() {
  Outcome o;
  int links = 0, basepoints = 0;
  for (const auto& e : corpus::builtin()) {
    if (!e.pd && !e.braid) continue;
    const PDLink l = corpus::entry_link(e);
    const std::size_t unreduced = khovanov::kh_ranks(l).total();
    if (l.num_components() == 2) o.expect(unreduced % 4 == 0, e.name + " total " + std::to_string(unreduced));
    for (linkdiag::EdgeId b : l.edges()) {
      khovanov::KhOptions r;
      r.reduced = true;
      r.basepoint = b;
      const std::size_t red = khovanov::kh_ranks(l, r).total();
      o.expect(unreduced == 2 * red, e.name + " basepoint " + std::to_string(b));
      ++basepoints;
    }
    ++links;
  }
  o.note(std::to_string(links) + " links, " + std::to_string(basepoints) + " basepoints");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const LGradedRanks T = kh_l(left_trefoil()), Tbar = kh_l(right_trefoil()), U = kh_l(unknot());
  const PDLink l1 = link_L1(), l2 = link_L2();
  const int lk1 = linkdiag::linking_number(l1, 0, 1), lk2 = linkdiag::linking_number(l2, 0, 1);
  o.expect(std::abs(lk1) == 2 && std::abs(lk2) == 1, "linking numbers");
  o.expect(detect::batson_seed_check(kh_l(l1), T, U, lk1), "L1 with T, U");
  o.expect(detect::batson_seed_check(kh_l(l2), T, U, lk2), "L2 with T, U");
  o.expect(!detect::batson_seed_check(kh_l(l2), Tbar, U, lk2), "L2 with the right trefoil must fail");
  o.expect(!detect::batson_seed_check(kh_l(l1), Tbar, U, lk1), "L1 with the right trefoil must fail");
  o.expect(khovanov::shift(khovanov::tensor(T, U), -2 * lk1) == kh_l(l1), "L1 equality");
  o.note("lk(L1)=" + std::to_string(lk1) + " lk(L2)=" + std::to_string(lk2) + "; equality for L1");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const laurent::LaurentPoly trefoil = laurent::parse_poly("1 - x + x^2", 1);
  std::ostringstream notes;
  for (const auto& [name, l, want] : std::vector<std::tuple<const char*, int, const char*>>{
           {"L2", 1, "1 - x + x^2"}, {"L7n1", 2, "1 + x^3"}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const laurent::LaurentPoly d = gridfloer::alexander_polynomial(corpus_grid(name));
    const double dt = seconds_since(t0);
    o.expect(laurent::torres_check(d, trefoil, l), std::string("Torres for ") + name);
    o.expect(laurent::doteq(d.substitute_one(1), laurent::parse_poly(want, 1)).has_value(),
             std::string(name) + " Delta(x,1)");
    o.expect(dt < 60.0, std::string(name) + " runtime");
    notes << name << " Delta(x,1)=" << d.substitute_one(1).to_string() << " (" << fmt(dt) << ") ";
  }
  int symmetric = 0;
  for (const auto& e : corpus::builtin()) {
    const auto g = corpus::entry_grid(e);
    if (!g) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const laurent::LaurentPoly d = gridfloer::alexander_polynomial(*g);
    o.expect(seconds_since(t0) < 60.0, e.name + " runtime");
    o.expect(d.is_zero() || laurent::doteq(d, d.inverted()).has_value(), e.name + " symmetry");
    ++symmetric;
  }
  notes << symmetric << " grids symmetric";
  o.note(notes.str());
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::ostringstream notes;
  for (const auto& e : corpus::builtin()) {
    const auto g = corpus::entry_grid(e);
    if (!g) continue;
    gridfloer::GradedDims tilde, hat;
    try {
      // the differential is checked to square to zero while the homology is computed
      tilde = gridfloer::tilde_homology(*g);
      hat = gridfloer::hat_extract(tilde, *g);
    } catch (const Error& err) {
      o.expect(false, e.name + ": " + err.what());
      continue;
    }
    std::map<std::vector<int>, std::size_t> by_alex;
    for (const auto& [k, v] : hat) by_alex[k.alex] += v;
    for (const auto& [a, v] : by_alex) {
      std::vector<int> neg = a;
      for (int& x : neg) x = -x;
      o.expect(by_alex.count(neg) && by_alex.at(neg) == v, e.name + " hat symmetry");
    }
    notes << e.name << ":" << total(hat) << " ";
  }
  const auto t = corpus_grid("trefoil_left");
  const auto ht = gridfloer::hat_extract(gridfloer::tilde_homology(t), t);
  o.expect(gridfloer::slice_dims(ht, 0) == std::map<int, std::size_t>{{-2, 1}, {0, 1}, {2, 1}}, "trefoil hat (1,1,1)");
  o.note("hat totals " + notes.str());
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::ostringstream notes;
  // L1: axis is grid component 1
  {
    const auto g = corpus_grid("L7n1");
    const auto hat = gridfloer::hat_extract(gridfloer::tilde_homology(g), g);
    const gridfloer::Slice top = gridfloer::top_slice(hat, 1);
    const long lower = gridfloer::slice_chi_bounds(hat, 1)[top.top];
    o.expect(top.top == 2 && top.dim == 2, "L1 top slice dim 2 at A=1");
    const long chi = gridfloer::total_chi_bound(hat);
    const std::size_t f2 = total(hat);
    o.expect(chi <= static_cast<long>(f2) && f2 <= 12, "L1 bounds ordered and at most 12");
    const std::string report = report::hfl_text({"L7n1", gridfloer::emit_grid(g), hat});
    o.expect(report.find(lower == 2 ? "(Q-certified)" : "F2 only") != std::string::npos, "L1 report states status");
    o.expect(report.find(static_cast<long>(f2) == chi ? "Q dimension certified" : "gap, Q dimension not certified") !=
                 std::string::npos,
             "L1 report states the total's status");
    notes << "L1 top dim " << top.dim << (lower == 2 ? " Q-certified" : " F2 only") << ", total F2 " << f2
          << " vs chi " << chi << (static_cast<long>(f2) == chi ? " certified" : " gap flagged") << "; ";
  }
  {
    const auto g = corpus_grid("L2");
    const auto hat = gridfloer::hat_extract(gridfloer::tilde_homology(g), g);
    const gridfloer::Slice top = gridfloer::top_slice(hat, 1);
    const long lower = gridfloer::slice_chi_bounds(hat, 1)[top.top];
    o.expect(top.top == 1, "L2 top slice at A=1/2");
    const long chi = gridfloer::total_chi_bound(hat);
    const std::size_t f2 = total(hat);
    const std::string report = report::hfl_text({"L2", gridfloer::emit_grid(g), hat});
    if (lower == static_cast<long>(top.dim)) {
      o.expect(top.dim == 6, "L2 certified top slice equals 6");
    } else {
      o.expect(report.find("F2 only") != std::string::npos, "L2 top-slice gap flagged");
    }
    if (static_cast<long>(f2) == chi) {
      o.expect(f2 == 12, "L2 certified total equals 12");
      o.expect(report.find("Q dimension certified") != std::string::npos, "L2 report certifies the total");
    } else {
      o.expect(report.find("gap") != std::string::npos, "L2 total gap flagged");
    }
    notes << "L2 top dim " << top.dim << (lower == static_cast<long>(top.dim) ? " Q-certified" : " F2 only")
          << ", total F2 " << f2 << " vs chi " << chi << (static_cast<long>(f2) == chi ? " certified rank_Q = 12" : " gap flagged");
  }
  o.note(notes.str());
  return o;
}

Outcome criterion7() {
  Outcome o;
  struct Case {
    std::string name;
    PDLink link;
    detect::Verdict want;
    std::string reason;
  };
  const std::vector<Case> cases{
      {"L1", link_L1(), detect::Verdict::MatchesL1, ""},
      {"L2", link_L2(), detect::Verdict::MatchesL2, ""},
      {"L6a3", link_L6a3(), detect::Verdict::RuledOut, "despite total rank 12"},
      {"L4a1", link_L4a1(), detect::Verdict::RuledOut, "total rank 8"},
  };
  std::ostringstream notes;
  for (const auto& c : cases) {
    const detect::Certificate cert = detect::classify(c.link);
    o.expect(cert.final == c.want, c.name + " verdict " + detect::verdict_name(cert.final));
    if (!c.reason.empty()) o.expect(cert.reason.find(c.reason) != std::string::npos, c.name + " reason");
    const detect::Certificate back = report::certificate_from_json(report::certificate_json(cert));
    o.expect(back == cert, c.name + " JSON round trip");
    o.expect(detect::replay(back).ok, c.name + " replay");
    notes << c.name << "=" << detect::verdict_name(cert.final) << " ";
  }
  notes << "(all replayed)";
  o.note(notes.str());
  return o;
}

Outcome criterion8() {
  Outcome o;
  using laurent::parse_poly;
  const auto g1 = corpus_grid("L7n1"), g2 = corpus_grid("L2");
  const laurent::GSeq s1 = laurent::extract_g(gridfloer::alexander_polynomial(g1), 2);
  const laurent::GSeq s2 = laurent::extract_g(gridfloer::alexander_polynomial(g2), 1);
  o.expect(laurent::lemma_supp2(s2).hypothesis_holds && laurent::lemma_supp2(s2).consistent, "supp2 on L2");
  o.expect(!laurent::lemma_supp2(s1).hypothesis_holds, "supp2 fails on L1");
  o.expect(!laurent::lemma_4deg(s1).hypothesis_holds, "4deg fails on L1");

  laurent::GSeq nf;
  nf.l = 1;
  nf.g = {{-1, parse_poly("x - 1", 1)}, {0, parse_poly("x^2", 1)}, {1, parse_poly("-x", 1)}, {2, parse_poly("1 - x", 1)}};
  const laurent::FourDegResult a = laurent::lemma_4deg(nf);
  o.expect(a.hypothesis_holds && a.forced_l_eq_1 && a.forced_K_unknot && a.consistent, "4deg normal form");
  laurent::GSeq wide;
  wide.l = 1;
  wide.g = {{0, parse_poly("1 - x + x^2", 1)}, {1, parse_poly("-x", 1)}};
  o.expect(!laurent::lemma_4deg(wide).cond_norm, "4deg norm 4 rejected");
  laurent::GSeq syn;
  syn.l = 2;
  syn.g = {{0, parse_poly("1", 1)}, {2, parse_poly("-1", 1)}};
  o.expect(laurent::lemma_supp2(syn).hypothesis_holds && !laurent::lemma_supp2(syn).consistent,
           "supp2 contradiction path");

  // case analysis on the computed slice data
  const auto h1 = gridfloer::hat_extract(gridfloer::tilde_homology(g1), g1);
  const auto h2 = gridfloer::hat_extract(gridfloer::tilde_homology(g2), g2);
  o.expect(detect::hfl_case(gridfloer::slice_dims(h1, 1), 2) == detect::HflCase::Braid, "L1 Braid");
  o.expect(detect::hfl_case(gridfloer::slice_dims(h2, 1), 1) == detect::HflCase::Meridian, "L2 Meridian");

  std::mt19937_64 rng(2024);
  int odd = 0, asym = 0;
  for (int i = 0; i < 2000; ++i) {
    std::map<int, std::size_t> d;
    const int a0 = 1 + static_cast<int>(rng() % 4);
    d[a0] = d[-a0] = 2 * (1 + rng() % 2);
    const bool make_odd = i % 2 == 0;
    if (make_odd) {
      d[static_cast<int>(rng() % 9) - 4] += 1;
    } else {
      d[1 + static_cast<int>(rng() % 4)] += 2;
    }
    try {
      detect::hfl_case(d, 1 + static_cast<int>(rng() % 3));
      o.expect(false, "violation accepted");
    } catch (const Error& e) {
      if (make_odd) {
        odd += e.code() == ErrorCode::OddDim;
        o.expect(e.code() == ErrorCode::OddDim, "OddDim");
      } else {
        asym += e.code() == ErrorCode::AsymmetricDims;
        o.expect(e.code() == ErrorCode::AsymmetricDims, "AsymmetricDims");
      }
    }
  }
  o.note("random violations: " + std::to_string(odd) + " OddDim, " + std::to_string(asym) + " AsymmetricDims");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"Khovanov fixtures", criterion1},     {"structural rank laws", criterion2},
      {"Batson-Seed", criterion3},           {"Alexander and Torres", criterion4},
      {"grid homology properties", criterion5}, {"HFL instances", criterion6},
      {"detection pipeline", criterion7},    {"lemma predicates", criterion8},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::string detail;
    for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("criterion %zu %s: %s  [%s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, detail.c_str());
  }
  return failures;
}
