#include <doctest.h>

#include <random>

#include "khdetect/corpus.hpp"
#include "khdetect/error.hpp"
#include "khdetect/khovanov.hpp"
#include "khdetect/linkdiag.hpp"
#include "oracles.hpp"

using namespace khdetect;
using namespace khdetect::khovanov;
using linkdiag::closure;
using linkdiag::parse_braid;
using linkdiag::PDLink;

namespace {

LGradedRanks L(std::vector<std::size_t> r, std::vector<int> g) { return LGradedRanks::from_lists(r, g); }

LGradedRanks kh_l(const PDLink& link, Field f = Field::F2) {
  KhOptions o;
  o.field = f;
  return l_collapse(kh_ranks(link, o));
}

std::map<int, long> graded_euler(const BigradedRanks& r) {
  std::map<int, long> out;
  for (const auto& [hq, v] : r.entries()) out[hq.second] += (hq.first % 2 ? -1L : 1L) * static_cast<long>(v);
  std::map<int, long> clean;
  for (const auto& [q, v] : out)
    if (v) clean[q] = v;
  return clean;
}

PDLink corpus_link(const std::string& name) { return corpus::entry_link(*corpus::find(corpus::builtin(), name)); }

}  // namespace

TEST_SUITE("khovanov") {

TEST_CASE("resolve") {
  const PDLink hopf = linkdiag::parse_pd("PD[X[1,3,2,4],X[3,1,4,2]]");
  std::size_t c00 = resolve(hopf, {false, false}).num_circles;
  std::size_t c01 = resolve(hopf, {false, true}).num_circles;
  std::size_t c11 = resolve(hopf, {true, true}).num_circles;
  CHECK(c00 == 2);
  CHECK(c01 == 1);
  CHECK(c11 == 2);
  CHECK(resolve(closure(parse_braid("", 1, false)), {}).num_circles == 1);
  CHECK_THROWS_AS(resolve(hopf, {true}), Error);
}

TEST_CASE("fixture tables") {
  CHECK(kh_l(linkdiag::parse_pd("U U")) == L({1, 2, 1}, {-2, 0, 2}));
  CHECK(kh_l(closure(parse_braid("s1 s1 s1", 2, true))) == L({1, 3, 1, 3, 2, 1, 1}, {4, 6, 7, 8, 9, 10, 11}));
  CHECK(kh_l(corpus_link("L2")) == L({1, 3, 1, 3, 2, 1, 1}, {2, 4, 5, 6, 7, 8, 9}));
  CHECK(kh_l(closure(parse_braid("s1 s2", 3, true))) == L({1, 2, 1, 2, 2, 2, 1, 1}, {4, 6, 7, 8, 9, 10, 11, 12}));
  CHECK(kh_l(closure(parse_braid("s1", 2, true))).total() == 8);
  KhOptions red;
  red.reduced = true;
  const PDLink t = closure(parse_braid("s1 s1 s1", 2, false));
  red.basepoint = t.edges().front();
  CHECK(kh_ranks(t, red).total() == 3);
}

TEST_CASE("l_collapse, tensor, shift") {
  BigradedRanks unknot;
  unknot.add(0, -1, 1);
  unknot.add(0, 1, 1);
  CHECK(l_collapse(unknot) == L({1, 1}, {-1, 1}));
  CHECK(l_collapse(BigradedRanks{}) == LGradedRanks{});
  CHECK(l_collapse(kh_ranks(linkdiag::parse_pd("U U"))) == L({1, 2, 1}, {-2, 0, 2}));

  const LGradedRanks tref = kh_l(closure(parse_braid("s1 s1 s1", 2, false)));
  const LGradedRanks u = kh_l(closure(parse_braid("", 1, false)));
  const LGradedRanks tu = tensor(tref, u);
  CHECK(tu == L({1, 3, 1, 3, 2, 1, 1}, {0, 2, 3, 4, 5, 6, 7}));
  const LGradedRanks rtref = kh_l(closure(parse_braid("s1^-1 s1^-1 s1^-1", 2, false)));
  CHECK(tensor(rtref, u) == negate_grading(tu));
  CHECK(tensor(tu, L({1}, {0})) == tu);
  CHECK(tensor(tu, u) == tensor(u, tu));
  CHECK(shift(tu, 4) == L({1, 3, 1, 3, 2, 1, 1}, {4, 6, 7, 8, 9, 10, 11}));
  CHECK(shift(tu, 0) == tu);
  CHECK(negate_grading(negate_grading(tu)) == tu);
}

TEST_CASE("graded Euler characteristic matches the state sum") {
  std::mt19937_64 rng(31);
  std::vector<PDLink> links{linkdiag::parse_pd("U U"), corpus_link("L2"), closure(parse_braid("s1 s1 s1", 2, true))};
  for (int k = 0; k < 25; ++k) {
    linkdiag::BraidSpec b;
    b.strands = 2 + static_cast<int>(rng() % 3);
    const int len = static_cast<int>(rng() % 7);
    for (int i = 0; i < len; ++i) {
      const int g = 1 + static_cast<int>(rng() % (b.strands - 1));
      b.word.push_back(rng() % 2 ? g : -g);
    }
    b.with_axis = k % 4 == 0;
    links.push_back(closure(b));
  }
  for (const PDLink& l : links) {
    const std::map<int, long> ref = oracle::jones_state_sum(l);
    KhOptions q;
    q.field = Field::Q;
    CHECK(graded_euler(kh_ranks(l)) == ref);
    CHECK(graded_euler(kh_ranks(l, q)) == ref);
  }
}

TEST_CASE("rank laws on the corpus") {
  for (const auto& e : corpus::builtin()) {
    if (!e.pd && !e.braid) continue;
    const PDLink l = corpus::entry_link(e);
    if (l.num_crossings() > 12) continue;
    CAPTURE(e.name);
    const BigradedRanks f2 = kh_ranks(l);
    KhOptions q;
    q.field = Field::Q;
    const BigradedRanks qr = kh_ranks(l, q);
    for (const auto& [hq, v] : qr.entries()) CHECK(v <= f2.at(hq.first, hq.second));
    if (l.num_components() == 2) CHECK(f2.total() % 4 == 0);
    // reduced rank is half the unreduced one for every basepoint
    std::map<int, std::size_t> per_component;
    for (linkdiag::EdgeId e2 : l.edges()) {
      KhOptions r;
      r.reduced = true;
      r.basepoint = e2;
      const BigradedRanks red = kh_ranks(l, r);
      CHECK(2 * red.total() == f2.total());
      const int c = l.component_of(e2);
      if (per_component.count(c)) {
        CHECK(per_component[c] == red.total());
      }
      per_component[c] = red.total();
    }
  }
}

TEST_CASE("reduced ranks do not depend on the basepoint within a component") {
  const PDLink l = closure(parse_braid("s1 s1 s1", 2, true));
  std::map<int, BigradedRanks> seen;
  for (linkdiag::EdgeId e : l.edges()) {
    KhOptions r;
    r.reduced = true;
    r.basepoint = e;
    const BigradedRanks red = kh_ranks(l, r);
    const int c = l.component_of(e);
    if (seen.count(c)) CHECK(seen[c] == red);
    seen[c] = red;
  }
}

TEST_CASE("Reidemeister I invariance") {
  const std::vector<PDLink> links{closure(parse_braid("s1 s1 s1", 2, false)), linkdiag::parse_pd("PD[X[1,3,2,4],X[3,1,4,2]]"),
                                  closure(parse_braid("s1 s1 s1", 2, true))};
  for (const PDLink& l : links) {
    for (int sign : {1, -1}) {
      const PDLink k = linkdiag::add_kink(l, l.edges().back(), sign);
      CHECK(k.num_crossings() == l.num_crossings() + 1);
      CHECK(kh_ranks(k) == kh_ranks(l));
    }
  }
}

TEST_CASE("basepoint errors") {
  const PDLink t = closure(parse_braid("s1 s1 s1", 2, false));
  KhOptions r;
  r.reduced = true;
  CHECK_THROWS_AS(kh_ranks(t, r), Error);
  r.basepoint = 999;
  try {
    kh_ranks(t, r);
    FAIL("expected BasepointNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BasepointNotFound);
  }
}

}
