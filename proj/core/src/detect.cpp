#include "khdetect/detect.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "khdetect/corpus.hpp"
#include "khdetect/error.hpp"
#include "khdetect/laurent.hpp"

namespace khdetect::detect {

using khovanov::l_collapse;
using khovanov::negate_grading;
using khovanov::tensor;
using laurent::LaurentPoly;

bool batson_seed_check(const LGradedRanks& L, const LGradedRanks& K1, const LGradedRanks& K2, int lk) {
  const LGradedRanks t = tensor(K1, K2);
  for (const auto& [l, r] : t.entries()) {
    if (L.at(l - 2 * lk) < r) return false;
  }
  return true;
}

RankConstraints rank_constraints(const LGradedRanks& L) {
  RankConstraints rc;
  rc.total = L.total();
  rc.mult4 = rc.total % 4 == 0;
  return rc;
}

namespace {

LGradedRanks table(std::initializer_list<std::pair<const int, std::size_t>> e) {
  return LGradedRanks(std::map<int, std::size_t>(e));
}

std::string ranks_text(const LGradedRanks& r) {
  std::string s;
  for (const auto& [l, v] : r.entries()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(l) + ":" + std::to_string(v);
  }
  return s.empty() ? "0" : s;
}

}  // namespace

Target parse_target(std::string_view name) {
  static const std::map<std::string, Target, std::less<>> names = {
      {"U2", Target::U2},     {"L1", Target::L1},     {"L7n1", Target::L1},   {"L2", Target::L2},
      {"L6a3", Target::L6a3}, {"L4a1", Target::L4a1}, {"L6a2", Target::L6a2}, {"TU", Target::TU},
      {"RightTU", Target::RightTU}};
  auto it = names.find(name);
  if (it == names.end()) throw Error(ErrorCode::UnknownTarget, std::string(name));
  return it->second;
}

std::string target_name(Target t) {
  switch (t) {
    case Target::U2: return "U2";
    case Target::L1: return "L1";
    case Target::L2: return "L2";
    case Target::L6a3: return "L6a3";
    case Target::L4a1: return "L4a1";
    case Target::L6a2: return "L6a2";
    case Target::TU: return "TU";
    case Target::RightTU: return "RightTU";
  }
  return "?";
}

const LGradedRanks& target_table(Target t) {
  static const LGradedRanks u2 = table({{-2, 1}, {0, 2}, {2, 1}});
  static const LGradedRanks l1 = table({{4, 1}, {6, 3}, {7, 1}, {8, 3}, {9, 2}, {10, 1}, {11, 1}});
  static const LGradedRanks l2 = table({{2, 1}, {4, 3}, {5, 1}, {6, 3}, {7, 2}, {8, 1}, {9, 1}});
  static const LGradedRanks l6a3 = table({{4, 1}, {6, 2}, {7, 1}, {8, 2}, {9, 2}, {10, 2}, {11, 1}, {12, 1}});
  // computed on the closure of s1 with its axis, total 8
  static const LGradedRanks l4a1 = table({{2, 1}, {4, 2}, {5, 1}, {6, 2}, {7, 1}, {8, 1}});
  // computed on the closure of s1 s2^-1 with its axis, total 20
  static const LGradedRanks l6a2 =
      table({{2, 1}, {3, 1}, {4, 3}, {5, 3}, {6, 4}, {7, 3}, {8, 3}, {9, 1}, {10, 1}});
  static const LGradedRanks tu = table({{0, 1}, {2, 3}, {3, 1}, {4, 3}, {5, 2}, {6, 1}, {7, 1}});
  static const LGradedRanks rtu = negate_grading(tu);
  switch (t) {
    case Target::U2: return u2;
    case Target::L1: return l1;
    case Target::L2: return l2;
    case Target::L6a3: return l6a3;
    case Target::L4a1: return l4a1;
    case Target::L6a2: return l6a2;
    case Target::TU: return tu;
    case Target::RightTU: return rtu;
  }
  throw Error(ErrorCode::UnknownTarget, "unknown target");
}

SignatureMatch signature_match(const LGradedRanks& L, Target t) {
  const LGradedRanks& ref = target_table(t);
  return {L == ref, negate_grading(L) == ref};
}

std::string hfl_case_name(HflCase c) {
  switch (c) {
    case HflCase::Braid: return "Braid";
    case HflCase::ParityContradiction: return "ParityContradiction";
    case HflCase::FourDegrees: return "FourDegrees";
    case HflCase::Meridian: return "Meridian";
  }
  return "?";
}

HflCase hfl_case(const std::map<int, std::size_t>& slice_dims, int l) {
  if (l <= 0) throw Error(ErrorCode::InvalidLinking, "l = " + std::to_string(l) + " must be positive");
  std::size_t total = 0;
  std::map<int, std::size_t> dims;
  for (const auto& [a, d] : slice_dims) {
    if (d == 0) continue;
    dims[a] = d;
    total += d;
  }
  for (const auto& [a, d] : dims) {
    if (d % 2 != 0) {
      throw Error(ErrorCode::OddDim, "dimension " + std::to_string(d) + " at doubled grading " + std::to_string(a));
    }
  }
  for (const auto& [a, d] : dims) {
    auto it = dims.find(-a);
    if (it == dims.end() || it->second != d) {
      throw Error(ErrorCode::AsymmetricDims, "doubled grading " + std::to_string(a) + " has dimension " +
                                                 std::to_string(d) + " but its negative has " +
                                                 std::to_string(it == dims.end() ? 0 : it->second));
    }
  }
  if (total > 12) throw Error(ErrorCode::DimTooLarge, "total dimension " + std::to_string(total) + " exceeds 12");
  if (!dims.count(l)) {
    throw Error(ErrorCode::TopBelowHalfL, "no support at doubled grading l = " + std::to_string(l));
  }
  const int s = dims.rbegin()->first;
  const std::size_t d = dims.rbegin()->second;
  if (d == 2) return HflCase::Braid;
  if (d == 4) return s == l ? HflCase::ParityContradiction : HflCase::FourDegrees;
  if (d == 6) return HflCase::Meridian;
  throw Error(ErrorCode::DimTooLarge, "top dimension " + std::to_string(d));
}

std::string knot_type_name(KnotType t) {
  switch (t) {
    case KnotType::Unknot: return "unknot";
    case KnotType::TrefoilLeft: return "trefoil-left";
    case KnotType::TrefoilRight: return "trefoil-right";
    case KnotType::Other: return "other";
  }
  return "?";
}

const LGradedRanks& knot_table(KnotType t) {
  static const LGradedRanks unknot = table({{-1, 1}, {1, 1}});
  static const LGradedRanks left = table({{1, 1}, {3, 2}, {4, 1}, {5, 1}, {6, 1}});
  static const LGradedRanks right = negate_grading(left);
  static const LGradedRanks none;
  switch (t) {
    case KnotType::Unknot: return unknot;
    case KnotType::TrefoilLeft: return left;
    case KnotType::TrefoilRight: return right;
    case KnotType::Other: return none;
  }
  return none;
}

ComponentInfo classify_component(const linkdiag::PDLink& knot) {
  if (knot.num_components() != 1) throw Error(ErrorCode::IndexOutOfRange, "expected a knot");
  ComponentInfo info;
  info.ranks = l_collapse(khovanov::kh_ranks(knot));
  khovanov::KhOptions reduced;
  reduced.reduced = true;
  reduced.basepoint = knot.edges().front();
  info.reduced_rank = khovanov::kh_ranks(knot, reduced).total();
  for (KnotType t : {KnotType::Unknot, KnotType::TrefoilLeft, KnotType::TrefoilRight}) {
    if (info.ranks == knot_table(t)) info.type = t;
  }
  return info;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::MatchesL1: return "MatchesL1";
    case Verdict::MatchesL2: return "MatchesL2";
    case Verdict::RuledOut: return "RuledOut";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<GridChoice> curated_grid(const linkdiag::PDLink& link) {
  const linkdiag::PDLink self = linkdiag::normalized(link);
  for (const auto& e : corpus::builtin()) {
    if (!e.grid || (!e.pd && !e.braid)) continue;
    std::vector<linkdiag::PDLink> diagrams;
    if (e.pd) diagrams.push_back(linkdiag::parse_pd(*e.pd));
    if (e.braid) diagrams.push_back(linkdiag::closure(linkdiag::parse_braid(e.braid->word, e.braid->strands, e.braid->axis)));
    for (const auto& d : diagrams) {
      const linkdiag::PDLink diagram = linkdiag::normalized(d);
      if (diagram == self) return GridChoice{*corpus::entry_grid(e), "curated:" + e.name};
      if (linkdiag::normalized(linkdiag::mirror(diagram)) == self) {
        return GridChoice{gridfloer::mirror(*corpus::entry_grid(e)), "curated:" + e.name + " (mirrored)"};
      }
    }
  }
  return std::nullopt;
}

namespace {

const std::vector<std::string> kStepOrder = {
    "kh_ranks",        "rank_constraints", "signature_match", "component_types", "linking_number",
    "batson_seed",     "grid",             "hfl_top_slice",   "hfl_case",        "torres",
    "lemma",
};

// Swap x and y in a two-variable polynomial.
LaurentPoly swap_xy(const LaurentPoly& p) {
  LaurentPoly out(2);
  for (const auto& [e, c] : p.terms()) out.add_term({e[1], e[0]}, c);
  return out;
}

class Pipeline {
 public:
  explicit Pipeline(Certificate& c) : c_(c) {}

  void add(const std::string& step, const std::string& anchor, const std::string& inputs, const std::string& verdict,
           const std::string& detail) {
    c_.steps.push_back({step, anchor, fnv1a_hex(inputs), verdict, detail});
  }

  void finish(Verdict v, const std::string& reason) {
    c_.final = v;
    c_.reason = reason;
    const std::size_t done = c_.steps.size();
    for (std::size_t i = done; i < kStepOrder.size(); ++i) add(kStepOrder[i], "", "", "skipped", "");
  }

 private:
  Certificate& c_;
};

}  // namespace

Certificate classify(const linkdiag::PDLink& link, const std::optional<GridChoice>& grid_in) {
  if (link.num_components() != 2) {
    throw Error(ErrorCode::NotTwoComponents,
                "detection needs a 2-component link, got " + std::to_string(link.num_components()));
  }
  Certificate c;
  c.input = linkdiag::emit_pd(link);
  Pipeline p(c);

  // (a) Khovanov homology, rank law, signature against the targets
  const LGradedRanks L = l_collapse(khovanov::kh_ranks(link));
  const std::string Ltext = ranks_text(L);
  p.add("kh_ranks", "Kh(L;F2) in the internal grading l = h - q", c.input, "info", Ltext);
  const RankConstraints rc = rank_constraints(L);
  p.add("rank_constraints", "rank of Kh(L;F2) is a multiple of 4 for 2-component links", Ltext,
        rc.mult4 ? "pass" : "fail", "total=" + std::to_string(rc.total) + " mult4=" + (rc.mult4 ? "true" : "false"));
  if (!rc.mult4) {
    p.finish(Verdict::RuledOut, "total rank " + std::to_string(rc.total) + " is not a multiple of 4");
    return c;
  }
  std::optional<Target> target;
  std::string sm_detail;
  for (Target t : {Target::L1, Target::L2}) {
    const SignatureMatch m = signature_match(L, t);
    if (!sm_detail.empty()) sm_detail += "; ";
    sm_detail += target_name(t) + ": exact=" + (m.exact ? "true" : "false") + " mirror=" + (m.as_mirror ? "true" : "false");
    if (!target && (m.exact || m.as_mirror)) {
      target = t;
      c.mirror = !m.exact;
    }
  }
  p.add("signature_match", "Kh(L;F2) equals a target as l-graded groups, no shifts", Ltext, target ? "pass" : "fail",
        sm_detail);
  if (!target) {
    const std::string reason = rc.total != 12 ? "total rank " + std::to_string(rc.total) + ", targets have rank 12"
                                              : "l-graded signature mismatch despite total rank 12";
    p.finish(Verdict::RuledOut, reason);
    return c;
  }
  const Verdict success = *target == Target::L1 ? Verdict::MatchesL1 : Verdict::MatchesL2;
  const int expected_l = *target == Target::L1 ? 2 : 1;
  const HflCase expected_case = *target == Target::L1 ? HflCase::Braid : HflCase::Meridian;
  const linkdiag::PDLink work = c.mirror ? linkdiag::mirror(link) : link;
  const LGradedRanks Lw = c.mirror ? negate_grading(L) : L;

  // (b) components
  std::array<ComponentInfo, 2> comp;
  for (int i = 0; i < 2; ++i) comp[i] = classify_component(linkdiag::sublink(work, {i}));
  std::string ct_detail;
  for (int i = 0; i < 2; ++i) {
    if (i) ct_detail += " ";
    ct_detail += "K" + std::to_string(i) + "=" + knot_type_name(comp[i].type) + "(reduced " +
                 std::to_string(comp[i].reduced_rank) + ")";
  }
  const std::string ct_inputs = ranks_text(comp[0].ranks) + "|" + ranks_text(comp[1].ranks);
  const std::string ct_anchor = "reduced rank of each component is at most 3: unknot or trefoil";
  if (comp[0].reduced_rank > 3 || comp[1].reduced_rank > 3) {
    p.add("component_types", ct_anchor, ct_inputs, "fail", ct_detail);
    p.finish(Verdict::RuledOut, "a component has reduced rank above 3");
    return c;
  }
  if (comp[0].type == KnotType::Other || comp[1].type == KnotType::Other) {
    p.add("component_types", ct_anchor, ct_inputs, "fail", ct_detail);
    p.finish(Verdict::Inconclusive, "a component lies outside the unknot/trefoil tables");
    return c;
  }
  int u = -1;
  for (int i = 1; i >= 0; --i) {
    if (comp[i].type == KnotType::Unknot && comp[1 - i].type == KnotType::TrefoilLeft) u = i;
  }
  p.add("component_types", ct_anchor, ct_inputs, u >= 0 ? "pass" : "fail",
        ct_detail + (u >= 0 ? " U=K" + std::to_string(u) : ""));
  if (u < 0) {
    p.finish(Verdict::RuledOut, "components are not a left trefoil and an unknot");
    return c;
  }
  const int k = 1 - u;

  // (c) linking number
  const int lk = linkdiag::linking_number(work, 0, 1);
  const int l = std::abs(lk);
  p.add("linking_number", "l = |lk(K,U)| > 0", c.input, l == expected_l ? "pass" : "fail",
        "lk=" + std::to_string(lk) + " l=" + std::to_string(l) + " expected l=" + std::to_string(expected_l));
  if (l != expected_l) {
    p.finish(Verdict::RuledOut, "linking number " + std::to_string(lk) + " differs from the target");
    return c;
  }

  // (d) Batson-Seed
  const bool bs = batson_seed_check(Lw, comp[0].ranks, comp[1].ranks, lk);
  const bool bs_right = batson_seed_check(Lw, knot_table(KnotType::TrefoilRight), knot_table(KnotType::Unknot), lk);
  p.add("batson_seed", "rank^l Kh(L) >= rank^{l+2lk} Kh(K1) x Kh(K2)",
        Ltext + "|" + ct_inputs + "|" + std::to_string(lk), bs ? "pass" : "fail",
        std::string("components: ") + (bs ? "holds" : "violated") +
            "; right trefoil substitution: " + (bs_right ? "holds" : "violated"));
  if (!bs) {
    p.finish(Verdict::RuledOut, "Batson-Seed inequality violated");
    return c;
  }

  // (e) link Floer homology from a grid
  std::optional<GridChoice> choice = grid_in ? grid_in : curated_grid(link);
  if (!choice) {
    p.add("grid", "grid diagram for link Floer homology", c.input, "fail", "no curated or supplied grid");
    p.finish(Verdict::Inconclusive, "no grid diagram available for the link Floer step");
    return c;
  }
  c.grid = gridfloer::emit_grid(choice->grid);
  c.grid_source = choice->source;
  const gridfloer::GridDiagram g = c.mirror ? gridfloer::mirror(choice->grid) : choice->grid;
  const std::string gtext = gridfloer::emit_grid(g);
  if (g.size() > gridfloer::max_grid_size() || g.num_components() != 2) {
    p.add("grid", "grid diagram for link Floer homology", gtext, "fail",
          "size " + std::to_string(g.size()) + ", components " + std::to_string(g.num_components()));
    p.finish(Verdict::Inconclusive, "grid unusable");
    return c;
  }
  const linkdiag::PDLink gpd = gridfloer::grid_to_pd(g);
  const LGradedRanks gL = l_collapse(khovanov::kh_ranks(gpd));
  std::array<ComponentInfo, 2> gcomp;
  for (int i = 0; i < 2; ++i) gcomp[i] = classify_component(linkdiag::sublink(gpd, {i}));
  int gu = -1;
  for (int i = 1; i >= 0; --i) {
    if (gcomp[i].type == KnotType::Unknot && gcomp[1 - i].type == comp[k].type) gu = i;
  }
  const int glk = gridfloer::grid_linking_number(g, 0, 1);
  const bool grid_ok = gL == Lw && gu >= 0 && std::abs(glk) == l;
  p.add("grid", "grid diagram for link Floer homology", gtext, grid_ok ? "pass" : "fail",
        "source=" + choice->source + " size=" + std::to_string(g.size()) + " kh_equal=" + (gL == Lw ? "true" : "false") +
            " lk=" + std::to_string(glk) + (gu >= 0 ? " U=component " + std::to_string(gu) : ""));
  if (!grid_ok) {
    p.finish(Verdict::Inconclusive, "grid invariants differ from the diagram's");
    return c;
  }
  const gridfloer::GradedDims hat = gridfloer::hat_extract(gridfloer::tilde_homology(g), g);
  const auto dims = gridfloer::slice_dims(hat, gu);
  const auto chi = gridfloer::slice_chi_bounds(hat, gu);
  const gridfloer::Slice top = gridfloer::top_slice(hat, gu);
  std::size_t total = 0;
  bool all_certified = true;
  std::ostringstream sd;
  for (const auto& [a, d] : dims) {
    total += d;
    const long lower = chi.count(a) ? chi.at(a) : 0;
    if (lower != static_cast<long>(d)) all_certified = false;
    sd << a << ":" << d << "(chi " << lower << ") ";
  }
  const bool top_certified = chi.count(top.top) && chi.at(top.top) == static_cast<long>(top.dim);
  const long total_chi = gridfloer::total_chi_bound(hat);
  std::ostringstream td;
  td << "top=" << top.top << " dim=" << top.dim << " top_q_certified=" << (top_certified ? "true" : "false")
     << " slices " << sd.str() << "total=" << total << " chi_total=" << total_chi
     << " q_certified=" << (all_certified ? "true" : "false");
  std::string hfl_inputs = gtext + "|U=" + std::to_string(gu);
  p.add("hfl_top_slice", "top Alexander grading of HFL for U, F2 upper and Euler characteristic lower bounds",
        hfl_inputs, "info", td.str());

  HflCase hc{};
  try {
    hc = hfl_case(dims, l);
  } catch (const Error& e) {
    p.add("hfl_case", "four-case analysis of the top HFL slice", sd.str(), "fail", e.what());
    c.f2_only = !all_certified;
    p.finish(Verdict::Inconclusive, std::string("case analysis rejected the slice data: ") + e.what());
    return c;
  }
  c.f2_only = hc == HflCase::Braid ? !top_certified : !all_certified;
  p.add("hfl_case", "four-case analysis of the top HFL slice", sd.str() + "l=" + std::to_string(l),
        hc == expected_case ? "pass" : "fail",
        hfl_case_name(hc) + (c.f2_only ? " (F2-only)" : " (Q-certified)"));
  if (hc == HflCase::ParityContradiction) {
    p.finish(Verdict::RuledOut, "top slice of dimension 4 at l/2 contradicts the parity law");
    return c;
  }
  if (hc != expected_case) {
    p.finish(Verdict::Inconclusive, "case " + hfl_case_name(hc) + " differs from the target's");
    return c;
  }

  // Alexander polynomial with x on K and y on U
  LaurentPoly delta = gridfloer::alexander_polynomial(g);
  if (gu == 0) delta = swap_xy(delta);
  const LaurentPoly knot_delta = laurent::parse_poly("1 - x + x^2", 1);
  const bool torres = laurent::torres_check(delta, knot_delta, l);
  p.add("torres", "Delta_L(x,1) = (1-x^l)/(1-x) Delta_K(x) up to units", delta.to_string() + "|" + std::to_string(l),
        torres ? "pass" : "fail", "Delta=" + delta.to_string() + " Delta(x,1)=" + delta.substitute_one(1).to_string());
  if (!torres) {
    p.finish(Verdict::Inconclusive, "Torres condition fails on the grid's Alexander polynomial");
    return c;
  }

  if (hc == HflCase::Braid) {
    const bool ok = top.dim == 2 && top.top == l;
    p.add("lemma", "dimension 2 at the top grading l/2: K is an l-braid closure with axis U", td.str(),
          ok ? "pass" : "fail",
          "top=" + std::to_string(top.top) + " (doubled) versus l=" + std::to_string(l) + ", dim=" + std::to_string(top.dim));
    if (!ok) {
      p.finish(Verdict::Inconclusive, "top slice is not at l/2");
      return c;
    }
  } else {
    const laurent::GSeq gs = laurent::extract_g(delta, l);
    const laurent::Supp2Result r = laurent::lemma_supp2(gs);
    const bool ok = r.hypothesis_holds && r.consistent;
    p.add("lemma", "support in two y-degrees forces l = 1: U is a meridian of K",
          gs.normalized_delta.to_string() + "|" + std::to_string(l), ok ? "pass" : "fail",
          std::string("hypothesis=") + (r.hypothesis_holds ? "true" : "false") +
              " g_l=-g_0=" + (r.g_l_is_neg_g0 ? "true" : "false") + " l=" + std::to_string(gs.l));
    if (!ok) {
      p.finish(Verdict::Inconclusive, "two-degree lemma does not apply");
      return c;
    }
  }
  c.final = success;
  c.reason = std::string(c.mirror ? "mirror of " : "") + (success == Verdict::MatchesL1 ? "L1" : "L2") +
             (c.f2_only ? "; HFL slice data F2-only" : "; HFL slice data Q-certified");
  return c;
}

ReplayResult replay(const Certificate& cert) {
  ReplayResult r;
  const linkdiag::PDLink link = linkdiag::parse_pd(cert.input);
  std::optional<GridChoice> grid;
  if (cert.grid) grid = GridChoice{gridfloer::parse_grid(*cert.grid), cert.grid_source};
  const Certificate again = classify(link, grid);
  const std::size_t n = std::max(again.steps.size(), cert.steps.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= again.steps.size() || i >= cert.steps.size()) {
      r.mismatches.push_back("step count differs");
      break;
    }
    if (!(again.steps[i] == cert.steps[i])) r.mismatches.push_back("step " + cert.steps[i].step);
  }
  if (again.final != cert.final || again.reason != cert.reason) r.mismatches.push_back("final verdict");
  if (again.mirror != cert.mirror || again.f2_only != cert.f2_only) r.mismatches.push_back("flags");
  r.ok = r.mismatches.empty();
  return r;
}

}  // namespace khdetect::detect
