#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khdetect/gridfloer.hpp"
#include "khdetect/khovanov.hpp"
#include "khdetect/linkdiag.hpp"

namespace khdetect::detect {

using khovanov::LGradedRanks;

// True iff L(l) >= (K1 x K2)(l + 2 lk) for every l.
bool batson_seed_check(const LGradedRanks& L, const LGradedRanks& K1, const LGradedRanks& K2, int lk);

struct RankConstraints {
  std::size_t total = 0;
  bool mult4 = false;
};
RankConstraints rank_constraints(const LGradedRanks& L);

enum class Target { U2, L1, L2, L6a3, L4a1, L6a2, TU, RightTU };
Target parse_target(std::string_view name);  // UnknownTarget
std::string target_name(Target t);
const LGradedRanks& target_table(Target t);

struct SignatureMatch {
  bool exact = false;
  bool as_mirror = false;
};
// Gradedwise comparison, no shifts.
SignatureMatch signature_match(const LGradedRanks& L, Target t);

enum class HflCase { Braid, ParityContradiction, FourDegrees, Meridian };
std::string hfl_case_name(HflCase c);
// slice_dims keyed by doubled Alexander grading of the unknotted component, l = |lk| > 0.
HflCase hfl_case(const std::map<int, std::size_t>& slice_dims, int l);

enum class KnotType { Unknot, TrefoilLeft, TrefoilRight, Other };
std::string knot_type_name(KnotType t);
const LGradedRanks& knot_table(KnotType t);  // Other has no table
struct ComponentInfo {
  KnotType type = KnotType::Other;
  std::size_t reduced_rank = 0;
  LGradedRanks ranks;
};
ComponentInfo classify_component(const linkdiag::PDLink& knot);

enum class Verdict { MatchesL1, MatchesL2, RuledOut, Inconclusive };
std::string verdict_name(Verdict v);

struct Step {
  std::string step;
  std::string anchor;
  std::string inputs_hash;  // FNV-1a 64, hex
  std::string verdict;      // pass, fail, info, skipped
  std::string detail;
  bool operator==(const Step&) const = default;
};

struct Certificate {
  std::string input;  // canonical PD of the classified link
  std::optional<std::string> grid;
  std::string grid_source;  // curated, supplied, none
  std::vector<Step> steps;
  Verdict final = Verdict::Inconclusive;
  std::string reason;
  bool mirror = false;
  bool f2_only = false;  // HFL case decided on F2 numbers not certified over Q
  bool operator==(const Certificate&) const = default;
};

std::string fnv1a_hex(std::string_view data);

struct GridChoice {
  gridfloer::GridDiagram grid;
  std::string source;
};

// Looks up a curated grid in the built-in corpus for this diagram or its mirror.
std::optional<GridChoice> curated_grid(const linkdiag::PDLink& link);

// The full pipeline; without an explicit grid it falls back to the curated corpus.
Certificate classify(const linkdiag::PDLink& link, const std::optional<GridChoice>& grid = std::nullopt);

struct ReplayResult {
  bool ok = true;
  std::vector<std::string> mismatches;
};
// Recomputes every step and compares it with the recorded one.
ReplayResult replay(const Certificate& cert);

}  // namespace khdetect::detect
