#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace khdetect::linkdiag {

using EdgeId = int;

// Edges listed counterclockwise starting at the incoming under-strand.
// The under strand runs e[0] -> e[2]; the over strand runs e[3] -> e[1] when
// sign is +1 and e[1] -> e[3] when sign is -1.
struct Crossing {
  int sign = 1;
  std::array<EdgeId, 4> e{};

  int over_in_slot() const { return sign > 0 ? 3 : 1; }
  int over_out_slot() const { return sign > 0 ? 1 : 3; }
  bool operator==(const Crossing&) const = default;
};

struct SlotRef {
  int crossing = -1;  // -1 for a free loop
  int slot = -1;
};

class PDLink {
 public:
  PDLink() = default;

  // Validates edge multiplicities and orientation consistency.
  static PDLink build(std::vector<Crossing> crossings, std::vector<EdgeId> free_loops = {});

  const std::vector<Crossing>& crossings() const { return crossings_; }
  std::size_t num_crossings() const { return crossings_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<EdgeId>& edges() const { return edges_; }  // sorted
  const std::vector<EdgeId>& free_loops() const { return free_loops_; }
  std::size_t unknotted_free_loops() const { return free_loops_.size(); }

  // Cyclically ordered edge lists, each starting at its smallest edge; ordered by that edge.
  const std::vector<std::vector<EdgeId>>& components() const { return components_; }
  std::size_t num_components() const { return components_.size(); }

  bool has_edge(EdgeId e) const;
  // Dense index in [0, num_edges()) following edges().
  std::size_t edge_index(EdgeId e) const;
  int component_of(EdgeId e) const;
  EdgeId successor(EdgeId e) const;
  SlotRef head(EdgeId e) const;  // where the edge enters a crossing
  SlotRef tail(EdgeId e) const;  // where the edge leaves a crossing

  int under_component(std::size_t crossing) const { return component_of(crossings_[crossing].e[0]); }
  int over_component(std::size_t crossing) const { return component_of(crossings_[crossing].e[1]); }

  int positive_crossings() const;
  int negative_crossings() const;
  int writhe() const { return positive_crossings() - negative_crossings(); }

  bool operator==(const PDLink& o) const {
    return crossings_ == o.crossings_ && free_loops_ == o.free_loops_;
  }

 private:
  std::vector<Crossing> crossings_;
  std::vector<EdgeId> free_loops_;
  std::vector<EdgeId> edges_;
  std::vector<SlotRef> head_;
  std::vector<SlotRef> tail_;
  std::vector<int> succ_;
  std::vector<int> comp_;
  std::vector<std::vector<EdgeId>> components_;
};

struct BraidSpec {
  int strands = 1;
  std::vector<int> word;
  bool with_axis = false;
  bool operator==(const BraidSpec&) const = default;
};

PDLink parse_pd(std::string_view text);
// Canonical text: edges relabelled 1..E along components, crossings sorted, signs annotated.
std::string emit_pd(const PDLink& link);
// The relabelled link emit_pd describes.
PDLink normalized(const PDLink& link);

BraidSpec parse_braid(std::string_view text, int strands, bool with_axis);
std::string emit_braid(const BraidSpec& spec);

// Trace closure. A positive word letter i is a negative (left-handed) crossing
// between positions i and i+1; the axis is carried as an extra strand k+1 with
// word s_k ... s_1 s_1 ... s_k.
PDLink closure(const BraidSpec& spec);

// Adds a meridian circle around `edge`. With sign -1 both new crossings are
// negative, so the linking number is -1.
PDLink meridian_union(const PDLink& knot, EdgeId edge, int sign = -1);

int linking_number(const PDLink& link, int i, int j);
PDLink mirror(const PDLink& link);
PDLink reverse(const PDLink& link, int comp);

// Keeps the listed components, dropping every crossing that involves another one.
PDLink sublink(const PDLink& link, const std::vector<int>& comps);

// Inserts a Reidemeister-I curl of the given sign on `edge`.
PDLink add_kink(const PDLink& link, EdgeId edge, int sign);

}  // namespace khdetect::linkdiag
