#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "khdetect/laurent.hpp"
#include "khdetect/linkdiag.hpp"

namespace khdetect::gridfloer {

// Row r carries an X in column X[r] and an O in column O[r]. The link runs
// horizontally from O to X and vertically from X to O; vertical strands pass
// over horizontal ones.
class GridDiagram {
 public:
  GridDiagram() = default;
  // Labels are arbitrary integers, one per row (the component of that row's O).
  static GridDiagram make(std::vector<int> X, std::vector<int> O, std::vector<int> labels);

  int size() const { return static_cast<int>(X_.size()); }
  const std::vector<int>& X() const { return X_; }
  const std::vector<int>& O() const { return O_; }
  // Component of each row, normalized to 0..components-1 by increasing label.
  const std::vector<int>& comp_of_row() const { return comp_; }
  int num_components() const { return num_components_; }
  // Number of O markings on each component.
  std::vector<int> markings_per_component() const;
  // Row holding the O (resp. X) of a column.
  int row_of_O_in_column(int c) const { return o_row_[c]; }
  int row_of_X_in_column(int c) const { return x_row_[c]; }

  bool operator==(const GridDiagram& o) const { return X_ == o.X_ && O_ == o.O_ && comp_ == o.comp_; }

 private:
  std::vector<int> X_;
  std::vector<int> O_;
  std::vector<int> comp_;
  std::vector<int> o_row_;
  std::vector<int> x_row_;
  int num_components_ = 0;
};

// `n / X: c0 c1 ... / O: c0 c1 ... / comp: labels` (slashes or newlines).
GridDiagram parse_grid(std::string_view text);
std::string emit_grid(const GridDiagram& g);

int grid_linking_number(const GridDiagram& g, int i, int j);
linkdiag::PDLink grid_to_pd(const GridDiagram& g);
// Reflection in a vertical line: presents the mirror image.
GridDiagram mirror(const GridDiagram& g);

// sigma[i] is the horizontal circle met by vertical circle i.
struct GridState {
  std::vector<int> sigma;
};

struct MultiGrading {
  int maslov = 0;
  std::vector<int> alex;  // doubled
  auto operator<=>(const MultiGrading&) const = default;
};

MultiGrading gradings(const GridDiagram& g, const GridState& s);

using GradedDims = std::map<MultiGrading, std::size_t>;

// Grid size cap, default 10, overridable with KHDETECT_MAX_GRID.
int max_grid_size();

GradedDims tilde_homology(const GridDiagram& g);
GradedDims hat_extract(const GradedDims& tilde, const GridDiagram& g);

// Hat-level Euler characteristic, doubled exponents, one variable per component.
laurent::LaurentPoly euler_char(const GridDiagram& g);
// Alexander polynomial (ordinary exponents, defined up to units) from euler_char.
laurent::LaurentPoly alexander_polynomial(const GridDiagram& g);

struct Slice {
  int top = 0;  // doubled grading
  std::size_t dim = 0;
};
Slice top_slice(const GradedDims& hat, int component);
// Total dimension per doubled grading of one component.
std::map<int, std::size_t> slice_dims(const GradedDims& hat, int component);
// Sum over Alexander multi-gradings in the slice of |Euler characteristic|,
// a lower bound for the dimension over any field.
std::map<int, long> slice_chi_bounds(const GradedDims& hat, int component);
long total_chi_bound(const GradedDims& hat);

// Rectilinear braid closure, then destabilized.
GridDiagram grid_from_braid(const linkdiag::BraidSpec& spec);

// Local moves. Each returns false (leaving g untouched) when not applicable.
bool commute_columns(GridDiagram& g, int c);  // columns c, c+1
bool commute_rows(GridDiagram& g, int r);     // rows r, r+1
void rotate_rows(GridDiagram& g);
void rotate_columns(GridDiagram& g);
bool destabilize_at(GridDiagram& g, int row, int col);
bool destabilize_any(GridDiagram& g);
// Stabilize at the marking in `row` (X when at_x, else O), adding a row and column.
GridDiagram stabilize(const GridDiagram& g, int row, bool at_x, bool above, bool right);

// Seeded random commutations/rotations interleaved with destabilizations.
GridDiagram simplify(const GridDiagram& g, std::uint64_t seed, int target, long max_steps);

}  // namespace khdetect::gridfloer
