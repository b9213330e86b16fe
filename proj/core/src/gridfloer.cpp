#include "khdetect/gridfloer.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "khdetect/error.hpp"
#include "khdetect/exactalg.hpp"

namespace khdetect::gridfloer {

using laurent::Exponents;
using laurent::LaurentPoly;

namespace {

bool is_permutation_of_range(const std::vector<int>& v) {
  std::vector<char> seen(v.size(), 0);
  for (int x : v) {
    if (x < 0 || x >= static_cast<int>(v.size()) || seen[x]) return false;
    seen[x] = 1;
  }
  return true;
}

int sgn(int x) { return (x > 0) - (x < 0); }

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

GridDiagram GridDiagram::make(std::vector<int> X, std::vector<int> O, std::vector<int> labels) {
  const std::size_t n = X.size();
  if (O.size() != n || labels.size() != n) {
    throw Error(ErrorCode::NotPermutation, "X, O and labels must have the same length");
  }
  if (n < 2) throw Error(ErrorCode::NotPermutation, "grid must have size at least 2");
  if (!is_permutation_of_range(X)) throw Error(ErrorCode::NotPermutation, "X is not a permutation");
  if (!is_permutation_of_range(O)) throw Error(ErrorCode::NotPermutation, "O is not a permutation");
  for (std::size_t r = 0; r < n; ++r) {
    if (X[r] == O[r]) {
      throw Error(ErrorCode::MarkingCollision, "X and O share the square at row " + std::to_string(r));
    }
  }
  GridDiagram g;
  g.X_ = std::move(X);
  g.O_ = std::move(O);
  g.o_row_.assign(n, 0);
  g.x_row_.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    g.o_row_[g.O_[r]] = static_cast<int>(r);
    g.x_row_[g.X_[r]] = static_cast<int>(r);
  }
  // components are the cycles of r -> row of the O below/above X[r]
  std::vector<int> cycle(n, -1);
  std::vector<int> cycle_label;
  for (std::size_t s = 0; s < n; ++s) {
    if (cycle[s] >= 0) continue;
    const int id = static_cast<int>(cycle_label.size());
    cycle_label.push_back(labels[s]);
    int r = static_cast<int>(s);
    while (cycle[r] < 0) {
      cycle[r] = id;
      if (labels[r] != labels[s]) {
        throw Error(ErrorCode::ComponentLabelMismatch,
                    "rows " + std::to_string(s) + " and " + std::to_string(r) + " lie on one component but carry labels " +
                        std::to_string(labels[s]) + " and " + std::to_string(labels[r]));
      }
      r = g.o_row_[g.X_[r]];
    }
  }
  std::vector<int> distinct = cycle_label;
  std::sort(distinct.begin(), distinct.end());
  if (std::adjacent_find(distinct.begin(), distinct.end()) != distinct.end()) {
    throw Error(ErrorCode::ComponentLabelMismatch, "two components share a label");
  }
  g.comp_.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    g.comp_[r] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), labels[r]) - distinct.begin());
  }
  g.num_components_ = static_cast<int>(distinct.size());
  return g;
}

std::vector<int> GridDiagram::markings_per_component() const {
  std::vector<int> n(num_components_, 0);
  for (int c : comp_) ++n[c];
  return n;
}

// ---------------------------------------------------------------- text

GridDiagram parse_grid(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '/', '\n');
  std::istringstream lines(s);
  std::string line;
  std::vector<int> X;
  std::vector<int> O;
  std::vector<int> labels;
  int declared = -1;
  bool have_x = false;
  bool have_o = false;
  bool have_comp = false;
  auto read_list = [](const std::string& body) {
    std::istringstream in(body);
    std::vector<int> out;
    std::string tok;
    while (in >> tok) {
      try {
        std::size_t used = 0;
        out.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::MalformedSyntax, "bad grid entry '" + tok + "'");
      }
    }
    return out;
  };
  while (std::getline(lines, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      const auto v = read_list(line);
      if (v.size() != 1 || declared >= 0) throw Error(ErrorCode::MalformedSyntax, "unexpected grid line '" + line + "'");
      declared = v[0];
      continue;
    }
    std::string key = line.substr(0, colon);
    key.erase(key.find_last_not_of(" \t") + 1);
    const auto values = read_list(line.substr(colon + 1));
    if (key == "X") {
      X = values;
      have_x = true;
    } else if (key == "O") {
      O = values;
      have_o = true;
    } else if (key == "comp") {
      labels = values;
      have_comp = true;
    } else {
      throw Error(ErrorCode::MalformedSyntax, "unknown grid field '" + key + "'");
    }
  }
  if (!have_x || !have_o) throw Error(ErrorCode::MalformedSyntax, "grid needs X: and O: lists");
  if (declared >= 0 && declared != static_cast<int>(X.size())) {
    throw Error(ErrorCode::MalformedSyntax, "declared size " + std::to_string(declared) + " but X has " +
                                                std::to_string(X.size()) + " entries");
  }
  if (!have_comp) {
    // one label per cycle, in order of first row
    if (!is_permutation_of_range(X) || !is_permutation_of_range(O) || X.size() != O.size()) {
      throw Error(ErrorCode::NotPermutation, "X and O must be permutations of one size");
    }
    std::vector<int> o_row(O.size());
    for (std::size_t r = 0; r < O.size(); ++r) o_row[O[r]] = static_cast<int>(r);
    labels.assign(X.size(), -1);
    int next = 0;
    for (std::size_t s = 0; s < X.size(); ++s) {
      if (labels[s] >= 0) continue;
      for (int r = static_cast<int>(s); labels[r] < 0; r = o_row[X[r]]) labels[r] = next;
      ++next;
    }
  }
  return GridDiagram::make(std::move(X), std::move(O), std::move(labels));
}

std::string emit_grid(const GridDiagram& g) {
  std::ostringstream out;
  out << g.size() << " / X:";
  for (int c : g.X()) out << ' ' << c;
  out << " / O:";
  for (int c : g.O()) out << ' ' << c;
  out << " / comp:";
  for (int c : g.comp_of_row()) out << ' ' << c;
  return out.str();
}

// ---------------------------------------------------------------- diagram

namespace {

bool strictly_between(int v, int a, int b) { return std::min(a, b) < v && v < std::max(a, b); }

}  // namespace

int grid_linking_number(const GridDiagram& g, int i, int j) {
  const int k = g.num_components();
  if (i < 0 || j < 0 || i >= k || j >= k) throw Error(ErrorCode::IndexOutOfRange, "component index out of range");
  if (i == j) throw Error(ErrorCode::SameComponent, "linking number needs two distinct components");
  const int n = g.size();
  int total = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int xr = g.row_of_X_in_column(c);
      const int orow = g.row_of_O_in_column(c);
      if (!strictly_between(c, g.X()[r], g.O()[r]) || !strictly_between(r, xr, orow)) continue;
      const int under = g.comp_of_row()[r];
      const int over = g.comp_of_row()[orow];
      if (!((under == i && over == j) || (under == j && over == i))) continue;
      const int dx = sgn(g.X()[r] - g.O()[r]);
      const int dy = sgn(orow - xr);
      total += -dx * dy;
    }
  }
  return total / 2;
}

linkdiag::PDLink grid_to_pd(const GridDiagram& g) {
  using linkdiag::EdgeId;
  const int n = g.size();
  struct Ends {
    EdgeId under_in = 0, under_out = 0, over_in = 0, over_out = 0;
  };
  std::map<std::pair<int, int>, Ends> ends;
  auto is_crossing = [&](int r, int c) {
    return strictly_between(c, g.X()[r], g.O()[r]) &&
           strictly_between(r, g.row_of_X_in_column(c), g.row_of_O_in_column(c));
  };
  EdgeId next = 1;
  std::vector<EdgeId> loops;
  std::vector<bool> done(n, false);
  for (int comp = 0; comp < g.num_components(); ++comp) {
    int start = -1;
    for (int r = 0; r < n; ++r) {
      if (g.comp_of_row()[r] == comp) {
        start = r;
        break;
      }
    }
    const EdgeId first = next++;
    EdgeId cur = first;
    std::vector<std::pair<int, int>> touched;
    int r = start;
    do {
      done[r] = true;
      const int from = g.O()[r];
      const int to = g.X()[r];
      const int dx = sgn(to - from);
      for (int c = from + dx; c != to; c += dx) {
        if (!is_crossing(r, c)) continue;
        ends[{r, c}].under_in = cur;
        cur = next++;
        ends[{r, c}].under_out = cur;
        touched.emplace_back(r, c);
      }
      const int col = to;
      const int r2 = g.row_of_O_in_column(col);
      const int dy = sgn(r2 - r);
      for (int rr = r + dy; rr != r2; rr += dy) {
        if (!is_crossing(rr, col)) continue;
        ends[{rr, col}].over_in = cur;
        cur = next++;
        ends[{rr, col}].over_out = cur;
        touched.emplace_back(rr, col);
      }
      r = r2;
    } while (r != start);
    if (cur == first) {
      loops.push_back(first);
      continue;
    }
    for (const auto& key : touched) {
      Ends& e = ends[key];
      for (EdgeId* p : {&e.under_in, &e.under_out, &e.over_in, &e.over_out}) {
        if (*p == cur) *p = first;
      }
    }
  }
  std::vector<linkdiag::Crossing> cs;
  for (const auto& [key, e] : ends) {
    const auto [r, c] = key;
    const int dx = sgn(g.X()[r] - g.O()[r]);
    const int dy = sgn(g.row_of_O_in_column(c) - g.row_of_X_in_column(c));
    // compass slots: 0 = E, 1 = N, 2 = W, 3 = S
    std::array<EdgeId, 4> at{};
    at[dx > 0 ? 2 : 0] = e.under_in;
    at[dx > 0 ? 0 : 2] = e.under_out;
    at[dy > 0 ? 3 : 1] = e.over_in;
    at[dy > 0 ? 1 : 3] = e.over_out;
    const int s0 = dx > 0 ? 2 : 0;
    linkdiag::Crossing x;
    for (int k = 0; k < 4; ++k) x.e[k] = at[(s0 + k) % 4];
    x.sign = -dx * dy;
    cs.push_back(x);
  }
  return linkdiag::normalized(linkdiag::PDLink::build(std::move(cs), std::move(loops)));
}

GridDiagram mirror(const GridDiagram& g) {
  const int n = g.size();
  std::vector<int> X = g.X();
  std::vector<int> O = g.O();
  for (int r = 0; r < n; ++r) {
    X[r] = n - 1 - X[r];
    O[r] = n - 1 - O[r];
  }
  return GridDiagram::make(X, O, g.comp_of_row());
}

// ---------------------------------------------------------------- gradings

namespace {

// Grading evaluator with per-marking-set lookup tables.
class GradingTables {
 public:
  explicit GradingTables(const GridDiagram& g) : n_(g.size()), ncomp_(g.num_components()) {
    std::vector<std::pair<int, int>> Os;
    std::vector<std::pair<int, int>> Xs;
    std::vector<std::vector<std::pair<int, int>>> Oi(ncomp_);
    std::vector<std::vector<std::pair<int, int>>> Xi(ncomp_);
    for (int r = 0; r < n_; ++r) {
      Os.emplace_back(g.O()[r], r);
      Xs.emplace_back(g.X()[r], r);
      Oi[g.comp_of_row()[r]].emplace_back(g.O()[r], r);
      // X in row r lies on the component of the O in its column
      Xi[g.comp_of_row()[g.row_of_O_in_column(g.X()[r])]].emplace_back(g.X()[r], r);
    }
    table_O_ = table(Os);
    for (int i = 0; i < ncomp_; ++i) {
      table_Xi_.push_back(table(Xi[i]));
      table_Oi_.push_back(table(Oi[i]));
    }
    const auto markings = g.markings_per_component();
    maslov_const_ = I(Os, Os) + 1;
    for (int i = 0; i < ncomp_; ++i) {
      const long c = -S(Xs, Xi[i]) + S(Xs, Oi[i]) - S(Os, Xi[i]) + S(Os, Oi[i]) - 2L * (markings[i] - 1);
      alex_const4_.push_back(c);
    }
  }

  MultiGrading eval(const std::vector<int>& sigma) const {
    MultiGrading m;
    long ixx = 0;
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) ixx += sigma[a] < sigma[b];
    }
    long so = 0;
    for (int i = 0; i < n_; ++i) so += table_O_[i * n_ + sigma[i]];
    m.maslov = static_cast<int>(ixx - so + maslov_const_);
    m.alex.resize(ncomp_);
    for (int c = 0; c < ncomp_; ++c) {
      long sx = 0;
      long soc = 0;
      for (int i = 0; i < n_; ++i) {
        sx += table_Xi_[c][i * n_ + sigma[i]];
        soc += table_Oi_[c][i * n_ + sigma[i]];
      }
      const long four_a = 2 * sx - 2 * soc + alex_const4_[c];
      if (four_a % 2 != 0) throw Error(ErrorCode::InternalError, "Alexander grading is not a half-integer");
      m.alex[c] = static_cast<int>(four_a / 2);
    }
    return m;
  }

 private:
  // I(P,Q): pairs p in P, q in Q with p strictly south-west of q, markings at
  // (col + 1/2, row + 1/2)
  static long I(const std::vector<std::pair<int, int>>& P, const std::vector<std::pair<int, int>>& Q) {
    long t = 0;
    for (const auto& p : P) {
      for (const auto& q : Q) t += (p.first < q.first && p.second < q.second);
    }
    return t;
  }
  static long S(const std::vector<std::pair<int, int>>& P, const std::vector<std::pair<int, int>>& Q) {
    return I(P, Q) + I(Q, P);
  }
  // For lattice point (i, j): markings north-east plus markings south-west.
  std::vector<int> table(const std::vector<std::pair<int, int>>& M) const {
    std::vector<int> t(static_cast<std::size_t>(n_) * n_, 0);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        int v = 0;
        for (const auto& [c, r] : M) {
          if (c >= i && r >= j) ++v;
          if (c < i && r < j) ++v;
        }
        t[i * n_ + j] = v;
      }
    }
    return t;
  }

  int n_;
  int ncomp_;
  std::vector<int> table_O_;
  std::vector<std::vector<int>> table_Xi_;
  std::vector<std::vector<int>> table_Oi_;
  long maslov_const_ = 0;
  std::vector<long> alex_const4_;
};

std::uint64_t perm_rank(const std::vector<int>& sigma, const std::vector<std::uint64_t>& fact) {
  const int n = static_cast<int>(sigma.size());
  std::uint32_t used = 0;
  std::uint64_t rank = 0;
  for (int i = 0; i < n; ++i) {
    const int v = sigma[i];
    const int smaller_unused = v - std::popcount(used & ((1U << v) - 1));
    rank += static_cast<std::uint64_t>(smaller_unused) * fact[n - 1 - i];
    used |= 1U << v;
  }
  return rank;
}

void check_size(const GridDiagram& g) {
  if (g.size() > max_grid_size()) {
    throw Error(ErrorCode::GridTooLarge, "grid size " + std::to_string(g.size()) + " exceeds the cap " +
                                             std::to_string(max_grid_size()) + " (set KHDETECT_MAX_GRID)");
  }
}

}  // namespace

MultiGrading gradings(const GridDiagram& g, const GridState& s) {
  if (static_cast<int>(s.sigma.size()) != g.size() || !is_permutation_of_range(s.sigma)) {
    throw Error(ErrorCode::NotPermutation, "state is not a permutation of the grid size");
  }
  return GradingTables(g).eval(s.sigma);
}

int max_grid_size() {
  if (const char* env = std::getenv("KHDETECT_MAX_GRID")) {
    try {
      const int v = std::stoi(env);
      if (v >= 2 && v <= 12) return v;
    } catch (const std::logic_error&) {
    }
  }
  return 10;
}

GradedDims tilde_homology(const GridDiagram& g) {
  check_size(g);
  const int n = g.size();
  std::vector<std::uint64_t> fact(n + 1, 1);
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  const std::uint64_t N = fact[n];
  const GradingTables tables(g);

  // pass 1: gradings and block membership
  std::map<MultiGrading, std::uint32_t> block_id;
  std::vector<MultiGrading> block_key;
  std::vector<std::uint32_t> block_size;
  std::vector<std::uint32_t> state_block(N);
  std::vector<std::uint32_t> state_local(N);
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (std::uint64_t k = 0; k < N; ++k) {
    MultiGrading m = tables.eval(sigma);
    auto it = block_id.find(m);
    if (it == block_id.end()) {
      it = block_id.emplace(m, static_cast<std::uint32_t>(block_key.size())).first;
      block_key.push_back(m);
      block_size.push_back(0);
    }
    state_block[k] = it->second;
    state_local[k] = block_size[it->second]++;
    std::next_permutation(sigma.begin(), sigma.end());
  }

  // target block of each block: same Alexander, Maslov one lower
  std::vector<int> down(block_key.size(), -1);
  for (std::size_t b = 0; b < block_key.size(); ++b) {
    MultiGrading t = block_key[b];
    --t.maslov;
    auto it = block_id.find(t);
    if (it != block_id.end()) down[b] = static_cast<int>(it->second);
  }
  std::vector<exactalg::SparseMatrix> d;
  d.reserve(block_key.size());
  for (std::size_t b = 0; b < block_key.size(); ++b) {
    d.emplace_back(down[b] >= 0 ? block_size[down[b]] : 0, block_size[b]);
  }

  // marking counts over the doubled torus
  const int m2 = 2 * n;
  std::vector<int> pre((m2 + 1) * (m2 + 1), 0);
  auto P = [&](int c, int r) -> int& { return pre[r * (m2 + 1) + c]; };
  for (int r = 0; r < m2; ++r) {
    for (int c = 0; c < m2; ++c) {
      const int rr = r % n;
      const int cc = c % n;
      const int here = (g.X()[rr] == cc) + (g.O()[rr] == cc);
      P(c + 1, r + 1) = here + P(c, r + 1) + P(c + 1, r) - P(c, r);
    }
  }
  auto markings_in = [&](int a, int w, int b, int h) {
    return P(a + w, b + h) - P(a, b + h) - P(a + w, b) + P(a, b);
  };

  // pass 2: empty rectangles
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<int> tau(n);
  for (std::uint64_t k = 0; k < N; ++k) {
    const std::uint32_t sb = state_block[k];
    auto empty = [&](int a, int w, int b, int h) {
      if (markings_in(a, w, b, h) != 0) return false;
      for (int t = 1; t < w; ++t) {
        const int dist = mod(sigma[(a + t) % n] - b, n);
        if (dist > 0 && dist < h) return false;
      }
      return true;
    };
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        int count = 0;
        if (empty(i, j - i, sigma[i], mod(sigma[j] - sigma[i], n))) ++count;
        if (empty(j, n - (j - i), sigma[j], mod(sigma[i] - sigma[j], n))) ++count;
        if (count % 2 == 0) continue;
        tau = sigma;
        std::swap(tau[i], tau[j]);
        const std::uint64_t y = perm_rank(tau, fact);
        const std::uint32_t tb = state_block[y];
        if (static_cast<int>(tb) != down[sb]) {
          throw Error(ErrorCode::InternalError, "empty rectangle does not drop the Maslov grading by one");
        }
        d[sb].add(state_local[y], state_local[k], 1);
      }
    }
    std::next_permutation(sigma.begin(), sigma.end());
  }

  GradedDims out;
  for (std::size_t b = 0; b < block_key.size(); ++b) {
    MultiGrading up = block_key[b];
    ++up.maslov;
    auto it = block_id.find(up);
    const exactalg::SparseMatrix empty_in(block_size[b], 0);
    const exactalg::SparseMatrix& d_in = it == block_id.end() ? empty_in : d[it->second];
    std::size_t h = 0;
    try {
      h = exactalg::homology_rank(d_in, d[b], exactalg::Field::F2);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CompositionNotZero) {
        throw Error(ErrorCode::DifferentialNotSquareZero, "tilde differential squares to a nonzero map");
      }
      throw;
    }
    if (h > 0) out[block_key[b]] = h;
  }
  return out;
}

GradedDims hat_extract(const GradedDims& tilde, const GridDiagram& g) {
  std::map<MultiGrading, long> cur;
  for (const auto& [k, v] : tilde) cur[k] = static_cast<long>(v);
  const auto markings = g.markings_per_component();
  for (int i = 0; i < g.num_components(); ++i) {
    for (int rep = 0; rep < markings[i] - 1; ++rep) {
      // cur = H * (1 + m^-1 t_i^-2); solve from the top Maslov grading down
      std::map<MultiGrading, long> H;
      for (auto it = cur.rbegin(); it != cur.rend(); ++it) {
        MultiGrading above = it->first;
        above.maslov += 1;
        above.alex[i] += 2;
        auto prev = H.find(above);
        const long v = it->second - (prev == H.end() ? 0 : prev->second);
        if (v < 0) throw Error(ErrorCode::DeconvolutionFailed, "negative quotient coefficient");
        if (v > 0) H[it->first] = v;
      }
      std::map<MultiGrading, long> back;
      for (const auto& [k, v] : H) {
        back[k] += v;
        MultiGrading below = k;
        below.maslov -= 1;
        below.alex[i] -= 2;
        back[below] += v;
      }
      std::erase_if(back, [](const auto& kv) { return kv.second == 0; });
      if (back != cur) throw Error(ErrorCode::DeconvolutionFailed, "stabilization factor does not divide");
      cur = std::move(H);
    }
  }
  GradedDims out;
  for (const auto& [k, v] : cur) out[k] = static_cast<std::size_t>(v);
  return out;
}

LaurentPoly euler_char(const GridDiagram& g) {
  check_size(g);
  const int n = g.size();
  const int ell = g.num_components();
  const GradingTables tables(g);
  std::map<MultiGrading, long> acc;
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    MultiGrading m = tables.eval(sigma);
    const long s = (m.maslov % 2 == 0) ? 1 : -1;
    m.maslov = 0;
    acc[m] += s;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  LaurentPoly chi(ell);
  for (const auto& [m, c] : acc) chi.add_term(m.alex, c);
  const auto markings = g.markings_per_component();
  for (int i = 0; i < ell; ++i) {
    Exponents e(ell, 0);
    LaurentPoly factor = LaurentPoly::constant(ell, 1);
    e[i] = -2;
    factor.add_term(e, -1);
    for (int rep = 0; rep < markings[i] - 1; ++rep) {
      try {
        chi = laurent::exact_divide(chi, factor);
      } catch (const Error& err) {
        throw Error(ErrorCode::StabilizationDivisionFailed, err.what());
      }
    }
  }
  return chi;
}

LaurentPoly alexander_polynomial(const GridDiagram& g) {
  LaurentPoly chi = euler_char(g);
  const int ell = g.num_components();
  if (chi.is_zero()) return chi;
  if (ell > 1) {
    for (int i = 0; i < ell; ++i) {
      Exponents up(ell, 0);
      Exponents dn(ell, 0);
      up[i] = 1;
      dn[i] = -1;
      LaurentPoly f = LaurentPoly::monomial(up) - LaurentPoly::monomial(dn);
      try {
        chi = laurent::exact_divide(chi, f);
      } catch (const Error& err) {
        throw Error(ErrorCode::StabilizationDivisionFailed, err.what());
      }
    }
  }
  Exponents lo(ell);
  for (int i = 0; i < ell; ++i) lo[i] = -chi.min_exp(i);
  return chi.shifted(lo).halved();
}

Slice top_slice(const GradedDims& hat, int component) {
  const auto dims = slice_dims(hat, component);
  if (dims.empty()) return {};
  return {dims.rbegin()->first, dims.rbegin()->second};
}

std::map<int, std::size_t> slice_dims(const GradedDims& hat, int component) {
  std::map<int, std::size_t> out;
  for (const auto& [k, v] : hat) {
    if (v > 0) out[k.alex.at(component)] += v;
  }
  return out;
}

namespace {

std::map<std::vector<int>, long> chi_by_alexander(const GradedDims& hat) {
  std::map<std::vector<int>, long> chi;
  for (const auto& [k, v] : hat) chi[k.alex] += (k.maslov % 2 == 0 ? 1 : -1) * static_cast<long>(v);
  return chi;
}

}  // namespace

std::map<int, long> slice_chi_bounds(const GradedDims& hat, int component) {
  std::map<int, long> out;
  for (const auto& [a, c] : chi_by_alexander(hat)) out[a.at(component)] += std::labs(c);
  return out;
}

long total_chi_bound(const GradedDims& hat) {
  long t = 0;
  for (const auto& kv : chi_by_alexander(hat)) t += std::labs(kv.second);
  return t;
}

// ---------------------------------------------------------------- moves

namespace {

GridDiagram remake(const std::vector<int>& X, const std::vector<int>& O, const std::vector<int>& labels) {
  return GridDiagram::make(X, O, labels);
}

bool interleaved(int a1, int b1, int a2, int b2) {
  if (a1 > b1) std::swap(a1, b1);
  if (a2 > b2) std::swap(a2, b2);
  if (a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2) return true;
  const bool disjoint = b1 < a2 || b2 < a1;
  const bool nested = (a1 < a2 && b2 < b1) || (a2 < a1 && b1 < b2);
  return !(disjoint || nested);
}

}  // namespace

bool commute_columns(GridDiagram& g, int c) {
  const int n = g.size();
  if (c < 0 || c + 1 >= n) return false;
  if (interleaved(g.row_of_X_in_column(c), g.row_of_O_in_column(c), g.row_of_X_in_column(c + 1),
                  g.row_of_O_in_column(c + 1))) {
    return false;
  }
  std::vector<int> X = g.X();
  std::vector<int> O = g.O();
  for (int r = 0; r < n; ++r) {
    for (int* v : {&X[r], &O[r]}) {
      if (*v == c) {
        *v = c + 1;
      } else if (*v == c + 1) {
        *v = c;
      }
    }
  }
  g = remake(X, O, g.comp_of_row());
  return true;
}

bool commute_rows(GridDiagram& g, int r) {
  const int n = g.size();
  if (r < 0 || r + 1 >= n) return false;
  if (interleaved(g.X()[r], g.O()[r], g.X()[r + 1], g.O()[r + 1])) return false;
  std::vector<int> X = g.X();
  std::vector<int> O = g.O();
  std::vector<int> labels = g.comp_of_row();
  std::swap(X[r], X[r + 1]);
  std::swap(O[r], O[r + 1]);
  std::swap(labels[r], labels[r + 1]);
  g = remake(X, O, labels);
  return true;
}

void rotate_rows(GridDiagram& g) {
  const int n = g.size();
  std::vector<int> X(n), O(n), labels(n);
  for (int r = 0; r < n; ++r) {
    X[(r + 1) % n] = g.X()[r];
    O[(r + 1) % n] = g.O()[r];
    labels[(r + 1) % n] = g.comp_of_row()[r];
  }
  g = remake(X, O, labels);
}

void rotate_columns(GridDiagram& g) {
  const int n = g.size();
  std::vector<int> X = g.X();
  std::vector<int> O = g.O();
  for (int r = 0; r < n; ++r) {
    X[r] = (X[r] + 1) % n;
    O[r] = (O[r] + 1) % n;
  }
  g = remake(X, O, g.comp_of_row());
}

bool destabilize_at(GridDiagram& g, int row, int col) {
  const int n = g.size();
  if (n < 3 || row < 0 || row >= n || col < 0 || col >= n) return false;
  const bool corner_x = g.X()[row] == col;
  if (!corner_x && g.O()[row] != col) return false;
  const int col2 = corner_x ? g.O()[row] : g.X()[row];
  const int row2 = corner_x ? g.row_of_O_in_column(col) : g.row_of_X_in_column(col);
  const bool col_adj = mod(col2 - col, n) == 1 || mod(col - col2, n) == 1;
  const bool row_adj = mod(row2 - row, n) == 1 || mod(row - row2, n) == 1;
  if (!col_adj || !row_adj) return false;
  if (g.X()[row2] == col2 || g.O()[row2] == col2) return false;  // fourth corner occupied
  std::vector<int> X;
  std::vector<int> O;
  std::vector<int> labels;
  auto squeeze = [&](int c) { return c > col ? c - 1 : c; };
  for (int r = 0; r < n; ++r) {
    if (r == row) continue;
    int x = g.X()[r];
    int o = g.O()[r];
    if (r == row2) {
      // the marking in the corner's column slides to the fourth corner
      if (x == col) x = col2;
      if (o == col) o = col2;
    }
    X.push_back(squeeze(x));
    O.push_back(squeeze(o));
    labels.push_back(g.comp_of_row()[r]);
  }
  g = remake(X, O, labels);
  return true;
}

bool destabilize_any(GridDiagram& g) {
  for (int r = 0; r < g.size(); ++r) {
    if (destabilize_at(g, r, g.X()[r]) || destabilize_at(g, r, g.O()[r])) return true;
  }
  return false;
}

GridDiagram stabilize(const GridDiagram& g, int row, bool at_x, bool above, bool right) {
  const int n = g.size();
  if (row < 0 || row >= n) throw Error(ErrorCode::IndexOutOfRange, "row " + std::to_string(row));
  const int bc = at_x ? g.X()[row] : g.O()[row];
  const int r0 = above ? row + 1 : row;        // new row index
  const int c0 = right ? bc + 1 : bc;          // new column index
  const int b_row = above ? row : row + 1;     // old marking row after insertion
  const int b_col_old = right ? bc : bc + 1;   // old marking column after insertion
  auto shift_c = [&](int c) { return c >= c0 ? c + 1 : c; };
  std::vector<int> X(n + 1), O(n + 1), labels(n + 1);
  for (int r = 0; r < n; ++r) {
    const int nr = r >= r0 ? r + 1 : r;
    X[nr] = shift_c(g.X()[r]);
    O[nr] = shift_c(g.O()[r]);
    labels[nr] = g.comp_of_row()[r];
  }
  // the old marking moves into the new column; the new row gets a marking of
  // each type: the opposite type in the new column, the same type in the old one
  if (at_x) {
    X[b_row] = c0;
    O[r0] = c0;
    X[r0] = b_col_old;
  } else {
    O[b_row] = c0;
    X[r0] = c0;
    O[r0] = b_col_old;
  }
  labels[r0] = g.comp_of_row()[row];
  return remake(X, O, labels);
}

GridDiagram simplify(const GridDiagram& start, std::uint64_t seed, int target, long max_steps) {
  GridDiagram cur = start;
  while (destabilize_any(cur)) {
  }
  GridDiagram best = cur;
  std::mt19937_64 rng(seed);
  for (long step = 0; step < max_steps && best.size() > target; ++step) {
    const int n = cur.size();
    if (n <= 2) break;
    switch (rng() % 4) {
      case 0:
        rotate_rows(cur);
        break;
      case 1:
        rotate_columns(cur);
        break;
      case 2:
        commute_columns(cur, static_cast<int>(rng() % (n - 1)));
        break;
      default:
        commute_rows(cur, static_cast<int>(rng() % (n - 1)));
        break;
    }
    while (destabilize_any(cur)) {
    }
    if (cur.size() < best.size()) best = cur;
  }
  return best;
}

// ---------------------------------------------------------------- braids

GridDiagram grid_from_braid(const linkdiag::BraidSpec& spec) {
  std::vector<int> word = spec.word;
  int K = spec.strands;
  if (spec.with_axis) {
    for (int i = K; i >= 1; --i) word.push_back(i);
    for (int i = 1; i <= K; ++i) word.push_back(i);
    K += 1;
  }
  for (int w : word) {
    if (w == 0 || std::abs(w) >= K) throw Error(ErrorCode::GeneratorOutOfRange, "generator " + std::to_string(w));
  }
  const int m = static_cast<int>(word.size());
  // columns: L_0 < ... < L_{K-1} < jogs < R_{K-1} < ... < R_0
  auto L = [&](int p) { return p; };
  auto J = [&](int t) { return K + t; };
  auto R = [&](int p) { return K + m + (K - 1 - p); };
  struct Piece {
    int start;
    int end = -1;
    int first_pos;  // position the piece's strand occupies at the braid start, if initial
  };
  std::vector<Piece> pieces;
  std::vector<int> order;  // piece ids bottom to top
  std::vector<int> at(K);
  for (int p = 0; p < K; ++p) {
    pieces.push_back({L(p), -1, p});
    order.push_back(p);
    at[p] = p;
  }
  for (int t = 0; t < m; ++t) {
    const int lo = std::abs(word[t]) - 1;
    const int hi = lo + 1;
    const int fresh = static_cast<int>(pieces.size());
    pieces.push_back({J(t), -1, -1});
    if (word[t] > 0) {
      // lower strand jumps up over the upper one
      pieces[at[lo]].end = J(t);
      order.insert(std::find(order.begin(), order.end(), at[hi]) + 1, fresh);
      at[lo] = at[hi];
      at[hi] = fresh;
    } else {
      pieces[at[hi]].end = J(t);
      order.insert(std::find(order.begin(), order.end(), at[lo]), fresh);
      at[hi] = at[lo];
      at[lo] = fresh;
    }
  }
  for (int p = 0; p < K; ++p) pieces[at[p]].end = R(p);
  const int n = static_cast<int>(order.size()) + K;
  std::vector<int> X(n), O(n);
  std::vector<int> row_piece(n, -1);
  for (std::size_t r = 0; r < order.size(); ++r) {
    O[r] = pieces[order[r]].start;
    X[r] = pieces[order[r]].end;
    row_piece[r] = order[r];
  }
  // closure rows above everything, innermost (top position) lowest
  for (int p = K - 1; p >= 0; --p) {
    const int r = static_cast<int>(order.size()) + (K - 1 - p);
    O[r] = R(p);
    X[r] = L(p);
  }
  // label components like closure(): crossed strands by smallest start position, then untouched ones
  std::vector<bool> touched(K, false);
  for (int w : word) touched[std::abs(w) - 1] = touched[std::abs(w)] = true;
  std::vector<int> o_row(n);
  for (int r = 0; r < n; ++r) o_row[O[r]] = r;
  std::vector<int> cyc(n, -1);
  std::vector<int> cyc_key;
  for (int s = 0; s < n; ++s) {
    if (cyc[s] >= 0) continue;
    const int id = static_cast<int>(cyc_key.size());
    int key = 1 << 30;
    for (int r = s; cyc[r] < 0; r = o_row[X[r]]) {
      cyc[r] = id;
      if (row_piece[r] >= 0 && pieces[row_piece[r]].first_pos >= 0) {
        const int p = pieces[row_piece[r]].first_pos;
        key = std::min(key, (touched[p] ? 0 : K) + p);
      }
    }
    cyc_key.push_back(key);
  }
  std::vector<int> labels(n);
  for (int r = 0; r < n; ++r) labels[r] = cyc_key[cyc[r]];
  GridDiagram g = GridDiagram::make(X, O, labels);
  while (destabilize_any(g)) {
  }
  return g;
}

}  // namespace khdetect::gridfloer
