#include "khdetect/khovanov.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

#include "khdetect/error.hpp"

namespace khdetect::khovanov {

using linkdiag::PDLink;

BigradedRanks::BigradedRanks(std::map<std::pair<int, int>, std::size_t> entries) {
  for (const auto& [k, v] : entries) add(k.first, k.second, v);
}

void BigradedRanks::add(int h, int q, std::size_t rank) {
  if (rank > 0) entries_[{h, q}] += rank;
}

std::size_t BigradedRanks::at(int h, int q) const {
  auto it = entries_.find({h, q});
  return it == entries_.end() ? 0 : it->second;
}

std::size_t BigradedRanks::total() const {
  std::size_t t = 0;
  for (const auto& kv : entries_) t += kv.second;
  return t;
}

LGradedRanks::LGradedRanks(std::map<int, std::size_t> entries) {
  for (const auto& [k, v] : entries) add(k, v);
}

LGradedRanks LGradedRanks::from_lists(const std::vector<std::size_t>& ranks, const std::vector<int>& gradings) {
  if (ranks.size() != gradings.size()) throw Error(ErrorCode::LengthMismatch, "ranks and gradings differ in length");
  LGradedRanks r;
  for (std::size_t i = 0; i < ranks.size(); ++i) r.add(gradings[i], ranks[i]);
  return r;
}

void LGradedRanks::add(int l, std::size_t rank) {
  if (rank > 0) entries_[l] += rank;
}

std::size_t LGradedRanks::at(int l) const {
  auto it = entries_.find(l);
  return it == entries_.end() ? 0 : it->second;
}

std::size_t LGradedRanks::total() const {
  std::size_t t = 0;
  for (const auto& kv : entries_) t += kv.second;
  return t;
}

LGradedRanks l_collapse(const BigradedRanks& r) {
  LGradedRanks out;
  for (const auto& [hq, rank] : r.entries()) out.add(hq.first - hq.second, rank);
  return out;
}

LGradedRanks tensor(const LGradedRanks& a, const LGradedRanks& b) {
  LGradedRanks out;
  for (const auto& [la, ra] : a.entries()) {
    for (const auto& [lb, rb] : b.entries()) out.add(la + lb, ra * rb);
  }
  return out;
}

LGradedRanks shift(const LGradedRanks& a, int s) {
  LGradedRanks out;
  for (const auto& [l, r] : a.entries()) out.add(l + s, r);
  return out;
}

LGradedRanks negate_grading(const LGradedRanks& a) {
  LGradedRanks out;
  for (const auto& [l, r] : a.entries()) out.add(-l, r);
  return out;
}

namespace {

// Per-crossing arc pairs as dense edge indices.
struct Arcs {
  std::size_t num_edges = 0;
  std::vector<std::array<int, 4>> x;
};

Arcs arcs_of(const PDLink& link) {
  Arcs a;
  a.num_edges = link.num_edges();
  for (const auto& c : link.crossings()) {
    std::array<int, 4> idx{};
    for (int s = 0; s < 4; ++s) idx[s] = static_cast<int>(link.edge_index(c.e[s]));
    a.x.push_back(idx);
  }
  return a;
}

int find(std::vector<int>& p, int x) {
  while (p[x] != x) {
    p[x] = p[p[x]];
    x = p[x];
  }
  return x;
}

// Circle ids numbered by first appearance along the edge index order.
std::size_t resolve_into(const Arcs& arcs, std::uint64_t vertex, std::vector<int>& parent, std::uint8_t* out) {
  const std::size_t E = arcs.num_edges;
  parent.resize(E);
  std::iota(parent.begin(), parent.end(), 0);
  auto unite = [&](int a, int b) {
    a = find(parent, a);
    b = find(parent, b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::size_t i = 0; i < arcs.x.size(); ++i) {
    const auto& e = arcs.x[i];
    if ((vertex >> i) & 1U) {
      unite(e[0], e[3]);
      unite(e[1], e[2]);
    } else {
      unite(e[0], e[1]);
      unite(e[2], e[3]);
    }
  }
  std::vector<int> label(E, -1);
  std::size_t n = 0;
  for (std::size_t k = 0; k < E; ++k) {
    const int r = find(parent, static_cast<int>(k));
    if (label[r] < 0) label[r] = static_cast<int>(n++);
    out[k] = static_cast<std::uint8_t>(label[r]);
  }
  return n;
}

}  // namespace

CircleStructure resolve(const PDLink& link, const std::vector<bool>& vertex) {
  if (vertex.size() != link.num_crossings()) {
    throw Error(ErrorCode::LengthMismatch, "vertex has " + std::to_string(vertex.size()) + " bits for " +
                                               std::to_string(link.num_crossings()) + " crossings");
  }
  if (vertex.size() > 64) throw Error(ErrorCode::TooManyCrossings, "more than 64 crossings");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < vertex.size(); ++i) {
    if (vertex[i]) v |= std::uint64_t{1} << i;
  }
  const Arcs arcs = arcs_of(link);
  std::vector<int> parent;
  std::vector<std::uint8_t> buf(arcs.num_edges);
  CircleStructure cs;
  cs.num_circles = resolve_into(arcs, v, parent, buf.data());
  cs.arc_circle.assign(buf.begin(), buf.end());
  return cs;
}

BigradedRanks kh_ranks(const PDLink& link, const KhOptions& options) {
  const std::size_t c = link.num_crossings();
  if (c > kMaxCrossings) {
    throw Error(ErrorCode::TooManyCrossings, std::to_string(c) + " crossings exceeds the limit of " +
                                                 std::to_string(kMaxCrossings));
  }
  int marked_edge = -1;
  if (options.reduced) {
    if (!options.basepoint) throw Error(ErrorCode::BasepointRequired, "reduced homology needs a basepoint edge");
    if (!link.has_edge(*options.basepoint)) {
      throw Error(ErrorCode::BasepointNotFound, "edge " + std::to_string(*options.basepoint));
    }
    marked_edge = static_cast<int>(link.edge_index(*options.basepoint));
  }
  const Arcs arcs = arcs_of(link);
  const std::size_t E = arcs.num_edges;
  const std::uint64_t V = std::uint64_t{1} << c;
  const int n_plus = link.positive_crossings();
  const int n_minus = link.negative_crossings();

  // circle structure of every vertex
  std::vector<std::uint8_t> arc(static_cast<std::size_t>(V) * std::max<std::size_t>(E, 1));
  std::vector<std::uint8_t> ncirc(V);
  {
    std::vector<int> parent;
    for (std::uint64_t v = 0; v < V; ++v) {
      ncirc[v] = static_cast<std::uint8_t>(resolve_into(arcs, v, parent, arc.data() + v * E));
    }
  }
  auto circle_of = [&](std::uint64_t v, int edge) -> int { return arc[v * E + edge]; };

  // generators: label bit j set means circle j carries x
  auto num_labels = [&](std::uint64_t v) -> std::uint64_t {
    return std::uint64_t{1} << (ncirc[v] - (options.reduced ? 1 : 0));
  };
  auto marked = [&](std::uint64_t v) -> int { return options.reduced ? circle_of(v, marked_edge) : -1; };
  // reduced labels drop the (always set) marked bit
  auto compress = [](std::uint64_t mask, int m) -> std::uint64_t {
    if (m < 0) return mask;
    return ((mask >> (m + 1)) << m) | (mask & ((std::uint64_t{1} << m) - 1));
  };
  auto expand = [](std::uint64_t idx, int m) -> std::uint64_t {
    if (m < 0) return idx;
    const std::uint64_t low = idx & ((std::uint64_t{1} << m) - 1);
    return ((idx >> m) << (m + 1)) | (std::uint64_t{1} << m) | low;
  };

  std::vector<std::uint64_t> offset(V + 1, 0);
  for (std::uint64_t v = 0; v < V; ++v) offset[v + 1] = offset[v] + num_labels(v);
  const std::uint64_t G = offset[V];

  std::map<std::pair<int, int>, std::uint32_t> block_size;
  std::vector<std::uint32_t> local(G);
  std::vector<int> gen_h(G);
  std::vector<int> gen_q(G);
  for (std::uint64_t v = 0; v < V; ++v) {
    const int weight = std::popcount(v);
    const int m = marked(v);
    for (std::uint64_t idx = 0; idx < num_labels(v); ++idx) {
      const std::uint64_t mask = expand(idx, m);
      const int xs = std::popcount(mask);
      const int h = weight - n_minus;
      const int q = (ncirc[v] - 2 * xs) + weight + n_plus - 2 * n_minus + (options.reduced ? 1 : 0);
      const std::uint64_t g = offset[v] + idx;
      gen_h[g] = h;
      gen_q[g] = q;
      local[g] = block_size[{h, q}]++;
    }
  }

  std::map<std::pair<int, int>, exactalg::SparseMatrix> d;  // C^{h,q} -> C^{h+1,q}
  auto block = [&](int h, int q) -> exactalg::SparseMatrix& {
    auto it = d.find({h, q});
    if (it == d.end()) {
      auto src = block_size.find({h, q});
      auto dst = block_size.find({h + 1, q});
      const std::size_t rows = dst == block_size.end() ? 0 : dst->second;
      const std::size_t cols = src == block_size.end() ? 0 : src->second;
      it = d.emplace(std::make_pair(h, q), exactalg::SparseMatrix(rows, cols)).first;
    }
    return it->second;
  };

  for (std::uint64_t v = 0; v < V; ++v) {
    const int m = marked(v);
    for (std::size_t i = 0; i < c; ++i) {
      if ((v >> i) & 1U) continue;
      const std::uint64_t w = v | (std::uint64_t{1} << i);
      const int mw = marked(w);
      const long sign = (std::popcount(v & ((std::uint64_t{1} << i) - 1)) & 1) ? -1 : 1;
      const auto& e = arcs.x[i];
      const int A = circle_of(v, e[0]);
      const int B = circle_of(v, e[2]);
      // where every circle of v not touched by crossing i goes in w
      std::vector<int> carry(ncirc[v], -1);
      for (std::size_t k = 0; k < E; ++k) {
        const int cv = circle_of(v, static_cast<int>(k));
        if (cv != A && cv != B) carry[cv] = circle_of(w, static_cast<int>(k));
      }
      for (std::uint64_t idx = 0; idx < num_labels(v); ++idx) {
        const std::uint64_t mask = expand(idx, m);
        std::uint64_t base = 0;
        for (int j = 0; j < ncirc[v]; ++j) {
          if (carry[j] >= 0 && ((mask >> j) & 1U)) base |= std::uint64_t{1} << carry[j];
        }
        const std::uint64_t src = offset[v] + idx;
        auto emit = [&](std::uint64_t target_mask) {
          const std::uint64_t dst = offset[w] + compress(target_mask, mw);
          block(gen_h[src], gen_q[src]).add(local[dst], local[src], sign);
        };
        const bool xa = (mask >> A) & 1U;
        if (A != B) {
          const int C = circle_of(w, e[0]);
          const bool xb = (mask >> B) & 1U;
          if (xa && xb) continue;
          emit(base | ((xa || xb) ? (std::uint64_t{1} << C) : 0));
        } else {
          const std::uint64_t c1 = std::uint64_t{1} << circle_of(w, e[0]);
          const std::uint64_t c2 = std::uint64_t{1} << circle_of(w, e[1]);
          if (xa) {
            emit(base | c1 | c2);
          } else {
            emit(base | c2);
            emit(base | c1);
          }
        }
      }
    }
  }

  BigradedRanks out;
  for (const auto& [hq, size] : block_size) {
    const auto [h, q] = hq;
    const exactalg::SparseMatrix& d_in = block(h - 1, q);
    const exactalg::SparseMatrix& d_out = block(h, q);
    out.add(h, q, exactalg::homology_rank(d_in, d_out, options.field));
  }
  return out;
}

}  // namespace khdetect::khovanov
