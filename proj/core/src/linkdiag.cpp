#include "khdetect/linkdiag.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "khdetect/error.hpp"

namespace khdetect::linkdiag {

namespace {

int slot_role_in(const Crossing& c, int slot) {
  // 1 = incoming, 0 = outgoing
  if (slot == 0) return 1;
  if (slot == 2) return 0;
  return slot == c.over_in_slot() ? 1 : 0;
}

int partner_out_slot(const Crossing& c, int in_slot) {
  return in_slot == 0 ? 2 : c.over_out_slot();
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

PDLink PDLink::build(std::vector<Crossing> crossings, std::vector<EdgeId> free_loops) {
  PDLink L;
  L.crossings_ = std::move(crossings);
  L.free_loops_ = std::move(free_loops);

  std::map<EdgeId, int> count;
  for (const Crossing& c : L.crossings_) {
    if (c.sign != 1 && c.sign != -1) {
      throw Error(ErrorCode::InconsistentOrientation, "crossing sign must be +1 or -1");
    }
    for (EdgeId e : c.e) ++count[e];
  }
  for (const auto& [e, n] : count) {
    if (n != 2) {
      throw Error(ErrorCode::EdgeUsedNotTwice,
                  "edge " + std::to_string(e) + " appears " + std::to_string(n) + " time(s)");
    }
  }
  for (EdgeId e : L.free_loops_) {
    if (count.count(e)) {
      throw Error(ErrorCode::EdgeUsedNotTwice, "free loop edge " + std::to_string(e) + " used twice");
    }
    count[e] = 0;
  }

  for (const auto& kv : count) L.edges_.push_back(kv.first);
  const std::size_t E = L.edges_.size();
  L.head_.assign(E, SlotRef{});
  L.tail_.assign(E, SlotRef{});
  L.succ_.assign(E, -1);
  std::vector<int> heads(E, 0);
  std::vector<int> tails(E, 0);
  for (std::size_t i = 0; i < L.crossings_.size(); ++i) {
    const Crossing& c = L.crossings_[i];
    for (int s = 0; s < 4; ++s) {
      const std::size_t k = L.edge_index(c.e[s]);
      if (slot_role_in(c, s)) {
        L.head_[k] = {static_cast<int>(i), s};
        ++heads[k];
      } else {
        L.tail_[k] = {static_cast<int>(i), s};
        ++tails[k];
      }
    }
  }
  for (std::size_t k = 0; k < E; ++k) {
    if (count[L.edges_[k]] == 0) {
      L.succ_[k] = static_cast<int>(k);
      continue;
    }
    if (heads[k] != 1 || tails[k] != 1) {
      throw Error(ErrorCode::InconsistentOrientation,
                  "edge " + std::to_string(L.edges_[k]) + " has " + std::to_string(heads[k]) + " heads and " +
                      std::to_string(tails[k]) + " tails");
    }
    const Crossing& c = L.crossings_[L.head_[k].crossing];
    L.succ_[k] = static_cast<int>(L.edge_index(c.e[partner_out_slot(c, L.head_[k].slot)]));
  }

  L.comp_.assign(E, -1);
  for (std::size_t k = 0; k < E; ++k) {
    if (L.comp_[k] >= 0) continue;
    const int id = static_cast<int>(L.components_.size());
    std::vector<EdgeId> cyc;
    int cur = static_cast<int>(k);
    while (L.comp_[cur] < 0) {
      L.comp_[cur] = id;
      cyc.push_back(L.edges_[cur]);
      cur = L.succ_[cur];
    }
    if (cur != static_cast<int>(k)) {
      throw Error(ErrorCode::InconsistentOrientation, "edge successor map is not a permutation");
    }
    L.components_.push_back(std::move(cyc));
  }
  return L;
}

bool PDLink::has_edge(EdgeId e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

std::size_t PDLink::edge_index(EdgeId e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) throw Error(ErrorCode::EdgeNotFound, "edge " + std::to_string(e));
  return static_cast<std::size_t>(it - edges_.begin());
}

int PDLink::component_of(EdgeId e) const { return comp_[edge_index(e)]; }
EdgeId PDLink::successor(EdgeId e) const { return edges_[succ_[edge_index(e)]]; }
SlotRef PDLink::head(EdgeId e) const { return head_[edge_index(e)]; }
SlotRef PDLink::tail(EdgeId e) const { return tail_[edge_index(e)]; }

int PDLink::positive_crossings() const {
  return static_cast<int>(std::count_if(crossings_.begin(), crossings_.end(), [](const Crossing& c) { return c.sign > 0; }));
}

int PDLink::negative_crossings() const { return static_cast<int>(crossings_.size()) - positive_crossings(); }

// ---------------------------------------------------------------- parsing

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char ch) {
    if (peek() == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char ch) {
    if (!accept(ch)) fail(std::string("expected '") + ch + "'");
  }
  bool accept_word(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  long integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer");
    }
    try {
      return std::stol(std::string(s_.substr(start, pos_ - start)));
    } catch (const std::out_of_range&) {
      pos_ = start;
      fail("integer out of range");
    }
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::MalformedSyntax, msg + " at position " + std::to_string(pos_));
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

struct RawCrossing {
  std::array<EdgeId, 4> e{};
  int sign = 0;  // 0 = not annotated
};

// Decide the over-strand direction of every crossing from the fixed roles of
// slots 0 (in) and 2 (out), propagating along edges.
std::vector<int> infer_signs(const std::vector<RawCrossing>& raw) {
  const std::size_t n = raw.size();
  std::vector<int> sign(n, 0);
  std::map<EdgeId, std::vector<std::pair<int, int>>> occ;
  for (std::size_t i = 0; i < n; ++i) {
    for (int s = 0; s < 4; ++s) occ[raw[i].e[s]].emplace_back(static_cast<int>(i), s);
  }
  auto role = [&](int ci, int s) -> int {  // 1 in, 0 out, -1 unknown
    if (s == 0) return 1;
    if (s == 2) return 0;
    if (sign[ci] == 0) return -1;
    return (sign[ci] > 0) == (s == 3) ? 1 : 0;
  };
  std::deque<std::pair<int, int>> queue;
  auto settle = [&](int ci, int sg) {
    sign[ci] = sg;
    queue.emplace_back(ci, 1);
    queue.emplace_back(ci, 3);
  };
  for (std::size_t i = 0; i < n; ++i) {
    queue.emplace_back(static_cast<int>(i), 0);
    queue.emplace_back(static_cast<int>(i), 2);
    if (raw[i].sign != 0) settle(static_cast<int>(i), raw[i].sign);
  }
  std::size_t next_free = 0;
  while (true) {
    while (!queue.empty()) {
      auto [ci, s] = queue.front();
      queue.pop_front();
      const int r = role(ci, s);
      const auto& o = occ[raw[ci].e[s]];
      auto other = (o[0] == std::make_pair(ci, s)) ? o[1] : o[0];
      const int want = 1 - r;
      const int have = role(other.first, other.second);
      if (have == -1) {
        // other slot is 1 or 3 of an undecided crossing
        const bool in_at_3 = (other.second == 3) == (want == 1);
        settle(other.first, in_at_3 ? 1 : -1);
      } else if (have != want) {
        throw Error(ErrorCode::InconsistentOrientation,
                    "edge " + std::to_string(raw[ci].e[s]) + " cannot be oriented consistently");
      }
    }
    while (next_free < n && sign[next_free] != 0) ++next_free;
    if (next_free == n) break;
    // label succession: the over strand runs from the smaller label to the
    // next one, or wraps from the largest label back to the smallest
    const RawCrossing& c = raw[next_free];
    const EdgeId b = c.e[1];
    const EdgeId d = c.e[3];
    bool d_to_b;
    if (b == d + 1) {
      d_to_b = true;
    } else if (d == b + 1) {
      d_to_b = false;
    } else {
      d_to_b = d > b;
    }
    settle(static_cast<int>(next_free), d_to_b ? 1 : -1);
  }
  return sign;
}

}  // namespace

PDLink parse_pd(std::string_view text) {
  Lexer lx(text);
  std::vector<RawCrossing> raw;
  int loops = 0;
  bool any = false;
  while (!lx.at_end()) {
    if (lx.accept_word("PD")) {
      lx.expect('[');
      if (!lx.accept(']')) {
        do {
          if (!lx.accept('X')) lx.fail("expected X[...]");
          RawCrossing rc;
          if (lx.accept('+')) {
            rc.sign = 1;
          } else if (lx.accept('-')) {
            rc.sign = -1;
          }
          lx.expect('[');
          for (int s = 0; s < 4; ++s) {
            if (s > 0) lx.expect(',');
            const long v = lx.integer();
            rc.e[s] = static_cast<EdgeId>(v);
          }
          lx.expect(']');
          raw.push_back(rc);
        } while (lx.accept(','));
        lx.expect(']');
      }
      any = true;
    } else if (lx.accept('U')) {
      ++loops;
      any = true;
    } else {
      lx.fail("expected PD[...] or U");
    }
    lx.accept(',');
  }
  if (!any) lx.fail("empty input");

  std::map<EdgeId, int> count;
  for (const RawCrossing& c : raw) {
    for (EdgeId e : c.e) ++count[e];
  }
  for (const auto& [e, n] : count) {
    if (n != 2) {
      throw Error(ErrorCode::EdgeUsedNotTwice,
                  "edge " + std::to_string(e) + " appears " + std::to_string(n) + " time(s)");
    }
  }
  const std::vector<int> signs = infer_signs(raw);
  std::vector<Crossing> cs;
  cs.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) cs.push_back(Crossing{signs[i], raw[i].e});
  EdgeId next = count.empty() ? 1 : count.rbegin()->first + 1;
  std::vector<EdgeId> free_loops;
  for (int i = 0; i < loops; ++i) free_loops.push_back(next++);
  return PDLink::build(std::move(cs), std::move(free_loops));
}

PDLink normalized(const PDLink& link) {
  std::map<EdgeId, EdgeId> relabel;
  EdgeId next = 1;
  std::size_t loops = 0;
  for (const auto& comp : link.components()) {
    if (link.head(comp.front()).crossing < 0) {
      ++loops;
      continue;
    }
    for (EdgeId e : comp) relabel[e] = next++;
  }
  std::vector<EdgeId> free_loops;
  for (std::size_t i = 0; i < loops; ++i) free_loops.push_back(next++);
  std::vector<Crossing> cs;
  cs.reserve(link.num_crossings());
  for (const Crossing& c : link.crossings()) {
    Crossing d = c;
    for (EdgeId& e : d.e) e = relabel.at(e);
    cs.push_back(d);
  }
  std::sort(cs.begin(), cs.end(), [](const Crossing& a, const Crossing& b) {
    return a.e != b.e ? a.e < b.e : a.sign < b.sign;
  });
  return PDLink::build(std::move(cs), std::move(free_loops));
}

std::string emit_pd(const PDLink& link) {
  const PDLink n = normalized(link);
  std::ostringstream out;
  if (n.num_crossings() > 0 || n.unknotted_free_loops() == 0) {
    out << "PD[";
    bool first = true;
    for (const Crossing& c : n.crossings()) {
      if (!first) out << ',';
      first = false;
      out << 'X' << (c.sign > 0 ? '+' : '-') << '[' << c.e[0] << ',' << c.e[1] << ',' << c.e[2] << ','
          << c.e[3] << ']';
    }
    out << ']';
  }
  for (std::size_t i = 0; i < n.unknotted_free_loops(); ++i) {
    if (i > 0 || n.num_crossings() > 0) out << ' ';
    out << 'U';
  }
  return out.str();
}

// ---------------------------------------------------------------- braids

BraidSpec parse_braid(std::string_view text, int strands, bool with_axis) {
  if (strands < 1) throw Error(ErrorCode::GeneratorOutOfRange, "braid needs at least one strand");
  BraidSpec spec{strands, {}, with_axis};
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    int gen = 0;
    int power = 1;
    try {
      std::size_t used = 0;
      if (tok[0] == 's' || tok[0] == 'S') {
        const std::string rest = tok.substr(1);
        const auto caret = rest.find('^');
        gen = std::stoi(rest.substr(0, caret), &used);
        if (used != (caret == std::string::npos ? rest.size() : caret)) throw std::invalid_argument(tok);
        if (caret != std::string::npos) {
          const std::string p = rest.substr(caret + 1);
          power = std::stoi(p, &used);
          if (used != p.size()) throw std::invalid_argument(tok);
        }
        if (gen <= 0) throw std::invalid_argument(tok);
      } else {
        gen = std::stoi(tok, &used);
        if (used != tok.size() || gen == 0) throw std::invalid_argument(tok);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::MalformedSyntax, "bad braid token '" + tok + "'");
    }
    if (power == 0) continue;
    if (std::abs(gen) >= strands) {
      throw Error(ErrorCode::GeneratorOutOfRange,
                  "generator " + std::to_string(std::abs(gen)) + " needs more than " + std::to_string(strands) +
                      " strands");
    }
    const int letter = power > 0 ? gen : -gen;
    for (int i = 0; i < std::abs(power); ++i) spec.word.push_back(letter);
  }
  return spec;
}

std::string emit_braid(const BraidSpec& spec) {
  std::ostringstream out;
  for (std::size_t i = 0; i < spec.word.size(); ++i) {
    if (i) out << ' ';
    const int g = spec.word[i];
    out << 's' << std::abs(g);
    if (g < 0) out << "^-1";
  }
  return out.str();
}

PDLink closure(const BraidSpec& spec) {
  const int k = spec.strands;
  std::vector<int> word = spec.word;
  int width = k;
  for (int g : word) {
    if (g == 0 || std::abs(g) >= k) {
      throw Error(ErrorCode::GeneratorOutOfRange, "generator " + std::to_string(g));
    }
  }
  if (spec.with_axis) {
    for (int i = k; i >= 1; --i) word.push_back(i);
    for (int i = 1; i <= k; ++i) word.push_back(i);
    width = k + 1;
  }
  std::vector<EdgeId> init(width);
  std::iota(init.begin(), init.end(), 1);
  std::vector<EdgeId> cur = init;
  EdgeId next = width + 1;
  std::vector<Crossing> cs;
  for (int g : word) {
    const int i = std::abs(g) - 1;
    const EdgeId ei = cur[i];
    const EdgeId ej = cur[i + 1];
    const EdgeId fi = next++;
    const EdgeId fj = next++;
    if (g > 0) {
      cs.push_back(Crossing{-1, {ei, ej, fj, fi}});
    } else {
      cs.push_back(Crossing{+1, {ej, fj, fi, ei}});
    }
    cur[i] = fi;
    cur[i + 1] = fj;
  }
  std::map<EdgeId, EdgeId> glue;
  std::vector<EdgeId> free_loops;
  for (int p = 0; p < width; ++p) {
    if (cur[p] == init[p]) {
      free_loops.push_back(init[p]);
    } else {
      glue[cur[p]] = init[p];
    }
  }
  for (Crossing& c : cs) {
    for (EdgeId& e : c.e) {
      auto it = glue.find(e);
      if (it != glue.end()) e = it->second;
    }
  }
  return normalized(PDLink::build(std::move(cs), std::move(free_loops)));
}

// ---------------------------------------------------------------- transforms

PDLink meridian_union(const PDLink& knot, EdgeId edge, int sign) {
  if (!knot.has_edge(edge)) throw Error(ErrorCode::EdgeNotFound, "edge " + std::to_string(edge));
  if (knot.num_components() != 1) {
    throw Error(ErrorCode::IndexOutOfRange, "meridian_union expects a knot");
  }
  EdgeId next = knot.edges().back() + 1;
  const EdgeId e1 = next++;
  const EdgeId e2 = next++;
  const EdgeId e3 = next++;
  const EdgeId m1 = next++;
  const EdgeId m2 = next++;
  std::vector<Crossing> cs = knot.crossings();
  std::vector<EdgeId> loops;
  EdgeId first = e1;
  EdgeId last = e3;
  const SlotRef t = knot.tail(edge);
  const SlotRef h = knot.head(edge);
  if (t.crossing < 0) {
    last = first;  // the knot was a single free loop
  } else {
    cs[t.crossing].e[t.slot] = first;
    cs[h.crossing].e[h.slot] = last;
  }
  // strand runs north through both; meridian counterclockwise: over at the
  // bottom crossing, under at the top one; both positive
  cs.push_back(Crossing{+1, {first, m1, e2, m2}});
  cs.push_back(Crossing{+1, {m1, last, m2, e2}});
  PDLink out = PDLink::build(std::move(cs), std::move(loops));
  if (sign < 0) out = reverse(out, out.component_of(m1));
  return normalized(out);
}

int linking_number(const PDLink& link, int i, int j) {
  const int n = static_cast<int>(link.num_components());
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "component index out of range");
  }
  if (i == j) throw Error(ErrorCode::SameComponent, "linking number needs two distinct components");
  int total = 0;
  for (std::size_t c = 0; c < link.num_crossings(); ++c) {
    const int a = link.under_component(c);
    const int b = link.over_component(c);
    if ((a == i && b == j) || (a == j && b == i)) total += link.crossings()[c].sign;
  }
  return total / 2;
}

PDLink mirror(const PDLink& link) {
  std::vector<Crossing> cs;
  cs.reserve(link.num_crossings());
  for (const Crossing& c : link.crossings()) {
    const auto& e = c.e;
    if (c.sign > 0) {
      cs.push_back(Crossing{-1, {e[3], e[0], e[1], e[2]}});
    } else {
      cs.push_back(Crossing{+1, {e[1], e[2], e[3], e[0]}});
    }
  }
  return PDLink::build(std::move(cs), link.free_loops());
}

PDLink reverse(const PDLink& link, int comp) {
  if (comp < 0 || comp >= static_cast<int>(link.num_components())) {
    throw Error(ErrorCode::IndexOutOfRange, "component " + std::to_string(comp));
  }
  std::vector<Crossing> cs;
  cs.reserve(link.num_crossings());
  for (std::size_t i = 0; i < link.num_crossings(); ++i) {
    const Crossing& c = link.crossings()[i];
    const bool flip_under = link.under_component(i) == comp;
    const bool flip_over = link.over_component(i) == comp;
    Crossing d = c;
    int over_in = c.over_in_slot();
    if (flip_under) {
      d.e = {c.e[2], c.e[3], c.e[0], c.e[1]};
      over_in = (over_in + 2) % 4;
    }
    if (flip_over) over_in = 4 - over_in;  // 1 <-> 3
    d.sign = over_in == 3 ? 1 : -1;
    cs.push_back(d);
  }
  return PDLink::build(std::move(cs), link.free_loops());
}

PDLink sublink(const PDLink& link, const std::vector<int>& comps) {
  const std::set<int> keep(comps.begin(), comps.end());
  for (int c : keep) {
    if (c < 0 || c >= static_cast<int>(link.num_components())) {
      throw Error(ErrorCode::IndexOutOfRange, "component " + std::to_string(c));
    }
  }
  UnionFind uf(link.num_edges());
  std::vector<Crossing> kept;
  for (std::size_t i = 0; i < link.num_crossings(); ++i) {
    const Crossing& c = link.crossings()[i];
    const bool under = keep.count(link.under_component(i)) > 0;
    const bool over = keep.count(link.over_component(i)) > 0;
    if (under && over) {
      kept.push_back(c);
      continue;
    }
    if (under) uf.unite(link.edge_index(c.e[0]), link.edge_index(c.e[2]));
    if (over) uf.unite(link.edge_index(c.e[1]), link.edge_index(c.e[3]));
  }
  auto rep = [&](EdgeId e) { return link.edges()[uf.find(static_cast<int>(link.edge_index(e)))]; };
  for (Crossing& c : kept) {
    for (EdgeId& e : c.e) e = rep(e);
  }
  std::set<EdgeId> used;
  for (const Crossing& c : kept) used.insert(c.e.begin(), c.e.end());
  std::vector<EdgeId> loops;
  for (int ci : keep) {
    const EdgeId r = rep(link.components()[ci].front());
    if (!used.count(r)) loops.push_back(r);
  }
  return PDLink::build(std::move(kept), std::move(loops));
}

PDLink add_kink(const PDLink& link, EdgeId edge, int sign) {
  if (!link.has_edge(edge)) throw Error(ErrorCode::EdgeNotFound, "edge " + std::to_string(edge));
  EdgeId next = link.edges().back() + 1;
  const EdgeId e1 = next++;
  const EdgeId loop = next++;
  EdgeId e2 = next++;
  std::vector<Crossing> cs = link.crossings();
  std::vector<EdgeId> loops;
  const SlotRef t = link.tail(edge);
  const SlotRef h = link.head(edge);
  if (t.crossing < 0) {
    e2 = e1;
    for (EdgeId f : link.free_loops()) {
      if (f != edge) loops.push_back(f);
    }
  } else {
    loops = link.free_loops();
    cs[t.crossing].e[t.slot] = e1;
    cs[h.crossing].e[h.slot] = e2;
  }
  if (sign > 0) {
    cs.push_back(Crossing{+1, {e1, e2, loop, loop}});
  } else {
    cs.push_back(Crossing{-1, {e1, loop, loop, e2}});
  }
  return PDLink::build(std::move(cs), std::move(loops));
}

}  // namespace khdetect::linkdiag
