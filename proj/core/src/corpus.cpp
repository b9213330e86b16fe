#include "khdetect/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "khdetect/error.hpp"
#include "khdetect/khovanov.hpp"
#include "khdetect/laurent.hpp"

namespace khdetect::corpus {

extern const std::string_view kBuiltinCorpus;

using nlohmann::json;

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Paper: return "paper";
    case Provenance::Derived: return "derived";
    case Provenance::Trivial: return "trivial";
  }
  return "?";
}

namespace {

[[noreturn]] void violation(int line, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line) + ": " + what);
}

Provenance parse_provenance(const json& j, int line, const std::string& key) {
  if (!j.contains("provenance") || !j["provenance"].is_string()) {
    violation(line, "expected." + key + " needs a provenance tag");
  }
  const std::string p = j["provenance"];
  if (p == "paper") return Provenance::Paper;
  if (p == "derived") return Provenance::Derived;
  if (p == "trivial") return Provenance::Trivial;
  violation(line, "unknown provenance '" + p + "' in expected." + key);
}

template <class T, class F>
std::optional<Tagged<T>> tagged(const json& expected, const std::string& key, int line, F read) {
  if (!expected.contains(key)) return std::nullopt;
  const json& j = expected[key];
  if (!j.is_object() || !j.contains("value")) violation(line, "expected." + key + " must be {value, provenance}");
  for (const auto& [k, v] : j.items()) {
    if (k != "value" && k != "provenance") violation(line, "unknown field expected." + key + "." + k);
  }
  Tagged<T> t;
  t.provenance = parse_provenance(j, line, key);
  try {
    t.value = read(j["value"]);
  } catch (const json::exception& e) {
    violation(line, "expected." + key + ": " + e.what());
  }
  return t;
}

CorpusEntry parse_entry(const json& j, int line) {
  static const std::set<std::string> top = {"name", "aliases", "pd", "braid", "grid", "expected", "note"};
  static const std::set<std::string> exp_keys = {"components", "kh_l",   "kh_total", "lk",
                                                 "alexander",  "torres", "hfl_top"};
  if (!j.is_object()) violation(line, "entry must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!top.count(k)) violation(line, "unknown field '" + k + "'");
  }
  CorpusEntry e;
  e.line = line;
  if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty()) {
    violation(line, "missing name");
  }
  e.name = j["name"];
  try {
    if (j.contains("aliases")) e.aliases = j["aliases"].get<std::vector<std::string>>();
    if (j.contains("pd")) e.pd = j["pd"].get<std::string>();
    if (j.contains("grid")) e.grid = j["grid"].get<std::string>();
    if (j.contains("note")) e.note = j["note"].get<std::string>();
    if (j.contains("braid")) {
      const json& b = j["braid"];
      Braid br;
      br.word = b.at("word").get<std::string>();
      br.strands = b.at("strands").get<int>();
      br.axis = b.value("axis", false);
      e.braid = br;
    }
  } catch (const json::exception& ex) {
    violation(line, ex.what());
  }
  if (!e.pd && !e.braid && !e.grid) violation(line, "entry '" + e.name + "' has none of pd, braid, grid");
  if (j.contains("expected")) {
    const json& x = j["expected"];
    if (!x.is_object()) violation(line, "expected must be an object");
    for (const auto& [k, v] : x.items()) {
      if (!exp_keys.count(k)) violation(line, "unknown field expected." + k);
    }
    Expected& ex = e.expected;
    ex.components = tagged<int>(x, "components", line, [](const json& v) { return v.get<int>(); });
    ex.kh_l = tagged<std::map<int, std::size_t>>(x, "kh_l", line, [](const json& v) {
      std::map<int, std::size_t> m;
      for (const auto& [k, r] : v.items()) m[std::stoi(k)] = r.get<std::size_t>();
      return m;
    });
    ex.kh_total = tagged<std::size_t>(x, "kh_total", line, [](const json& v) { return v.get<std::size_t>(); });
    ex.lk = tagged<int>(x, "lk", line, [](const json& v) { return v.get<int>(); });
    ex.alexander = tagged<std::string>(x, "alexander", line, [](const json& v) { return v.get<std::string>(); });
    ex.torres = tagged<TorresExpectation>(x, "torres", line, [](const json& v) {
      return TorresExpectation{v.at("knot").get<std::string>(), v.at("l").get<int>()};
    });
    ex.hfl_top = tagged<HflTopExpectation>(x, "hfl_top", line, [](const json& v) {
      return HflTopExpectation{v.at("component").get<int>(), v.at("top").get<int>(), v.at("dim").get<std::size_t>()};
    });
  }
  return e;
}

}  // namespace

std::vector<CorpusEntry> parse_corpus(std::string_view text) {
  std::vector<CorpusEntry> out;
  std::set<std::string> names;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      violation(n, e.what());
    }
    CorpusEntry e = parse_entry(j, n);
    for (const std::string& name : [&] {
           std::vector<std::string> all = e.aliases;
           all.push_back(e.name);
           return all;
         }()) {
      if (!names.insert(name).second) violation(n, "duplicate name '" + name + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<CorpusEntry> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::UnknownInput, "cannot open corpus file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_corpus(ss.str());
}

const std::vector<CorpusEntry>& builtin() {
  static const std::vector<CorpusEntry> entries = parse_corpus(kBuiltinCorpus);
  return entries;
}

const CorpusEntry* find(const std::vector<CorpusEntry>& entries, std::string_view name) {
  for (const auto& e : entries) {
    if (e.name == name || std::find(e.aliases.begin(), e.aliases.end(), name) != e.aliases.end()) return &e;
  }
  return nullptr;
}

linkdiag::PDLink entry_link(const CorpusEntry& e) {
  if (e.pd) return linkdiag::parse_pd(*e.pd);
  if (e.braid) return linkdiag::closure(linkdiag::parse_braid(e.braid->word, e.braid->strands, e.braid->axis));
  return gridfloer::grid_to_pd(gridfloer::parse_grid(*e.grid));
}

std::optional<gridfloer::GridDiagram> entry_grid(const CorpusEntry& e) {
  if (!e.grid) return std::nullopt;
  return gridfloer::parse_grid(*e.grid);
}

bool VerifyReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const VerifyItem& i) { return i.pass; });
}

namespace {

std::string ranks_text(const khovanov::LGradedRanks& r) {
  std::string s;
  for (const auto& [l, v] : r.entries()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(l) + ":" + std::to_string(v);
  }
  return s;
}

void verify_entry(const CorpusEntry& e, std::vector<VerifyItem>& out) {
  auto item = [&](const std::string& check, bool pass, const std::string& detail) {
    out.push_back({e.name, check, pass, detail});
  };
  const Expected& x = e.expected;
  linkdiag::PDLink link;
  try {
    link = entry_link(e);
  } catch (const Error& err) {
    item("diagram", false, err.what());
    return;
  }
  const int comps = static_cast<int>(link.num_components());
  if (x.components) {
    item("components", comps == x.components->value,
         "computed " + std::to_string(comps) + ", expected " + std::to_string(x.components->value));
  }
  const khovanov::BigradedRanks kh = khovanov::kh_ranks(link);
  const khovanov::LGradedRanks L = khovanov::l_collapse(kh);
  if (x.kh_l) {
    const khovanov::LGradedRanks want(x.kh_l->value);
    item("kh_l", L == want, "computed " + ranks_text(L) + ", expected " + ranks_text(want));
  }
  if (x.kh_total) {
    const bool law = comps != 2 || x.kh_total->value % 4 == 0;
    item("kh_total", L.total() == x.kh_total->value && law,
         "computed " + std::to_string(L.total()) + ", expected " + std::to_string(x.kh_total->value) +
             (law ? "" : " (not a multiple of 4 for a 2-component link)"));
  }
  if (comps == 2) {
    item("rank_multiple_of_4", L.total() % 4 == 0, "total " + std::to_string(L.total()));
  }
  // unreduced = 2 x reduced at every basepoint
  {
    bool ok = true;
    std::string bad;
    for (linkdiag::EdgeId b : link.edges()) {
      khovanov::KhOptions o;
      o.reduced = true;
      o.basepoint = b;
      const std::size_t red = khovanov::kh_ranks(link, o).total();
      if (2 * red != kh.total()) {
        ok = false;
        bad = "basepoint " + std::to_string(b) + ": reduced " + std::to_string(red);
        break;
      }
    }
    item("reduced_half", ok, ok ? "unreduced " + std::to_string(kh.total()) + " at all " +
                                      std::to_string(link.num_edges()) + " basepoints"
                                : bad);
  }
  if (x.lk) {
    const int lk = comps == 2 ? linkdiag::linking_number(link, 0, 1) : 0;
    item("lk", lk == x.lk->value, "computed " + std::to_string(lk) + ", expected " + std::to_string(x.lk->value));
  }
  if (!e.grid) return;
  gridfloer::GridDiagram g;
  try {
    g = gridfloer::parse_grid(*e.grid);
  } catch (const Error& err) {
    item("grid", false, err.what());
    return;
  }
  {
    const linkdiag::PDLink gpd = gridfloer::grid_to_pd(g);
    const khovanov::LGradedRanks gL = khovanov::l_collapse(khovanov::kh_ranks(gpd));
    bool ok = gL == L && g.num_components() == comps;
    std::string detail = "size " + std::to_string(g.size()) + ", Kh " + (gL == L ? "equal" : "differs");
    if (ok && comps == 2) {
      const int a = gridfloer::grid_linking_number(g, 0, 1);
      const int b = linkdiag::linking_number(link, 0, 1);
      ok = a == b;
      detail += ", lk " + std::to_string(a) + " vs " + std::to_string(b);
    }
    item("grid_matches_diagram", ok, detail);
  }
  gridfloer::GradedDims hat;
  try {
    hat = gridfloer::hat_extract(gridfloer::tilde_homology(g), g);
    std::size_t total = 0;
    for (const auto& kv : hat) total += kv.second;
    item("grid_homology", true, "d^2 = 0, hat total " + std::to_string(total));
  } catch (const Error& err) {
    item("grid_homology", false, err.what());
    return;
  }
  {
    // dims symmetric under negating every Alexander grading
    std::map<std::vector<int>, std::size_t> by_alex;
    for (const auto& [k, v] : hat) by_alex[k.alex] += v;
    bool sym = true;
    for (const auto& [a, v] : by_alex) {
      std::vector<int> neg(a.size());
      std::transform(a.begin(), a.end(), neg.begin(), [](int t) { return -t; });
      auto it = by_alex.find(neg);
      if (it == by_alex.end() || it->second != v) sym = false;
    }
    item("hat_symmetry", sym, sym ? "dim(A) = dim(-A)" : "asymmetric");
  }
  laurent::LaurentPoly delta(g.num_components());
  try {
    delta = gridfloer::alexander_polynomial(g);
  } catch (const Error& err) {
    item("alexander", false, err.what());
    return;
  }
  {
    const bool sym = delta.is_zero() || laurent::doteq(delta, delta.inverted()).has_value();
    item("alexander_symmetry", sym, "Delta = " + delta.to_string());
    const long chi_norm = gridfloer::total_chi_bound(hat);
    std::size_t total = 0;
    for (const auto& kv : hat) total += kv.second;
    item("chi_bound", chi_norm <= static_cast<long>(total),
         "||chi|| = " + std::to_string(chi_norm) + " <= " + std::to_string(total));
  }
  if (x.alexander) {
    const laurent::LaurentPoly want = laurent::parse_poly(x.alexander->value, delta.vars());
    const bool ok = want.is_zero() ? delta.is_zero() : laurent::doteq(delta, want).has_value();
    item("alexander", ok, "computed " + delta.to_string() + ", expected " + x.alexander->value);
  }
  if (x.torres && comps == 2) {
    // x on the knot, y on the axis named by hfl_top (default component 1)
    const int u = x.hfl_top ? x.hfl_top->value.component : 1;
    laurent::LaurentPoly d(2);
    for (const auto& [ex, c] : delta.terms()) d.add_term(u == 1 ? ex : std::vector<int>{ex[1], ex[0]}, c);
    const laurent::LaurentPoly knot = laurent::parse_poly(x.torres->value.knot, 1);
    const bool ok = laurent::torres_check(d, knot, x.torres->value.l);
    item("torres", ok, "Delta(x,1) = " + d.substitute_one(1).to_string() + " against (1-x^" +
                           std::to_string(x.torres->value.l) + ")/(1-x) * (" + x.torres->value.knot + ")");
  }
  if (x.hfl_top) {
    const auto& h = x.hfl_top->value;
    const gridfloer::Slice s = gridfloer::top_slice(hat, h.component);
    item("hfl_top", s.top == h.top && s.dim == h.dim,
         "computed top " + std::to_string(s.top) + " dim " + std::to_string(s.dim) + ", expected top " +
             std::to_string(h.top) + " dim " + std::to_string(h.dim));
  }
}

}  // namespace

VerifyReport verify(const std::vector<CorpusEntry>& entries) {
  std::vector<const CorpusEntry*> sorted;
  for (const auto& e : entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->name < b->name; });
  VerifyReport r;
  for (const CorpusEntry* e : sorted) {
    try {
      verify_entry(*e, r.items);
    } catch (const Error& err) {
      r.items.push_back({e->name, "error", false, err.what()});
    }
  }
  return r;
}

}  // namespace khdetect::corpus
