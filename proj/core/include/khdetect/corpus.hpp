#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khdetect/gridfloer.hpp"
#include "khdetect/linkdiag.hpp"

namespace khdetect::corpus {

enum class Provenance { Paper, Derived, Trivial };
std::string provenance_name(Provenance p);

template <class T>
struct Tagged {
  T value{};
  Provenance provenance = Provenance::Derived;
};

struct TorresExpectation {
  std::string knot;  // Alexander polynomial of the non-axis component, in x
  int l = 1;
};

struct HflTopExpectation {
  int component = 0;  // grid component index
  int top = 0;        // doubled
  std::size_t dim = 0;
};

struct Expected {
  std::optional<Tagged<int>> components;
  std::optional<Tagged<std::map<int, std::size_t>>> kh_l;  // F2, unreduced
  std::optional<Tagged<std::size_t>> kh_total;
  std::optional<Tagged<int>> lk;
  std::optional<Tagged<std::string>> alexander;  // up to units
  std::optional<Tagged<TorresExpectation>> torres;
  std::optional<Tagged<HflTopExpectation>> hfl_top;
};

struct Braid {
  std::string word;
  int strands = 1;
  bool axis = false;
};

struct CorpusEntry {
  std::string name;
  std::vector<std::string> aliases;
  std::optional<std::string> pd;
  std::optional<Braid> braid;
  std::optional<std::string> grid;
  Expected expected;
  std::string note;
  int line = 0;
};

// JSON lines; blank lines and lines starting with '#' are skipped.
std::vector<CorpusEntry> parse_corpus(std::string_view text);
std::vector<CorpusEntry> load_corpus(const std::string& path);
const std::vector<CorpusEntry>& builtin();
const CorpusEntry* find(const std::vector<CorpusEntry>& entries, std::string_view name);

// Diagram of an entry: pd, else braid closure, else the grid's diagram.
linkdiag::PDLink entry_link(const CorpusEntry& e);
std::optional<gridfloer::GridDiagram> entry_grid(const CorpusEntry& e);

struct VerifyItem {
  std::string entry;
  std::string check;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyItem> items;
  bool ok() const;
};

// Recomputes every expected block, plus the structural laws every entry must satisfy.
VerifyReport verify(const std::vector<CorpusEntry>& entries);

}  // namespace khdetect::corpus
