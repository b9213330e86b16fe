#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "khdetect/exactalg.hpp"
#include "khdetect/linkdiag.hpp"

namespace khdetect::khovanov {

using exactalg::Field;

// (h, q) -> rank, zero ranks never stored.
class BigradedRanks {
 public:
  BigradedRanks() = default;
  explicit BigradedRanks(std::map<std::pair<int, int>, std::size_t> entries);

  void add(int h, int q, std::size_t rank);
  std::size_t at(int h, int q) const;
  std::size_t total() const;
  const std::map<std::pair<int, int>, std::size_t>& entries() const { return entries_; }
  bool operator==(const BigradedRanks&) const = default;

 private:
  std::map<std::pair<int, int>, std::size_t> entries_;
};

// l -> rank, zero ranks never stored.
class LGradedRanks {
 public:
  LGradedRanks() = default;
  explicit LGradedRanks(std::map<int, std::size_t> entries);
  // ranks listed at the given gradings, e.g. ({1,2,1}, {-2,0,2})
  static LGradedRanks from_lists(const std::vector<std::size_t>& ranks, const std::vector<int>& gradings);

  void add(int l, std::size_t rank);
  std::size_t at(int l) const;
  std::size_t total() const;
  const std::map<int, std::size_t>& entries() const { return entries_; }
  bool operator==(const LGradedRanks&) const = default;

 private:
  std::map<int, std::size_t> entries_;
};

struct CircleStructure {
  std::size_t num_circles = 0;
  std::vector<int> arc_circle;  // indexed like PDLink::edges()
};

CircleStructure resolve(const linkdiag::PDLink& link, const std::vector<bool>& vertex);

struct KhOptions {
  Field field = Field::F2;
  bool reduced = false;
  std::optional<linkdiag::EdgeId> basepoint;
};

BigradedRanks kh_ranks(const linkdiag::PDLink& link, const KhOptions& options = {});

LGradedRanks l_collapse(const BigradedRanks& r);
LGradedRanks tensor(const LGradedRanks& a, const LGradedRanks& b);
LGradedRanks shift(const LGradedRanks& a, int s);
LGradedRanks negate_grading(const LGradedRanks& a);

// Largest crossing count kh_ranks accepts.
inline constexpr std::size_t kMaxCrossings = 24;

}  // namespace khdetect::khovanov
