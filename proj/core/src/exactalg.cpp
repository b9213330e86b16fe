#include "khdetect/exactalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <utility>

#include "khdetect/error.hpp"

namespace khdetect::exactalg {

F2Matrix::F2Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * ((cols + 63) / 64), 0) {}

F2Matrix F2Matrix::transposed() const {
  F2Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (get(r, c)) t.set(c, r, true);
    }
  }
  return t;
}

std::size_t rank_f2(F2Matrix m) {
  const std::size_t rows = m.rows();
  const std::size_t words = m.words_per_row();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < rows; ++c) {
    const std::size_t w = c / 64;
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    std::size_t pivot = rank;
    while (pivot < rows && !(m.row(pivot)[w] & bit)) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) std::swap_ranges(m.row(pivot) + w, m.row(pivot) + words, m.row(rank) + w);
    const std::uint64_t* p = m.row(rank);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      std::uint64_t* q = m.row(r);
      if (q[w] & bit) {
        for (std::size_t k = w; k < words; ++k) q[k] ^= p[k];
      }
    }
    ++rank;
  }
  return rank;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  }
  return t;
}

std::size_t rank_q(IntMatrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  mpz_class prev = 1;
  mpz_class tmp;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m.at(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t k = c; k < cols; ++k) swap(m.at(pivot, k), m.at(rank, k));
    }
    const mpz_class& p = m.at(rank, c);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const mpz_class f = m.at(r, c);
      for (std::size_t k = c + 1; k < cols; ++k) {
        tmp = m.at(r, k) * p - f * m.at(rank, k);
        mpz_divexact(m.at(r, k).get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
      }
      m.at(r, c) = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

void SparseMatrix::add(std::size_t r, std::size_t c, long value) {
  if (r >= rows_ || c >= cols_) {
    throw Error(ErrorCode::ShapeMismatch, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                              ") outside " + std::to_string(rows_) + "x" +
                                              std::to_string(cols_));
  }
  entries_.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), value});
  compressed_ = false;
}

void SparseMatrix::compress() {
  if (compressed_) return;
  std::sort(entries_.begin(), entries_.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Triplet> out;
  out.reserve(entries_.size());
  for (const Triplet& t : entries_) {
    if (!out.empty() && out.back().row == t.row && out.back().col == t.col) {
      out.back().value += t.value;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Triplet& t) { return t.value == 0; });
  entries_ = std::move(out);
  compressed_ = true;
}

F2Matrix SparseMatrix::to_f2() const {
  F2Matrix m(rows_, cols_);
  for (const Triplet& t : entries_) {
    if (t.value & 1) m.flip(t.row, t.col);
  }
  return m;
}

IntMatrix SparseMatrix::to_int() const {
  IntMatrix m(rows_, cols_);
  for (const Triplet& t : entries_) m.at(t.row, t.col) += t.value;
  return m;
}

namespace {

using F2Row = std::vector<std::uint32_t>;

void xor_into(F2Row& a, const F2Row& b, F2Row& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

std::size_t rank_f2_sparse(const SparseMatrix& m) {
  std::vector<F2Row> rows(m.rows());
  for (const Triplet& t : m.entries()) {
    if (t.value & 1) rows[t.row].push_back(t.col);
  }
  for (F2Row& r : rows) {
    std::sort(r.begin(), r.end());
    // odd multiplicities only (entries are already merged, so this is a no-op safeguard)
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const F2Row& a, const F2Row& b) { return a.size() < b.size(); });
  std::unordered_map<std::uint32_t, std::size_t> pivot_of;
  std::vector<F2Row> pivots;
  F2Row scratch;
  for (F2Row& r : rows) {
    while (!r.empty()) {
      auto it = pivot_of.find(r.front());
      if (it == pivot_of.end()) break;
      xor_into(r, pivots[it->second], scratch);
    }
    if (!r.empty()) {
      pivot_of.emplace(r.front(), pivots.size());
      pivots.push_back(std::move(r));
    }
  }
  return pivots.size();
}

using QRow = std::vector<std::pair<std::uint32_t, mpz_class>>;

void make_primitive(QRow& r) {
  mpz_class g = 0;
  for (const auto& e : r) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
  }
}

// r <- a*r - b*p where a = p.lead, b = r.lead; kills the leading entry of r.
void eliminate(QRow& r, const QRow& p, QRow& scratch) {
  const mpz_class a = p.front().second;
  const mpz_class b = r.front().second;
  scratch.clear();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
      scratch.emplace_back(r[i].first, a * r[i].second);
      ++i;
    } else if (i == r.size() || p[j].first < r[i].first) {
      scratch.emplace_back(p[j].first, -b * p[j].second);
      ++j;
    } else {
      mpz_class v = a * r[i].second - b * p[j].second;
      if (v != 0) scratch.emplace_back(r[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  r.swap(scratch);
  make_primitive(r);
}

std::size_t rank_q_sparse(const SparseMatrix& m) {
  std::vector<QRow> rows(m.rows());
  for (const Triplet& t : m.entries()) rows[t.row].emplace_back(t.col, mpz_class(t.value));
  for (QRow& r : rows) {
    std::sort(r.begin(), r.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const QRow& a, const QRow& b) { return a.size() < b.size(); });
  std::unordered_map<std::uint32_t, std::size_t> pivot_of;
  std::vector<QRow> pivots;
  QRow scratch;
  for (QRow& r : rows) {
    make_primitive(r);
    while (!r.empty()) {
      auto it = pivot_of.find(r.front().first);
      if (it == pivot_of.end()) break;
      eliminate(r, pivots[it->second], scratch);
    }
    if (!r.empty()) {
      pivot_of.emplace(r.front().first, pivots.size());
      pivots.push_back(std::move(r));
    }
  }
  return pivots.size();
}

}  // namespace

std::size_t rank(SparseMatrix m, Field field) {
  m.compress();
  if (m.entries().empty()) return 0;
  if (field == Field::F2) {
    // small blocks are cheaper dense
    if (m.rows() * m.cols() <= (std::size_t{1} << 16)) return rank_f2(m.to_f2());
    return rank_f2_sparse(m);
  }
  return rank_q_sparse(m);
}

SparseMatrix compose(const SparseMatrix& a, const SparseMatrix& b, Field field) {
  if (b.cols() != a.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "cannot compose " + std::to_string(b.rows()) + "x" +
                                              std::to_string(b.cols()) + " after " +
                                              std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  std::vector<std::vector<std::pair<std::uint32_t, long>>> a_rows(a.rows());
  for (const Triplet& t : a.entries()) a_rows[t.row].emplace_back(t.col, t.value);
  SparseMatrix out(b.rows(), a.cols());
  for (const Triplet& t : b.entries()) {
    for (const auto& [col, v] : a_rows[t.col]) out.add(t.row, col, t.value * v);
  }
  out.compress();
  if (field == Field::F2) {
    SparseMatrix reduced(out.rows(), out.cols());
    for (const Triplet& t : out.entries()) {
      if (t.value & 1) reduced.add(t.row, t.col, 1);
    }
    reduced.compress();
    return reduced;
  }
  return out;
}

std::size_t homology_rank(const SparseMatrix& d_in, const SparseMatrix& d_out, Field field) {
  if (d_in.rows() != d_out.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "d_in has " + std::to_string(d_in.rows()) +
                                              " rows but d_out has " + std::to_string(d_out.cols()) +
                                              " columns");
  }
  if (!compose(d_in, d_out, field).entries().empty()) {
    throw Error(ErrorCode::CompositionNotZero, "d_out * d_in != 0");
  }
  const std::size_t r_out = rank(d_out, field);
  const std::size_t r_in = rank(d_in, field);
  return d_out.cols() - r_out - r_in;
}

}  // namespace khdetect::exactalg
