#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace khdetect::exactalg {

enum class Field { F2, Q };

// Dense matrix over GF(2), rows packed into 64-bit words. Padding bits stay zero.
class F2Matrix {
 public:
  F2Matrix() = default;
  F2Matrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return words_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * words_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    std::uint64_t mask = std::uint64_t{1} << (c % 64);
    if (v) {
      bits_[r * words_ + c / 64] |= mask;
    } else {
      bits_[r * words_ + c / 64] &= ~mask;
    }
  }
  void flip(std::size_t r, std::size_t c) { bits_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

  std::uint64_t* row(std::size_t r) { return bits_.data() + r * words_; }
  const std::uint64_t* row(std::size_t r) const { return bits_.data() + r * words_; }

  F2Matrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
};

std::size_t rank_f2(F2Matrix m);

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  mpz_class& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpz_class& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

// Fraction-free (Bareiss) elimination.
std::size_t rank_q(IntMatrix m);

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  long value;
};

// Triplet-list matrix; duplicate entries are summed by compress().
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void add(std::size_t r, std::size_t c, long value);
  // Sort by (row, col), merge duplicates, drop zeros.
  void compress();
  const std::vector<Triplet>& entries() const { return entries_; }

  F2Matrix to_f2() const;
  IntMatrix to_int() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet> entries_;
  bool compressed_ = true;
};

// Rank of a sparse matrix; uses sparse elimination, entries reduced mod 2 for F2.
std::size_t rank(SparseMatrix m, Field field);

// Product b * a (apply a first), reduced mod 2 when field is F2.
SparseMatrix compose(const SparseMatrix& a, const SparseMatrix& b, Field field);

// dim ker(d_out) - rank(d_in). d_in: C_{k-1} -> C_k, d_out: C_k -> C_{k+1}.
// Throws CompositionNotZero when d_out * d_in != 0 and ShapeMismatch on bad shapes.
std::size_t homology_rank(const SparseMatrix& d_in, const SparseMatrix& d_out, Field field);

}  // namespace khdetect::exactalg
