#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace khdetect::laurent {

using Exponents = std::vector<int>;

// Integer Laurent polynomial in a fixed number of variables (x, y, z, w, ...).
class LaurentPoly {
 public:
  explicit LaurentPoly(std::size_t vars = 1) : vars_(vars) {}

  static LaurentPoly constant(std::size_t vars, long c);
  static LaurentPoly monomial(const Exponents& e, long c = 1);
  static LaurentPoly variable(std::size_t vars, std::size_t i);

  std::size_t vars() const { return vars_; }
  const std::map<Exponents, long>& terms() const { return terms_; }
  long coeff(const Exponents& e) const;
  void add_term(const Exponents& e, long c);
  bool is_zero() const { return terms_.empty(); }

  int min_exp(std::size_t var) const;
  int max_exp(std::size_t var) const;

  // Evaluate one variable at 1; the result has one variable fewer.
  LaurentPoly substitute_one(std::size_t var) const;
  // Every variable replaced by its inverse.
  LaurentPoly inverted() const;
  // Multiply by the monomial with these exponents.
  LaurentPoly shifted(const Exponents& by) const;
  // Exponents divided by two; throws NotExactDivision when one is odd.
  LaurentPoly halved() const;
  // Coefficient slices in variable `var`: exponent -> poly in the remaining variables.
  std::map<int, LaurentPoly> slices(std::size_t var) const;
  long sum_of_coefficients() const;

  std::string to_string() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(long c);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, long c) { return a *= c; }
  bool operator==(const LaurentPoly&) const = default;

 private:
  std::size_t vars_;
  std::map<Exponents, long> terms_;
};

// Accepts forms like "1-x+x^2", "-1*x^2*y^-1 + 1", "3x^(-2)y". When vars is 0
// the count is inferred from the highest variable letter used.
LaurentPoly parse_poly(std::string_view text, std::size_t vars = 0);

long norm(const LaurentPoly& f);

struct Unit {
  int sign = 1;
  Exponents exps;
  bool operator==(const Unit&) const = default;
};

// f = unit * g, if such a unit exists.
std::optional<Unit> doteq(const LaurentPoly& f, const LaurentPoly& g);

// Exact division by a polynomial in a single variable whose extreme
// coefficients are +-1. Throws NotExactDivision on a remainder.
LaurentPoly exact_divide(const LaurentPoly& f, const LaurentPoly& g);

// 1 + x + ... + x^{l-1} in one variable.
LaurentPoly geometric_sum(int l);

bool torres_check(const LaurentPoly& delta_link, const LaurentPoly& delta_knot, int l);

struct GSeq {
  int l = 1;
  std::map<int, LaurentPoly> g;  // nonzero coefficients of (1-y) * normalized delta
  Unit unit;                     // normalized delta = unit * delta
  LaurentPoly normalized_delta{2};
};

GSeq extract_g(const LaurentPoly& delta, int l);

struct Supp2Result {
  bool hypothesis_holds = false;
  bool g_l_is_neg_g0 = false;
  bool l_must_be_1 = false;
  bool consistent = true;  // false when the lemma's conclusion contradicts gs.l
};

Supp2Result lemma_supp2(const GSeq& gs);

struct FourDegResult {
  bool cond_support = false;
  bool cond_norm = false;
  int k = 0;
  bool hypothesis_holds = false;
  bool forced_l_eq_1 = false;
  bool forced_K_unknot = false;
  bool normal_form = false;
  bool consistent = true;
};

FourDegResult lemma_4deg(const GSeq& gs);

enum class KnotType { Unknot, Trefoil };

LaurentPoly expected_delta_x1(KnotType type, int l);

}  // namespace khdetect::laurent
