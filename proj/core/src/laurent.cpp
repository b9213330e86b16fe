#include "khdetect/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cstdlib>
#include <sstream>

#include "khdetect/error.hpp"

namespace khdetect::laurent {

namespace {

constexpr std::string_view kVarNames = "xyzw";

std::string var_name(std::size_t i) {
  if (i < kVarNames.size()) return std::string(1, kVarNames[i]);
  return "t" + std::to_string(i);
}

void check_vars(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.vars() != b.vars()) {
    throw Error(ErrorCode::InternalError, "variable count mismatch: " + std::to_string(a.vars()) + " vs " +
                                              std::to_string(b.vars()));
  }
}

}  // namespace

LaurentPoly LaurentPoly::constant(std::size_t vars, long c) {
  LaurentPoly p(vars);
  p.add_term(Exponents(vars, 0), c);
  return p;
}

LaurentPoly LaurentPoly::monomial(const Exponents& e, long c) {
  LaurentPoly p(e.size());
  p.add_term(e, c);
  return p;
}

LaurentPoly LaurentPoly::variable(std::size_t vars, std::size_t i) {
  Exponents e(vars, 0);
  e.at(i) = 1;
  return monomial(e);
}

long LaurentPoly::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

void LaurentPoly::add_term(const Exponents& e, long c) {
  if (e.size() != vars_) throw Error(ErrorCode::InternalError, "exponent tuple has wrong length");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int LaurentPoly::min_exp(std::size_t var) const {
  int m = INT_MAX;
  for (const auto& t : terms_) m = std::min(m, t.first[var]);
  return terms_.empty() ? 0 : m;
}

int LaurentPoly::max_exp(std::size_t var) const {
  int m = INT_MIN;
  for (const auto& t : terms_) m = std::max(m, t.first[var]);
  return terms_.empty() ? 0 : m;
}

LaurentPoly LaurentPoly::substitute_one(std::size_t var) const {
  if (var >= vars_) throw Error(ErrorCode::IndexOutOfRange, "no variable " + std::to_string(var));
  LaurentPoly out(vars_ - 1);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f.erase(f.begin() + static_cast<long>(var));
    out.add_term(f, c);
  }
  return out;
}

LaurentPoly LaurentPoly::inverted() const {
  LaurentPoly out(vars_);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    for (int& x : f) x = -x;
    out.add_term(f, c);
  }
  return out;
}

LaurentPoly LaurentPoly::shifted(const Exponents& by) const {
  if (by.size() != vars_) throw Error(ErrorCode::InternalError, "shift has wrong length");
  LaurentPoly out(vars_);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    for (std::size_t i = 0; i < vars_; ++i) f[i] += by[i];
    out.add_term(f, c);
  }
  return out;
}

LaurentPoly LaurentPoly::halved() const {
  LaurentPoly out(vars_);
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    for (int& x : f) {
      if (x % 2 != 0) throw Error(ErrorCode::NotExactDivision, "odd exponent in " + to_string());
      x /= 2;
    }
    out.add_term(f, c);
  }
  return out;
}

std::map<int, LaurentPoly> LaurentPoly::slices(std::size_t var) const {
  std::map<int, LaurentPoly> out;
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f.erase(f.begin() + static_cast<long>(var));
    out.try_emplace(e[var], LaurentPoly(vars_ - 1)).first->second.add_term(f, c);
  }
  return out;
}

long LaurentPoly::sum_of_coefficients() const {
  long s = 0;
  for (const auto& t : terms_) s += t.second;
  return s;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (first) {
      out << c;
    } else {
      out << (c < 0 ? " - " : " + ") << std::labs(c);
    }
    first = false;
    for (std::size_t i = 0; i < vars_; ++i) {
      if (e[i] == 0) continue;
      out << '*' << var_name(i);
      if (e[i] != 1) out << '^' << e[i];
    }
  }
  return out.str();
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_vars(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  check_vars(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(long c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  check_vars(a, b);
  LaurentPoly out(a.vars());
  Exponents f(a.vars());
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = ea[i] + eb[i];
      out.add_term(f, ca * cb);
    }
  }
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  std::vector<std::pair<std::map<std::size_t, int>, long>> parse() {
    std::vector<std::pair<std::map<std::size_t, int>, long>> terms;
    skip();
    if (pos_ >= s_.size()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      long sign = 1;
      if (s_[pos_] == '+' || s_[pos_] == '-') {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      terms.push_back(term(sign));
    }
    return terms;
  }

 private:
  std::pair<std::map<std::size_t, int>, long> term(long sign) {
    skip();
    long coef = 1;
    bool have_coef = false;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      coef = number();
      have_coef = true;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') ++pos_;
    }
    std::map<std::size_t, int> exps;
    bool have_var = false;
    while (true) {
      skip();
      if (pos_ >= s_.size()) break;
      const char ch = s_[pos_];
      const auto v = kVarNames.find(ch);
      if (v == std::string_view::npos) break;
      ++pos_;
      have_var = true;
      int e = 1;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        skip();
        bool paren = pos_ < s_.size() && s_[pos_] == '(';
        if (paren) ++pos_;
        skip();
        long es = 1;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
          es = s_[pos_] == '-' ? -1 : 1;
          ++pos_;
        }
        e = static_cast<int>(es * number());
        if (paren) {
          skip();
          if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
          ++pos_;
        }
      }
      exps[v] += e;
      skip();
      if (pos_ < s_.size() && s_[pos_] == '*') ++pos_;
    }
    if (!have_coef && !have_var) fail("expected a term");
    return {exps, sign * coef};
  }

  long number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return std::stol(std::string(s_.substr(start, pos_ - start)));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::MalformedSyntax, msg + " at position " + std::to_string(pos_));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentPoly parse_poly(std::string_view text, std::size_t vars) {
  auto terms = PolyParser(text).parse();
  std::size_t needed = 1;
  for (const auto& t : terms) {
    for (const auto& kv : t.first) needed = std::max(needed, kv.first + 1);
  }
  if (vars == 0) vars = needed;
  if (needed > vars) throw Error(ErrorCode::MalformedSyntax, "polynomial uses more than " + std::to_string(vars) + " variables");
  LaurentPoly p(vars);
  for (const auto& [exps, c] : terms) {
    Exponents e(vars, 0);
    for (const auto& [v, x] : exps) e[v] = x;
    p.add_term(e, c);
  }
  return p;
}

long norm(const LaurentPoly& f) {
  long n = 0;
  for (const auto& t : f.terms()) n += std::labs(t.second);
  return n;
}

namespace {

struct Normal {
  LaurentPoly poly;
  int sign = 1;
  Exponents shift;
};

// poly = sign * x^shift * normal, normal has lowest exponent 0 in every
// variable and a positive first (lex-smallest) coefficient
Normal normalize(const LaurentPoly& f) {
  Normal n{f, 1, Exponents(f.vars(), 0)};
  if (f.is_zero()) return n;
  Exponents lo(f.vars());
  for (std::size_t i = 0; i < f.vars(); ++i) lo[i] = f.min_exp(i);
  Exponents neg = lo;
  for (int& x : neg) x = -x;
  n.poly = f.shifted(neg);
  n.shift = lo;
  if (n.poly.terms().begin()->second < 0) {
    n.poly = -n.poly;
    n.sign = -1;
  }
  return n;
}

}  // namespace

std::optional<Unit> doteq(const LaurentPoly& f, const LaurentPoly& g) {
  if (f.vars() != g.vars()) return std::nullopt;
  if (f.is_zero() || g.is_zero()) {
    if (f.is_zero() && g.is_zero()) return Unit{1, Exponents(f.vars(), 0)};
    return std::nullopt;
  }
  const Normal nf = normalize(f);
  const Normal ng = normalize(g);
  if (!(nf.poly == ng.poly)) return std::nullopt;
  Unit u{nf.sign * ng.sign, Exponents(f.vars())};
  for (std::size_t i = 0; i < f.vars(); ++i) u.exps[i] = nf.shift[i] - ng.shift[i];
  return u;
}

LaurentPoly exact_divide(const LaurentPoly& f, const LaurentPoly& g) {
  check_vars(f, g);
  if (g.is_zero()) throw Error(ErrorCode::NotExactDivision, "division by zero");
  std::size_t var = 0;
  int moving = 0;
  for (std::size_t i = 0; i < g.vars(); ++i) {
    if (g.min_exp(i) != g.max_exp(i)) {
      var = i;
      ++moving;
    }
  }
  if (moving > 1) throw Error(ErrorCode::InternalError, "divisor must involve a single variable");
  // divisor = x^base * h(x_var), h univariate
  const auto g_slices = g.slices(var);
  for (const auto& [d, s] : g_slices) {
    if (s.terms().size() != 1) throw Error(ErrorCode::InternalError, "divisor must be a monomial times a univariate");
  }
  const int gmax = g_slices.rbegin()->first;
  const int gmin = g_slices.begin()->first;
  const LaurentPoly& lead = g_slices.rbegin()->second;
  const long lc = lead.terms().begin()->second;
  if (lc != 1 && lc != -1) throw Error(ErrorCode::InternalError, "divisor leading coefficient must be +-1");
  const Exponents& lead_rest = lead.terms().begin()->first;

  LaurentPoly r = f;
  LaurentPoly q(f.vars());
  while (!r.is_zero()) {
    const int rmax = r.max_exp(var);
    const int rmin = r.min_exp(var);
    if (rmax - rmin < gmax - gmin) {
      throw Error(ErrorCode::NotExactDivision, f.to_string() + " is not divisible by " + g.to_string());
    }
    LaurentPoly step(f.vars());
    for (const auto& [e, c] : r.terms()) {
      if (e[var] != rmax) continue;
      Exponents qe(f.vars());
      std::size_t j = 0;
      for (std::size_t i = 0; i < f.vars(); ++i) {
        if (i == var) {
          qe[i] = rmax - gmax;
        } else {
          qe[i] = e[i] - lead_rest[j++];
        }
      }
      step.add_term(qe, c * lc);
    }
    q += step;
    r -= step * g;
  }
  return q;
}

LaurentPoly geometric_sum(int l) {
  LaurentPoly p(1);
  for (int i = 0; i < l; ++i) p.add_term({i}, 1);
  return p;
}

bool torres_check(const LaurentPoly& delta_link, const LaurentPoly& delta_knot, int l) {
  if (delta_link.vars() != 2 || delta_knot.vars() != 1 || l < 1) return false;
  return doteq(delta_link.substitute_one(1), geometric_sum(l) * delta_knot).has_value();
}

GSeq extract_g(const LaurentPoly& delta, int l) {
  if (delta.vars() != 2) throw Error(ErrorCode::TorresViolated, "expected a polynomial in x and y");
  if (l < 1 || !doteq(delta.substitute_one(0), geometric_sum(l))) {
    throw Error(ErrorCode::TorresViolated,
                "delta(1,y) = " + delta.substitute_one(0).to_string() + " is not a unit times 1+...+y^" +
                    std::to_string(l - 1));
  }
  const LaurentPoly one_minus_y = parse_poly("1 - y", 2);
  std::vector<GSeq> found;
  // multiplier y^a with a over the negated y-support, padded by one
  for (int a = -delta.max_exp(1) - 1; a <= -delta.min_exp(1) + 1; ++a) {
    for (int sign : {1, -1}) {
      LaurentPoly d = delta.shifted({0, a}) * sign;
      const LaurentPoly p = one_minus_y * d;
      std::map<int, LaurentPoly> g = p.slices(1);
      bool ok = true;
      for (const auto& [m, gm] : g) {
        const long at1 = gm.sum_of_coefficients();
        const long want = m == 0 ? 1 : (m == l ? -1 : 0);
        if (at1 != want) ok = false;
      }
      if (!g.count(0) || !g.count(l)) ok = false;
      if (ok) found.push_back(GSeq{l, std::move(g), Unit{sign, {0, a}}, std::move(d)});
    }
  }
  if (found.empty()) throw Error(ErrorCode::NormalizationImpossible, "no unit +-y^a normalizes " + delta.to_string());
  if (found.size() > 1) throw Error(ErrorCode::InternalError, "normalizing unit is not unique");
  return found.front();
}

Supp2Result lemma_supp2(const GSeq& gs) {
  Supp2Result r;
  r.hypothesis_holds = true;
  for (const auto& [m, gm] : gs.g) {
    if (m != 0 && m != gs.l && !gm.is_zero()) r.hypothesis_holds = false;
  }
  if (!r.hypothesis_holds) return r;
  const LaurentPoly g0 = gs.g.count(0) ? gs.g.at(0) : LaurentPoly(1);
  const LaurentPoly gl = gs.g.count(gs.l) ? gs.g.at(gs.l) : LaurentPoly(1);
  r.g_l_is_neg_g0 = gl == -g0;
  // delta = g_0 (1 + ... + y^{l-1}), so delta(x,1) = l g_0 while Torres makes
  // its extreme coefficient +-1 for an unknot or trefoil component
  r.l_must_be_1 = true;
  r.consistent = r.g_l_is_neg_g0 && gs.l == 1;
  return r;
}

FourDegResult lemma_4deg(const GSeq& gs) {
  FourDegResult r;
  const int l = gs.l;
  std::optional<int> k;
  bool support_ok = true;
  for (const auto& [m, gm] : gs.g) {
    if (gm.is_zero() || m == 0 || m == l) continue;
    int cand = 0;
    if (m < 0) {
      cand = -m;
    } else if (m > l) {
      cand = m - l;
    } else {
      support_ok = false;
      break;
    }
    if (k && *k != cand) {
      support_ok = false;
      break;
    }
    k = cand;
  }
  r.cond_support = support_ok;
  r.k = support_ok ? k.value_or(1) : 0;
  const LaurentPoly one_minus_x = parse_poly("1 - x", 1);
  const LaurentPoly g0 = gs.g.count(0) ? gs.g.at(0) : LaurentPoly(1);
  const LaurentPoly gl = gs.g.count(l) ? gs.g.at(l) : LaurentPoly(1);
  r.cond_norm = norm(one_minus_x * g0) == 2 && norm(one_minus_x * gl) == 2;
  r.hypothesis_holds = r.cond_support && r.cond_norm;
  if (!r.hypothesis_holds) return r;
  r.forced_l_eq_1 = true;
  r.forced_K_unknot = true;
  r.normal_form = g0.terms().size() == 1 && g0.terms().begin()->second == 1 && gl.terms().size() == 1 &&
                  gl.terms().begin()->second == -1;
  r.consistent = r.normal_form && l == 1;
  return r;
}

LaurentPoly expected_delta_x1(KnotType type, int l) {
  if (l < 1) throw Error(ErrorCode::InvalidLinking, "l must be positive");
  if (type == KnotType::Unknot) return geometric_sum(l);
  if (l == 1) return parse_poly("1 - x + x^2", 1);
  LaurentPoly p(1);
  p.add_term({0}, 1);
  for (int k = 2; k <= l - 1; ++k) p.add_term({k}, 1);
  p.add_term({l + 1}, 1);
  return p;
}

}  // namespace khdetect::laurent
