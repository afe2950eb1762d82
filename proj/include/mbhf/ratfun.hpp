#pragma once
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"

namespace mbhf {

// Sparse multivariate polynomial with rational coefficients, and a factored
// rational-function form used to tidy kernel and prefactor bases.

using Mono = std::vector<std::pair<std::string, int>>;  // sorted by name, exponents > 0

inline int mono_degree(const Mono& m) {
  int d = 0;
  for (auto& [n, e] : m) d += e;
  return d;
}

inline int mono_exp(const Mono& m, const std::string& v) {
  for (auto& [n, e] : m)
    if (n == v) return e;
  return 0;
}

inline Mono mono_mul(const Mono& a, const Mono& b) {
  std::map<std::string, int> t(a.begin(), a.end());
  for (auto& [n, e] : b) t[n] += e;
  return Mono(t.begin(), t.end());
}

inline std::optional<Mono> mono_div(const Mono& a, const Mono& b) {
  std::map<std::string, int> t(a.begin(), a.end());
  for (auto& [n, e] : b) {
    int& x = t[n];
    x -= e;
    if (x < 0) return std::nullopt;
  }
  Mono r;
  for (auto& [n, e] : t)
    if (e > 0) r.emplace_back(n, e);
  return r;
}

// lex order: the alphabetically first variable dominates
inline bool mono_lex_less(const Mono& a, const Mono& b) {
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i].first == b[j].first) {
      if (a[i].second != b[j].second) return a[i].second < b[j].second;
      ++i;
      ++j;
    } else if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      return false;  // a has a variable b lacks
    } else {
      return true;
    }
  }
  return false;
}

// display order: constants first, then by degree, earlier variables first
inline bool mono_print_less(const Mono& a, const Mono& b) {
  int da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da < db;
  return mono_lex_less(b, a);
}

struct MonoLexCmp {
  bool operator()(const Mono& a, const Mono& b) const { return mono_lex_less(a, b); }
};

class Poly {
 public:
  std::map<Mono, Rational, MonoLexCmp> terms;

  static Poly constant(const Rational& c) {
    Poly p;
    if (!c.is_zero()) p.terms[{}] = c;
    return p;
  }
  static Poly variable(const std::string& n) {
    Poly p;
    p.terms[{{n, 1}}] = Rational(1);
    return p;
  }

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const { return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty()); }
  Rational constant_value() const { return terms.empty() ? Rational(0) : terms.begin()->second; }

  void add_term(const Mono& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b.terms) r.add_term(m, c);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    Poly r = a;
    for (auto& [m, c] : b.terms) r.add_term(m, -c);
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [m1, c1] : a.terms)
      for (auto& [m2, c2] : b.terms) r.add_term(mono_mul(m1, m2), c1 * c2);
    return r;
  }
  Poly scaled(const Rational& s) const {
    Poly r;
    if (s.is_zero()) return r;
    for (auto& [m, c] : terms) r.terms[m] = c * s;
    return r;
  }
  Poly pow(int n) const {
    Poly r = constant(1);
    for (int i = 0; i < n; ++i) r = r * *this;
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms == b.terms; }

  std::pair<Mono, Rational> lead() const { return *terms.rbegin(); }

  // exact quotient, or nothing when q does not divide *this
  std::optional<Poly> divide_exact(const Poly& q) const {
    if (q.is_zero()) return std::nullopt;
    Poly r = *this, quot;
    auto [lq, cq] = q.lead();
    while (!r.is_zero()) {
      auto [lr, cr] = r.lead();
      auto m = mono_div(lr, lq);
      if (!m) return std::nullopt;
      Poly t;
      t.terms[*m] = cr / cq;
      quot = quot + t;
      r = r - t * q;
    }
    return quot;
  }

  std::vector<std::pair<Mono, Rational>> print_ordered() const {
    std::vector<std::pair<Mono, Rational>> v(terms.begin(), terms.end());
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return mono_print_less(a.first, b.first); });
    return v;
  }

  // *this = scale * primitive, primitive has coprime integer coefficients and a positive first printed term
  std::pair<Rational, Poly> primitive() const {
    if (is_zero()) return {Rational(0), Poly()};
    std::int64_t l = 1, g = 0;
    for (auto& [m, c] : terms) l = std::lcm(l, c.den());
    for (auto& [m, c] : terms) g = std::gcd(g, (c * Rational(l)).num());
    Rational s(g, l);
    if (print_ordered().front().second < Rational(0)) s = -s;
    return {s, scaled(Rational(1) / s)};
  }

  Expr to_expr() const {
    auto mono_expr = [](const Mono& m) {
      std::optional<Expr> r;
      for (auto& [n, e] : m) {
        Expr f = Expr::var(n);
        if (e != 1) f = Expr::pow(f, e);
        r = r ? *r * f : f;
      }
      return r ? *r : Expr::num(1);
    };
    auto term = [&](const Mono& m, const Rational& c) {
      if (m.empty()) return Expr::num(c);
      if (c.is_one()) return mono_expr(m);
      return Expr::num(c) * mono_expr(m);
    };
    std::optional<Expr> acc;
    for (auto& [m, c] : print_ordered()) {
      if (!acc) {
        acc = c < Rational(0) ? -term(m, -c) : term(m, c);
      } else if (c < Rational(0)) {
        acc = *acc - term(m, -c);
      } else {
        acc = *acc + term(m, c);
      }
    }
    return acc ? *acc : Expr::num(0);
  }
};

// coef * prod factor^exp, factors primitive and pairwise distinct
struct FForm {
  Rational coef{1};
  std::vector<std::pair<Poly, int>> factors;

  bool is_zero() const { return coef.is_zero(); }

  void mul_factor(const Poly& p, int e) {
    if (e == 0) return;
    for (auto it = factors.begin(); it != factors.end(); ++it) {
      if (it->first == p) {
        it->second += e;
        if (it->second == 0) factors.erase(it);
        return;
      }
    }
    factors.emplace_back(p, e);
  }

  FForm inverse() const {
    if (is_zero()) throw Error(ErrorKind::PoleAtPoint, "inverse of zero rational function");
    FForm r;
    r.coef = Rational(1) / coef;
    for (auto& [p, e] : factors) r.factors.emplace_back(p, -e);
    return r;
  }

  friend FForm operator*(const FForm& a, const FForm& b) {
    if (a.is_zero() || b.is_zero()) return FForm{Rational(0), {}};
    FForm r = a;
    r.coef *= b.coef;
    for (auto& [p, e] : b.factors) r.mul_factor(p, e);
    return r;
  }

  FForm pow(int n) const {
    if (n < 0) return inverse().pow(-n);
    FForm r;
    r.coef = coef.pow(n);
    if (n == 0) return r;
    for (auto& [p, e] : factors) r.factors.emplace_back(p, e * n);
    return r;
  }

  // absorb a raw polynomial into this product, splitting off known factors
  static FForm from_poly(const Poly& s, const std::vector<Poly>& candidates) {
    if (s.is_zero()) return FForm{Rational(0), {}};
    FForm r;
    Poly rest = s;
    // monomial content
    std::map<std::string, int> mins;
    bool first = true;
    for (auto& [m, c] : rest.terms) {
      if (first) {
        for (auto& [n, e] : m) mins[n] = e;
        first = false;
      } else {
        for (auto& [n, e] : mins) e = std::min(e, mono_exp(m, n));
      }
    }
    for (auto& [n, e] : mins) {
      if (e <= 0) continue;
      Poly v = Poly::variable(n);
      rest = *rest.divide_exact(v.pow(e));
      r.mul_factor(v, e);
    }
    for (const Poly& c : candidates) {
      if (c.is_constant()) continue;
      for (;;) {
        auto q = rest.divide_exact(c);
        if (!q) break;
        rest = *q;
        r.mul_factor(c, 1);
      }
    }
    auto [scale, prim] = rest.primitive();
    r.coef = scale;
    if (!prim.is_constant()) r.mul_factor(prim, 1);
    return r;
  }

  Poly expand_numerator(const std::vector<std::pair<Poly, int>>& shift) const {
    // coef * prod p^(e + shift_p) with all resulting exponents >= 0
    Poly acc = Poly::constant(coef);
    std::vector<std::pair<Poly, int>> all = factors;
    for (auto& [p, s] : shift) {
      bool found = false;
      for (auto& [q, e] : all)
        if (q == p) {
          e += s;
          found = true;
        }
      if (!found) all.emplace_back(p, s);
    }
    for (auto& [p, e] : all) acc = acc * p.pow(e);
    return acc;
  }

  friend FForm operator+(const FForm& a, const FForm& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::vector<Poly> polys;
    auto note = [&](const Poly& p) {
      for (auto& q : polys)
        if (q == p) return;
      polys.push_back(p);
    };
    for (auto& f : a.factors) note(f.first);
    for (auto& f : b.factors) note(f.first);
    std::vector<std::pair<Poly, int>> den;
    for (auto& p : polys) {
      int ea = 0, eb = 0;
      for (auto& [q, e] : a.factors)
        if (q == p) ea = e;
      for (auto& [q, e] : b.factors)
        if (q == p) eb = e;
      int d = std::max({0, -ea, -eb});
      if (d > 0) den.emplace_back(p, d);
    }
    Poly s = a.expand_numerator(den) + b.expand_numerator(den);
    FForm r = from_poly(s, polys);
    if (r.is_zero()) return r;
    for (auto& [p, d] : den) r.mul_factor(p, -d);
    return r;
  }

  friend FForm operator-(const FForm& a, const FForm& b) {
    FForm nb = b;
    nb.coef = -nb.coef;
    return a + nb;
  }

  static FForm from_expr(const Expr& e) {
    switch (e.op()) {
      case Op::Num: return FForm{e.value(), {}};
      case Op::Var:
      case Op::Param: {
        FForm r;
        r.factors.emplace_back(Poly::variable(e.name()), 1);
        return r;
      }
      case Op::Neg: {
        FForm r = from_expr(e.lhs());
        r.coef = -r.coef;
        return r;
      }
      case Op::Add: return from_expr(e.lhs()) + from_expr(e.rhs());
      case Op::Sub: return from_expr(e.lhs()) - from_expr(e.rhs());
      case Op::Mul: return from_expr(e.lhs()) * from_expr(e.rhs());
      case Op::Div: return from_expr(e.lhs()) * from_expr(e.rhs()).inverse();
      case Op::Pow: return from_expr(e.lhs()).pow(e.exponent());
    }
    return FForm{};
  }

  Expr to_expr() const {
    if (is_zero()) return Expr::num(0);
    Rational c = coef < Rational(0) ? -coef : coef;
    std::vector<std::pair<Poly, int>> sorted = factors;
    std::sort(sorted.begin(), sorted.end(), [](auto& x, auto& y) {
      return x.first.to_expr().str() < y.first.to_expr().str();
    });
    std::optional<Expr> num, den;
    auto push = [](std::optional<Expr>& acc, Expr f) { acc = acc ? *acc * f : f; };
    if (c.num() != 1) push(num, Expr::num(Rational(c.num())));
    if (c.den() != 1) push(den, Expr::num(Rational(c.den())));
    for (auto& [p, e] : sorted) {
      Expr pe = p.to_expr();
      int k = e > 0 ? e : -e;
      Expr f = k == 1 ? pe : Expr::pow(pe, k);
      push(e > 0 ? num : den, f);
    }
    Expr r = num ? *num : Expr::num(1);
    if (den) r = r / *den;
    return coef < Rational(0) ? -r : r;
  }
};

inline Expr normalize_rational(const Expr& e) { return FForm::from_expr(e).to_expr(); }

}  // namespace mbhf
