#pragma once
#include <map>
#include <string>
#include <vector>

#include "expr.hpp"

namespace mbhf {

// Rational-linear combination of named parameters plus a constant.
struct ParamLin {
  std::map<std::string, Rational> coeffs;
  Rational constant;

  ParamLin() = default;
  ParamLin(const Rational& c) : constant(c) {}
  static ParamLin param(const std::string& n) {
    ParamLin p;
    p.coeffs[n] = Rational(1);
    return p;
  }

  bool is_zero() const { return coeffs.empty() && constant.is_zero(); }
  bool is_constant() const { return coeffs.empty(); }

  ParamLin operator-() const {
    ParamLin r;
    for (auto& [n, c] : coeffs) r.coeffs[n] = -c;
    r.constant = -constant;
    return r;
  }
  friend ParamLin operator+(const ParamLin& a, const ParamLin& b) {
    ParamLin r = a;
    for (auto& [n, c] : b.coeffs) {
      Rational v = r.coeffs[n] + c;
      if (v.is_zero()) r.coeffs.erase(n);
      else r.coeffs[n] = v;
    }
    r.constant += b.constant;
    return r;
  }
  friend ParamLin operator-(const ParamLin& a, const ParamLin& b) { return a + (-b); }
  ParamLin scaled(const Rational& s) const {
    ParamLin r;
    if (s.is_zero()) return r;
    for (auto& [n, c] : coeffs) r.coeffs[n] = c * s;
    r.constant = constant * s;
    return r;
  }
  friend bool operator==(const ParamLin& a, const ParamLin& b) {
    return a.coeffs == b.coeffs && a.constant == b.constant;
  }
  friend bool operator!=(const ParamLin& a, const ParamLin& b) { return !(a == b); }

  std::vector<std::string> names() const {
    std::vector<std::string> v;
    for (auto& [n, c] : coeffs) v.push_back(n);
    return v;
  }

  cplx eval(const std::map<std::string, cplx>& params) const {
    cplx s = constant.to_double();
    for (auto& [n, c] : coeffs) {
      auto it = params.find(n);
      if (it == params.end()) throw Error(ErrorKind::MissingBinding, "no value for parameter '" + n + "'");
      s += c.to_double() * it->second;
    }
    return s;
  }

  ParamLin renamed(const std::map<std::string, std::string>& ren) const {
    ParamLin r;
    r.constant = constant;
    for (auto& [n, c] : coeffs) {
      auto it = ren.find(n);
      r = r + ParamLin::param(it == ren.end() ? n : it->second).scaled(c);
    }
    return r;
  }

  // positive terms first, then negative ones, constant last: "d-a-c+1"
  std::string str() const {
    std::string s;
    auto term = [&](const std::string& n, const Rational& c) {
      Rational a = c < Rational(0) ? -c : c;
      std::string body = a.is_one() ? n : (a.is_integer() ? a.str() + n : "(" + a.str() + ")" + n);
      if (s.empty()) s = (c < Rational(0) ? "-" : "") + body;
      else s += (c < Rational(0) ? "-" : "+") + body;
    };
    for (auto& [n, c] : coeffs)
      if (c > Rational(0)) term(n, c);
    for (auto& [n, c] : coeffs)
      if (c < Rational(0)) term(n, c);
    if (!constant.is_zero() || s.empty()) {
      Rational a = constant < Rational(0) ? -constant : constant;
      std::string body = a.is_integer() ? a.str() : "(" + a.str() + ")";
      if (s.empty()) s = (constant < Rational(0) ? "-" : "") + body;
      else s += (constant < Rational(0) ? "-" : "+") + body;
    }
    return s;
  }
};

namespace detail {

// Linear decomposition of an expression: coefficients on atoms plus constant.
inline std::map<std::string, Rational> linearize(const Expr& e) {
  using M = std::map<std::string, Rational>;
  auto comb = [](M a, const M& b, const Rational& s) {
    for (auto& [n, c] : b) {
      Rational v = a[n] + c * s;
      if (v.is_zero()) a.erase(n);
      else a[n] = v;
    }
    return a;
  };
  auto as_const = [](const M& m, Rational& out) {
    for (auto& [n, c] : m)
      if (!n.empty()) return false;
    auto it = m.find("");
    out = it == m.end() ? Rational(0) : it->second;
    return true;
  };
  switch (e.op()) {
    case Op::Num: return e.value().is_zero() ? M{} : M{{"", e.value()}};
    case Op::Var:
    case Op::Param: return M{{e.name(), Rational(1)}};
    case Op::Neg: return comb(M{}, linearize(e.lhs()), Rational(-1));
    case Op::Add: return comb(linearize(e.lhs()), linearize(e.rhs()), Rational(1));
    case Op::Sub: return comb(linearize(e.lhs()), linearize(e.rhs()), Rational(-1));
    case Op::Mul: {
      M a = linearize(e.lhs()), b = linearize(e.rhs());
      Rational k;
      if (as_const(a, k)) return comb(M{}, b, k);
      if (as_const(b, k)) return comb(M{}, a, k);
      throw Error(ErrorKind::ParseError, "not linear: " + e.str());
    }
    case Op::Div: {
      M a = linearize(e.lhs()), b = linearize(e.rhs());
      Rational k;
      if (as_const(b, k) && !k.is_zero()) return comb(M{}, a, Rational(1) / k);
      throw Error(ErrorKind::ParseError, "not linear: " + e.str());
    }
    case Op::Pow: {
      M a = linearize(e.lhs());
      Rational k;
      if (e.exponent() == 1) return a;
      if (as_const(a, k)) return k.is_zero() ? M{} : M{{"", k.pow(e.exponent())}};
      throw Error(ErrorKind::ParseError, "not linear: " + e.str());
    }
  }
  return M{};
}

inline bool is_zvar(const std::string& n, int& idx) {
  if (n.size() < 2 || n[0] != 'z') return false;
  for (size_t i = 1; i < n.size(); ++i)
    if (!std::isdigit((unsigned char)n[i])) return false;
  idx = std::stoi(n.substr(1));
  return idx >= 1;
}

}  // namespace detail

inline ParamLin parse_paramlin(const std::string& s) {
  ParamLin p;
  for (auto& [n, c] : detail::linearize(parse_expr(s, {}))) {
    if (n.empty()) p.constant = c;
    else p.coeffs[n] = c;
  }
  return p;
}

// Gamma argument: ParamLin shift plus integer coefficients on integration variables z1..zn.
struct LinArg {
  ParamLin shift;
  std::map<int, int> z;  // 1-based index -> nonzero coefficient

  LinArg() = default;
  LinArg(ParamLin s) : shift(std::move(s)) {}
  LinArg(ParamLin s, std::map<int, int> zc) : shift(std::move(s)), z(std::move(zc)) { prune(); }

  static LinArg zvar(int i, int c = 1) { return LinArg(ParamLin(), {{i, c}}); }

  void prune() {
    for (auto it = z.begin(); it != z.end();) it = it->second == 0 ? z.erase(it) : std::next(it);
  }
  int coef(int i) const {
    auto it = z.find(i);
    return it == z.end() ? 0 : it->second;
  }
  bool has_z() const { return !z.empty(); }
  bool is_pure_minus(int i) const { return shift.is_zero() && z.size() == 1 && coef(i) == -1; }

  LinArg operator-() const {
    LinArg r(-shift);
    for (auto& [i, c] : z) r.z[i] = -c;
    return r;
  }
  friend LinArg operator+(const LinArg& a, const LinArg& b) {
    LinArg r(a.shift + b.shift, a.z);
    for (auto& [i, c] : b.z) r.z[i] += c;
    r.prune();
    return r;
  }
  friend LinArg operator-(const LinArg& a, const LinArg& b) { return a + (-b); }
  LinArg without(int i) const {
    LinArg r = *this;
    r.z.erase(i);
    return r;
  }
  friend bool operator==(const LinArg& a, const LinArg& b) { return a.shift == b.shift && a.z == b.z; }
  friend bool operator!=(const LinArg& a, const LinArg& b) { return !(a == b); }

  cplx eval(const std::map<std::string, cplx>& params, const std::vector<cplx>& zv) const {
    cplx s = shift.eval(params);
    for (auto& [i, c] : z) s += double(c) * zv.at(i - 1);
    return s;
  }

  std::string str() const {
    std::string s = shift.is_zero() ? "" : shift.str();
    for (auto& [i, c] : z) {
      std::string body = (c == 1 || c == -1 ? "" : std::to_string(c < 0 ? -c : c)) + "z" + std::to_string(i);
      if (s.empty()) s = (c < 0 ? "-" : "") + body;
      else s += (c < 0 ? "-" : "+") + body;
    }
    return s.empty() ? "0" : s;
  }
};

inline LinArg parse_linarg(const std::string& s) {
  LinArg a;
  for (auto& [n, c] : detail::linearize(parse_expr(s, {}))) {
    int idx = 0;
    if (n.empty()) {
      a.shift.constant = c;
    } else if (detail::is_zvar(n, idx)) {
      if (!c.is_integer()) throw Error(ErrorKind::ParseError, "non-integer coefficient on " + n + " in '" + s + "'");
      a.z[idx] = (int)c.num();
    } else {
      a.shift.coeffs[n] = c;
    }
  }
  a.prune();
  return a;
}

}  // namespace mbhf
