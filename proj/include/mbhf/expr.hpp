#pragma once
#include <algorithm>
#include <cctype>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace mbhf {

using cplx = std::complex<double>;

enum class Op { Var, Param, Num, Neg, Add, Sub, Mul, Div, Pow };

inline const std::vector<std::string>& default_vars() {
  static const std::vector<std::string> v{"x", "y", "z"};
  return v;
}

class Expr {
 public:
  Expr() : Expr(num(0)) {}

  static Expr var(const std::string& n) { return Expr(make(Op::Var, n, {}, 0, {}, {})); }
  static Expr param(const std::string& n) { return Expr(make(Op::Param, n, {}, 0, {}, {})); }
  static Expr num(const Rational& r) { return Expr(make(Op::Num, {}, r, 0, {}, {})); }
  static Expr neg(const Expr& a) { return Expr(make(Op::Neg, {}, {}, 0, a.n_, {})); }
  static Expr add(const Expr& a, const Expr& b) { return Expr(make(Op::Add, {}, {}, 0, a.n_, b.n_)); }
  static Expr sub(const Expr& a, const Expr& b) { return Expr(make(Op::Sub, {}, {}, 0, a.n_, b.n_)); }
  static Expr mul(const Expr& a, const Expr& b) { return Expr(make(Op::Mul, {}, {}, 0, a.n_, b.n_)); }
  static Expr div(const Expr& a, const Expr& b) {
    if (b.op() == Op::Num && b.value().is_zero())
      throw Error(ErrorKind::PoleAtPoint, "division by literal zero");
    return Expr(make(Op::Div, {}, {}, 0, a.n_, b.n_));
  }
  static Expr pow(const Expr& a, int e) { return Expr(make(Op::Pow, {}, {}, e, a.n_, {})); }

  Op op() const { return n_->op; }
  const std::string& name() const { return n_->name; }
  const Rational& value() const { return n_->value; }
  int exponent() const { return n_->exp; }
  Expr lhs() const { return Expr(n_->a); }
  Expr rhs() const { return Expr(n_->b); }
  bool is_atom() const { return op() == Op::Var || op() == Op::Param || op() == Op::Num; }
  bool is_num(const Rational& r) const { return op() == Op::Num && value() == r; }

  friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }
  Expr operator-() const { return neg(*this); }

  std::string str() const { return print(*this).first; }

  // Structural identity of the trees.
  friend bool same_tree(const Expr& a, const Expr& b) {
    if (a.n_ == b.n_) return true;
    if (a.op() != b.op()) return false;
    switch (a.op()) {
      case Op::Var:
      case Op::Param: return a.name() == b.name();
      case Op::Num: return a.value() == b.value();
      case Op::Neg: return same_tree(a.lhs(), b.lhs());
      case Op::Pow: return a.exponent() == b.exponent() && same_tree(a.lhs(), b.lhs());
      default: return same_tree(a.lhs(), b.lhs()) && same_tree(a.rhs(), b.rhs());
    }
  }

 private:
  struct Node {
    Op op;
    std::string name;
    Rational value;
    int exp;
    std::shared_ptr<const Node> a, b;
  };
  std::shared_ptr<const Node> n_;

  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static std::shared_ptr<const Node> make(Op op, std::string name, Rational v, int e,
                                          std::shared_ptr<const Node> a, std::shared_ptr<const Node> b) {
    return std::make_shared<const Node>(Node{op, std::move(name), v, e, std::move(a), std::move(b)});
  }

  // returns text and precedence: 1 sum, 2 product, 3 unary minus, 4 power, 5 atom
  static std::pair<std::string, int> print(const Expr& e) {
    auto wrap = [](const std::pair<std::string, int>& p, int need) {
      return p.second < need ? "(" + p.first + ")" : p.first;
    };
    switch (e.op()) {
      case Op::Var:
      case Op::Param: return {e.name(), 5};
      case Op::Num: {
        const Rational& r = e.value();
        if (r.num() < 0) return {r.str(), 3};
        return {r.str(), r.is_integer() ? 5 : 2};
      }
      case Op::Neg: return {"-" + wrap(print(e.lhs()), 2), 3};
      case Op::Add: {
        auto l = print(e.lhs()).first;
        auto r = print(e.rhs());
        if (!r.first.empty() && r.first[0] == '-') return {l + r.first, 1};
        return {l + "+" + r.first, 1};
      }
      case Op::Sub: {
        auto l = print(e.lhs()).first;
        auto r = print(e.rhs());
        std::string rs = (r.second <= 1 || r.first[0] == '-') ? "(" + r.first + ")" : r.first;
        return {l + "-" + rs, 1};
      }
      case Op::Mul: return {wrap(print(e.lhs()), 2) + "*" + wrap(print(e.rhs()), 3), 2};
      case Op::Div: return {wrap(print(e.lhs()), 2) + "/" + wrap(print(e.rhs()), 4), 2};
      case Op::Pow: {
        std::string ex = e.exponent() < 0 ? "(" + std::to_string(e.exponent()) + ")" : std::to_string(e.exponent());
        return {wrap(print(e.lhs()), 5) + "^" + ex, 4};
      }
    }
    return {"?", 5};
  }
};

// ---------------------------------------------------------------- parsing

namespace detail {

class ExprParser {
 public:
  ExprParser(const std::string& s, const std::vector<std::string>& vars) : vars_(vars) {
    // accept the unicode minus sign
    for (size_t i = 0; i < s.size(); ++i) {
      if (i + 2 < s.size() && (unsigned char)s[i] == 0xE2 && (unsigned char)s[i + 1] == 0x88 &&
          (unsigned char)s[i + 2] == 0x92) {
        src_ += '-';
        i += 2;
      } else {
        src_ += s[i];
      }
    }
  }

  Expr parse() {
    Expr e = parse_sum();
    skip();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  std::string src_;
  size_t pos_ = 0;
  const std::vector<std::string>& vars_;

  [[noreturn]] void fail(const std::string& m) {
    throw Error(ErrorKind::ParseError, m + " at position " + std::to_string(pos_) + " in '" + src_ + "'");
  }
  void skip() {
    while (pos_ < src_.size() && std::isspace((unsigned char)src_[pos_])) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < src_.size() && src_[pos_] == c;
  }
  bool starts_factor() {
    skip();
    if (pos_ >= src_.size()) return false;
    char c = src_[pos_];
    return std::isalnum((unsigned char)c) || c == '(';
  }

  Expr parse_sum() {
    Expr e = parse_product();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        e = e + parse_product();
      } else if (peek('-')) {
        ++pos_;
        e = e - parse_product();
      } else {
        return e;
      }
    }
  }

  Expr parse_product() {
    Expr e = parse_unary();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        e = e * parse_unary();
      } else if (peek('/')) {
        ++pos_;
        e = e / parse_unary();
      } else if (starts_factor()) {
        e = e * parse_power();
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (peek('-')) {
      ++pos_;
      return -parse_unary();
    }
    if (peek('+')) {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (peek('^')) {
      ++pos_;
      bool paren = false;
      if (peek('(')) {
        ++pos_;
        paren = true;
      }
      skip();
      int sign = 1;
      if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
        if (src_[pos_] == '-') sign = -1;
        ++pos_;
      }
      skip();
      size_t st = pos_;
      while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_])) ++pos_;
      if (st == pos_) fail("'^' needs an integer literal");
      int ex = sign * std::stoi(src_.substr(st, pos_ - st));
      if (paren) {
        if (!peek(')')) fail("expected ')'");
        ++pos_;
      }
      return Expr::pow(base, ex);
    }
    return base;
  }

  Expr parse_primary() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return e;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t st = pos_;
      while (pos_ < src_.size() && std::isdigit((unsigned char)src_[pos_])) ++pos_;
      return Expr::num(Rational(std::stoll(src_.substr(st, pos_ - st))));
    }
    if (std::isalpha((unsigned char)c)) {
      size_t st = pos_;
      ++pos_;
      while (pos_ < src_.size() && (std::isalnum((unsigned char)src_[pos_]) || src_[pos_] == '\'')) ++pos_;
      std::string n = src_.substr(st, pos_ - st);
      for (const auto& v : vars_)
        if (v == n) return Expr::var(n);
      return Expr::param(n);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

}  // namespace detail

inline Expr parse_expr(const std::string& s, const std::vector<std::string>& vars = default_vars()) {
  return detail::ExprParser(s, vars).parse();
}

// ---------------------------------------------------------------- traversal

inline void collect_atoms(const Expr& e, std::set<std::string>& out) {
  switch (e.op()) {
    case Op::Var:
    case Op::Param: out.insert(e.name()); break;
    case Op::Num: break;
    case Op::Neg:
    case Op::Pow: collect_atoms(e.lhs(), out); break;
    default:
      collect_atoms(e.lhs(), out);
      collect_atoms(e.rhs(), out);
  }
}

inline std::set<std::string> atoms(const Expr& e) {
  std::set<std::string> s;
  collect_atoms(e, s);
  return s;
}

inline Expr substitute(const Expr& e, const std::map<std::string, Expr>& sub) {
  switch (e.op()) {
    case Op::Var:
    case Op::Param: {
      auto it = sub.find(e.name());
      return it == sub.end() ? e : it->second;
    }
    case Op::Num: return e;
    case Op::Neg: return -substitute(e.lhs(), sub);
    case Op::Pow: return Expr::pow(substitute(e.lhs(), sub), e.exponent());
    case Op::Add: return substitute(e.lhs(), sub) + substitute(e.rhs(), sub);
    case Op::Sub: return substitute(e.lhs(), sub) - substitute(e.rhs(), sub);
    case Op::Mul: return substitute(e.lhs(), sub) * substitute(e.rhs(), sub);
    case Op::Div: return substitute(e.lhs(), sub) / substitute(e.rhs(), sub);
  }
  return e;
}

// ---------------------------------------------------------------- evaluation

template <class T, class Lookup>
T eval_generic(const Expr& e, const Lookup& look) {
  switch (e.op()) {
    case Op::Var:
    case Op::Param: return look(e.name());
    case Op::Num:
      if constexpr (std::is_same_v<T, Rational>) return e.value();
      else return T((typename T::value_type)e.value().num() / (typename T::value_type)e.value().den());
    case Op::Neg: return -eval_generic<T>(e.lhs(), look);
    case Op::Add: return eval_generic<T>(e.lhs(), look) + eval_generic<T>(e.rhs(), look);
    case Op::Sub: return eval_generic<T>(e.lhs(), look) - eval_generic<T>(e.rhs(), look);
    case Op::Mul: return eval_generic<T>(e.lhs(), look) * eval_generic<T>(e.rhs(), look);
    case Op::Div: {
      T d = eval_generic<T>(e.rhs(), look);
      if (d == T(0)) throw Error(ErrorKind::PoleAtPoint, "division by zero in " + e.str());
      return eval_generic<T>(e.lhs(), look) / d;
    }
    case Op::Pow: {
      T b = eval_generic<T>(e.lhs(), look);
      int n = e.exponent();
      if (n < 0 && b == T(0)) throw Error(ErrorKind::PoleAtPoint, "zero to negative power in " + e.str());
      T r(1);
      T f = n < 0 ? T(1) / b : b;
      for (int i = 0; i < (n < 0 ? -n : n); ++i) r = r * f;
      return r;
    }
  }
  return T(0);
}

inline cplx eval_expr(const Expr& e, const std::map<std::string, cplx>& assignment) {
  return eval_generic<cplx>(e, [&](const std::string& n) {
    auto it = assignment.find(n);
    if (it == assignment.end()) throw Error(ErrorKind::MissingBinding, "no value for '" + n + "'");
    return it->second;
  });
}

inline Rational eval_exact(const Expr& e, const std::map<std::string, Rational>& assignment) {
  return eval_generic<Rational>(e, [&](const std::string& n) {
    auto it = assignment.find(n);
    if (it == assignment.end()) throw Error(ErrorKind::MissingBinding, "no value for '" + n + "'");
    return it->second;
  });
}

// ---------------------------------------------------------------- equality

// process-wide default, settable from the command line
inline std::uint64_t& default_equality_seed() {
  static std::uint64_t seed = 0x5eed1234abcdULL;
  return seed;
}

struct EqualityConfig {
  int samples = 5;
  std::uint64_t seed = default_equality_seed();
};

// Random-point comparison as rational functions. Exact arithmetic first; long double if it overflows.
inline bool expr_equal(const Expr& a, const Expr& b, const EqualityConfig& cfg = {}) {
  std::set<std::string> names = atoms(a);
  collect_atoms(b, names);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> pick(1, 97);
  int done = 0;
  for (int attempt = 0; done < cfg.samples && attempt < cfg.samples * 40; ++attempt) {
    std::map<std::string, Rational> pt;
    for (const auto& n : names) pt[n] = Rational(pick(rng), pick(rng));
    try {
      Rational va = eval_exact(a, pt);
      Rational vb = eval_exact(b, pt);
      if (va != vb) return false;
      ++done;
      continue;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PoleAtPoint) continue;
      if (e.kind() != ErrorKind::Overflow) throw;
    }
    using lc = std::complex<long double>;
    auto look = [&](const std::string& n) {
      return lc((long double)pt[n].num() / (long double)pt[n].den());
    };
    try {
      lc va = eval_generic<lc>(a, look);
      lc vb = eval_generic<lc>(b, look);
      long double scale = std::max<long double>({1.0L, std::abs(va), std::abs(vb)});
      if (std::abs(va - vb) > 1e-12L * scale) return false;
      ++done;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PoleAtPoint) throw;
    }
  }
  return done > 0;
}

// ---------------------------------------------------------------- simplify

inline Expr simplify_basic(const Expr& e) {
  auto isn = [](const Expr& x, std::int64_t v) { return x.is_num(Rational(v)); };
  switch (e.op()) {
    case Op::Var:
    case Op::Param:
    case Op::Num: return e;
    case Op::Neg: {
      Expr a = simplify_basic(e.lhs());
      if (a.op() == Op::Neg) return a.lhs();
      if (a.op() == Op::Num) return Expr::num(-a.value());
      return -a;
    }
    case Op::Pow: {
      Expr a = simplify_basic(e.lhs());
      if (e.exponent() == 0) return Expr::num(1);
      if (e.exponent() == 1) return a;
      if (a.op() == Op::Num && !(a.value().is_zero() && e.exponent() < 0))
        return Expr::num(a.value().pow(e.exponent()));
      return Expr::pow(a, e.exponent());
    }
    default: break;
  }
  Expr a = simplify_basic(e.lhs());
  Expr b = simplify_basic(e.rhs());
  bool an = a.op() == Op::Num, bn = b.op() == Op::Num;
  switch (e.op()) {
    case Op::Add:
      if (an && bn) return Expr::num(a.value() + b.value());
      if (isn(a, 0)) return b;
      if (isn(b, 0)) return a;
      if (b.op() == Op::Neg) return a - b.lhs();
      return a + b;
    case Op::Sub:
      if (an && bn) return Expr::num(a.value() - b.value());
      if (isn(b, 0)) return a;
      if (isn(a, 0)) return simplify_basic(-b);
      if (b.op() == Op::Neg) return a + b.lhs();
      return a - b;
    case Op::Mul:
      if (an && bn) return Expr::num(a.value() * b.value());
      if (isn(a, 1)) return b;
      if (isn(b, 1)) return a;
      if (isn(a, -1)) return simplify_basic(-b);
      if (isn(b, -1)) return simplify_basic(-a);
      if (a.op() == Op::Neg && b.op() == Op::Neg) return a.lhs() * b.lhs();
      return a * b;
    case Op::Div:
      if (an && bn && !b.value().is_zero()) return Expr::num(a.value() / b.value());
      if (isn(b, 1)) return a;
      if (isn(b, -1)) return simplify_basic(-a);
      if (a.op() == Op::Neg && b.op() == Op::Neg) return a.lhs() / b.lhs();
      return a / b;
    default: return e;
  }
}

}  // namespace mbhf
