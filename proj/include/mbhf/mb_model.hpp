#pragma once
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "log_gamma.hpp"
#include "paramlin.hpp"
#include "ratfun.hpp"

namespace mbhf {

enum class Side { Num, Den };

inline Side flip(Side s) { return s == Side::Num ? Side::Den : Side::Num; }
inline const char* side_name(Side s) { return s == Side::Num ? "num" : "den"; }

struct GammaFactor {
  LinArg arg;
  Side side = Side::Num;
  friend bool operator==(const GammaFactor& a, const GammaFactor& b) { return a.side == b.side && a.arg == b.arg; }
};

struct GammaRatio {
  ParamLin arg;
  Side side = Side::Num;
  friend bool operator==(const GammaRatio& a, const GammaRatio& b) { return a.side == b.side && a.arg == b.arg; }
};

struct PowerFactor {
  Expr base;
  ParamLin exponent;
};

// base^(exponent) where the exponent may still carry integration variables
struct RawPower {
  Expr base;
  LinArg exponent;
};

struct Prefactor {
  std::vector<PowerFactor> powers;
  std::vector<GammaRatio> gamma_ratios;
  Rational constant{1};
};

struct MBIntegral {
  int nvars = 0;
  std::vector<Expr> kernels;
  std::vector<GammaFactor> gammas;
  Prefactor prefactor;
};

// ---------------------------------------------------------------- ordering

inline int cmp_paramlin(const ParamLin& a, const ParamLin& b) {
  auto kind = [](const ParamLin& p) { return p.is_zero() ? 0 : (p.coeffs.empty() ? 1 : 2); };
  int ka = kind(a), kb = kind(b);
  if (ka != kb) return ka < kb ? -1 : 1;
  if (ka == 2) {
    auto na = a.names(), nb = b.names();
    if (na != nb) return na < nb ? -1 : 1;
    for (auto& [n, c] : a.coeffs) {
      const Rational& d = b.coeffs.at(n);
      if (c != d) return c < d ? -1 : 1;
    }
  }
  if (a.constant != b.constant) return a.constant < b.constant ? -1 : 1;
  return 0;
}

// Ordering rules: pure Gamma(-z_i) first by i; fewer variables first; smaller index sets and
// smaller coefficient vectors first; then bare < constant < parameterized with alphabetical
// parameter lists; then constants; numerator before denominator.
inline int cmp_gamma(const GammaFactor& a, const GammaFactor& b) {
  auto pure_index = [](const LinArg& g) {
    if (g.shift.is_zero() && g.z.size() == 1 && g.z.begin()->second == -1) return g.z.begin()->first;
    return 0;
  };
  int pa = pure_index(a.arg), pb = pure_index(b.arg);
  if ((pa > 0) != (pb > 0)) return pa > 0 ? -1 : 1;
  if (pa > 0 && pa != pb) return pa < pb ? -1 : 1;
  if (a.arg.z.size() != b.arg.z.size()) return a.arg.z.size() < b.arg.z.size() ? -1 : 1;
  std::vector<int> ia, ib, ca, cb;
  for (auto& [i, c] : a.arg.z) ia.push_back(i), ca.push_back(c);
  for (auto& [i, c] : b.arg.z) ib.push_back(i), cb.push_back(c);
  if (ia != ib) return ia < ib ? -1 : 1;
  if (ca != cb) return ca < cb ? -1 : 1;
  int c = cmp_paramlin(a.arg.shift, b.arg.shift);
  if (c != 0) return c;
  if (a.side != b.side) return a.side == Side::Num ? -1 : 1;
  return 0;
}

inline void cancel_pairs(std::vector<GammaFactor>& g) {
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].side != Side::Num) continue;
    for (size_t j = 0; j < g.size(); ++j) {
      if (g[j].side == Side::Den && g[j].arg == g[i].arg) {
        g.erase(g.begin() + std::max(i, j));
        g.erase(g.begin() + std::min(i, j));
        i = (size_t)-1;
        break;
      }
    }
  }
}

inline void tidy_prefactor(Prefactor& p) {
  auto& r = p.gamma_ratios;
  for (size_t i = 0; i < r.size(); ++i) {
    if (r[i].side != Side::Num) continue;
    for (size_t j = 0; j < r.size(); ++j) {
      if (r[j].side == Side::Den && r[j].arg == r[i].arg) {
        r.erase(r.begin() + std::max(i, j));
        r.erase(r.begin() + std::min(i, j));
        i = (size_t)-1;
        break;
      }
    }
  }
  std::stable_sort(r.begin(), r.end(), [](const GammaRatio& a, const GammaRatio& b) {
    if (a.side != b.side) return a.side == Side::Num;
    return cmp_paramlin(a.arg, b.arg) < 0;
  });
  std::vector<PowerFactor> merged;
  for (auto& pw : p.powers) {
    bool done = false;
    for (auto& m : merged) {
      if (expr_equal(m.base, pw.base)) {
        m.exponent = m.exponent + pw.exponent;
        done = true;
        break;
      }
    }
    if (!done) merged.push_back(pw);
  }
  std::vector<PowerFactor> kept;
  for (auto& m : merged)
    if (!m.exponent.is_zero() && !expr_equal(m.base, Expr::num(1))) kept.push_back(m);
  std::stable_sort(kept.begin(), kept.end(), [](const PowerFactor& a, const PowerFactor& b) {
    std::string sa = a.base.str(), sb = b.base.str();
    if (sa != sb) return sa < sb;
    return a.exponent.str() < b.exponent.str();
  });
  p.powers = kept;
}

inline MBIntegral canonicalize(const MBIntegral& m) {
  MBIntegral r = m;
  cancel_pairs(r.gammas);
  std::stable_sort(r.gammas.begin(), r.gammas.end(),
                   [](const GammaFactor& a, const GammaFactor& b) { return cmp_gamma(a, b) < 0; });
  tidy_prefactor(r.prefactor);
  return r;
}

// ---------------------------------------------------------------- folding

inline Expr tidy_base(const Expr& e) { return normalize_rational(e); }

// Moves z-dependence of raw powers into the kernels; z-free parts become PowerFactors.
inline MBIntegral fold_exponents(const MBIntegral& m, const std::vector<RawPower>& raw) {
  MBIntegral r = m;
  for (const auto& rp : raw) {
    Expr base = tidy_base(rp.base);
    for (auto& [i, c] : rp.exponent.z) {
      if (i < 1 || i > r.nvars) throw Error(ErrorKind::BadDocument, "exponent names z" + std::to_string(i));
      r.kernels[i - 1] = tidy_base(r.kernels[i - 1] * Expr::pow(base, c));
    }
    if (rp.exponent.shift.is_zero()) continue;
    // a base of the form 1/Q is stored as Q with the opposite exponent
    FForm f = FForm::from_expr(base);
    bool all_neg = f.coef.is_one() && !f.factors.empty();
    for (auto& [p, e] : f.factors) all_neg = all_neg && e < 0;
    if (all_neg) r.prefactor.powers.push_back({f.inverse().to_expr(), -rp.exponent.shift});
    else r.prefactor.powers.push_back({base, rp.exponent.shift});
  }
  return r;
}

// ---------------------------------------------------------------- evaluation

using Bindings = std::map<std::string, cplx>;

inline cplx principal_log_base(cplx b, ErrorKind kind, const std::string& what) {
  if (b.imag() == 0.0 && b.real() <= 0.0) throw Error(kind, what + " evaluates to " + std::to_string(b.real()));
  return std::log(b);
}

inline void check_gamma_arg(cplx a) {
  double r = std::round(a.real());
  if (r <= 0 && std::abs(a.real() - r) < 1e-13 && std::abs(a.imag()) < 1e-13)
    throw Error(ErrorKind::GammaPole, "Gamma argument at nonpositive integer " + std::to_string(r));
}

inline Bindings merge_bindings(const Bindings& a, const Bindings& b) {
  Bindings r = a;
  for (auto& [k, v] : b) r[k] = v;
  return r;
}

// log of the z-independent prefactor
inline cplx log_prefactor(const Prefactor& p, const Bindings& params, const Bindings& point) {
  Bindings all = merge_bindings(params, point);
  cplx s = std::log(cplx(p.constant.to_double()));
  for (auto& g : p.gamma_ratios) {
    cplx a = g.arg.eval(params);
    check_gamma_arg(a);
    s += (g.side == Side::Num ? 1.0 : -1.0) * log_gamma(a);
  }
  for (auto& pw : p.powers) {
    cplx b = eval_expr(pw.base, all);
    cplx e = pw.exponent.eval(params);
    bool integer_exp = e.imag() == 0.0 && e.real() == std::round(e.real());
    if (integer_exp && b.imag() == 0.0 && b.real() < 0.0) {
      s += e.real() * std::log(cplx(-b.real())) + cplx(0, M_PI * std::fmod(e.real(), 2.0));
      continue;
    }
    s += e * principal_log_base(b, ErrorKind::BranchCutViolation, "power base " + pw.base.str());
  }
  return s;
}

inline cplx integrand_eval(const MBIntegral& m, const Bindings& params, const Bindings& point,
                           const std::vector<cplx>& zv) {
  Bindings all = merge_bindings(params, point);
  cplx s = log_prefactor(m.prefactor, params, point);
  for (int i = 0; i < m.nvars; ++i) {
    cplx k = eval_expr(m.kernels[i], all);
    s += zv.at(i) * principal_log_base(k, ErrorKind::NonPositiveKernelBase, "kernel " + m.kernels[i].str());
  }
  for (auto& g : m.gammas) {
    cplx a = g.arg.eval(params, zv);
    check_gamma_arg(a);
    s += (g.side == Side::Num ? 1.0 : -1.0) * log_gamma(a);
  }
  return std::exp(s);
}

// ---------------------------------------------------------------- text forms

// "G(-z1) G(a+z1+z2) / G(c+z1+z2)"; the Greek capital gamma is accepted too
inline std::vector<GammaFactor> parse_gamma_list(const std::string& text) {
  std::vector<GammaFactor> out;
  Side side = Side::Num;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char ch = text[i];
    if (ch == '/') {
      side = Side::Den;
      ++i;
    } else if (ch == 'G' || (ch == 0xCE && i + 1 < text.size() && (unsigned char)text[i + 1] == 0x93)) {
      i += ch == 'G' ? 1 : 2;
      if (i >= text.size() || text[i] != '(') throw Error(ErrorKind::ParseError, "expected '(' in " + text);
      int depth = 0;
      size_t st = i;
      for (; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')' && --depth == 0) break;
      }
      if (depth != 0) throw Error(ErrorKind::ParseError, "unbalanced parentheses in " + text);
      out.push_back({parse_linarg(text.substr(st + 1, i - st - 1)), side});
      ++i;
    } else if (std::isspace(ch) || ch == '*') {
      ++i;
    } else {
      throw Error(ErrorKind::ParseError, "unexpected character in gamma list: " + text);
    }
  }
  return out;
}

inline std::vector<GammaRatio> parse_gamma_ratios(const std::string& text) {
  std::vector<GammaRatio> r;
  for (auto& g : parse_gamma_list(text)) {
    if (g.arg.has_z()) throw Error(ErrorKind::ParseError, "prefactor gamma depends on z: " + text);
    r.push_back({g.arg.shift, g.side});
  }
  return r;
}

inline std::string unicode_minus(const std::string& s) {
  std::string r;
  for (char c : s) {
    if (c == '-') r += "\xE2\x88\x92";
    else r += c;
  }
  return r;
}

// Product of Gammas in list order, numerators then denominators.
inline std::string gamma_string(const std::vector<GammaFactor>& g, bool unicode = true) {
  std::string num, den;
  const char* G = unicode ? "\xCE\x93" : "G";
  for (auto& f : g) {
    std::string t = std::string(G) + "(" + f.arg.str() + ")";
    (f.side == Side::Num ? num : den) += t;
  }
  std::string s = num.empty() ? "1" : num;
  if (!den.empty()) s += "/" + den;
  return unicode ? unicode_minus(s) : s;
}

inline std::string prefactor_string(const Prefactor& p, bool unicode = true) {
  std::string s;
  if (!p.constant.is_one()) s += p.constant.str() + " ";
  std::vector<GammaFactor> g;
  for (auto& r : p.gamma_ratios) g.push_back({LinArg(r.arg), r.side});
  if (!g.empty()) s += gamma_string(g, unicode);
  for (auto& pw : p.powers) {
    std::string t = "(" + pw.base.str() + ")^(" + pw.exponent.str() + ")";
    s += (s.empty() ? "" : " ") + (unicode ? unicode_minus(t) : t);
  }
  return s.empty() ? "1" : s;
}

inline std::string integral_string(const MBIntegral& m, bool unicode = true) {
  std::string s = prefactor_string(m.prefactor, unicode) + " *";
  for (int i = 0; i < m.nvars; ++i) {
    std::string t = " (" + m.kernels[i].str() + ")^z" + std::to_string(i + 1);
    s += unicode ? unicode_minus(t) : t;
  }
  return s + " " + gamma_string(m.gammas, unicode);
}

// Structural equality of canonical forms: exact Gammas, expr_equal on kernels and on the
// power product grouped by exponent.
inline bool same_power_product(const std::vector<PowerFactor>& a, const std::vector<PowerFactor>& b) {
  struct Group {
    ParamLin e;
    Expr ratio;
  };
  auto add = [](std::vector<Group>& gs, const PowerFactor& p, bool invert) {
    ParamLin e = invert ? -p.exponent : p.exponent;
    for (auto& g : gs) {
      if (g.e == e) {
        g.ratio = g.ratio * p.base;
        return;
      }
      if (g.e == -e) {
        g.ratio = g.ratio / p.base;
        return;
      }
    }
    gs.push_back({e, p.base});
  };
  std::vector<Group> ga;
  for (auto& p : a) add(ga, p, false);
  for (auto& p : b) add(ga, p, true);
  for (auto& g : ga)
    if (!expr_equal(g.ratio, Expr::num(1))) return false;
  return true;
}

inline bool structurally_equal(const MBIntegral& x, const MBIntegral& y) {
  MBIntegral a = canonicalize(x), b = canonicalize(y);
  if (a.nvars != b.nvars || a.gammas.size() != b.gammas.size()) return false;
  for (size_t i = 0; i < a.gammas.size(); ++i)
    if (!(a.gammas[i] == b.gammas[i])) return false;
  for (int i = 0; i < a.nvars; ++i)
    if (!expr_equal(a.kernels[i], b.kernels[i])) return false;
  if (a.prefactor.constant != b.prefactor.constant) return false;
  if (a.prefactor.gamma_ratios.size() != b.prefactor.gamma_ratios.size()) return false;
  for (size_t i = 0; i < a.prefactor.gamma_ratios.size(); ++i)
    if (!(a.prefactor.gamma_ratios[i] == b.prefactor.gamma_ratios[i])) return false;
  return same_power_product(a.prefactor.powers, b.prefactor.powers);
}

// Convenience constructor from text pieces.
inline MBIntegral make_integral(const std::vector<std::string>& kernels, const std::string& gammas,
                                const std::string& gamma_ratios = "",
                                const std::vector<std::pair<std::string, std::string>>& powers = {},
                                const Rational& constant = Rational(1)) {
  MBIntegral m;
  m.nvars = (int)kernels.size();
  for (auto& k : kernels) m.kernels.push_back(parse_expr(k));
  m.gammas = parse_gamma_list(gammas);
  m.prefactor.gamma_ratios = parse_gamma_ratios(gamma_ratios);
  for (auto& [b, e] : powers) m.prefactor.powers.push_back({parse_expr(b), parse_paramlin(e)});
  m.prefactor.constant = constant;
  for (int i = 1; i <= m.nvars; ++i) {
    bool seen = false;
    for (auto& g : m.gammas) seen = seen || g.arg.coef(i) != 0;
    if (!seen) throw Error(ErrorKind::BadDocument, "z" + std::to_string(i) + " appears in no Gamma factor");
  }
  return m;
}

}  // namespace mbhf
