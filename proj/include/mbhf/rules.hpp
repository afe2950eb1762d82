#pragma once
#include <optional>
#include <string>
#include <vector>

#include "mb_model.hpp"

namespace mbhf {

inline bool is_single_letter(char c) { return c >= 'a' && c <= 'e'; }
inline bool is_pair_letter(char c) { return c == 'k' || c == 'l' || c == 'm'; }

struct TransformStep {
  std::vector<int> vars;
  char source = 'a';
  char target = 'A';

  std::string str() const {
    std::string s;
    for (int v : vars) s += std::to_string(v);
    return s + source + target;
  }
  bool is_identity() const { return std::tolower((unsigned char)target) == source; }
  friend bool operator==(const TransformStep& a, const TransformStep& b) {
    return a.vars == b.vars && a.source == b.source && a.target == b.target;
  }
};

// Gauss parameters of a matched single-variable form; A, B, C may carry other z_j.
struct SingleExtraction {
  LinArg A, B, C;
  Expr u;
};

// Pair data of the F1-type integral all three pair forms equal.
struct PairExtraction {
  LinArg b, bp;
  std::vector<LinArg> as, cs;
  Expr x, y;
};

struct Extraction {
  char letter = 'a';
  std::vector<int> vars;
  std::optional<SingleExtraction> single;
  std::optional<PairExtraction> pair;
};

namespace detail {

inline Expr nz(const Expr& e) { return normalize_rational(e); }

inline void add_gamma(MBIntegral& m, const LinArg& arg, Side side) {
  if (arg.has_z()) m.gammas.push_back({arg, side});
  else m.prefactor.gamma_ratios.push_back({arg.shift, side});
}

struct SingleParts {
  std::vector<size_t> pure, plus_num, plus_den, minus_num;
  bool other = false;
};

inline SingleParts split_single(const MBIntegral& m, int i) {
  SingleParts p;
  for (size_t k = 0; k < m.gammas.size(); ++k) {
    const auto& g = m.gammas[k];
    int c = g.arg.coef(i);
    if (c == 0) continue;
    bool num = g.side == Side::Num;
    if (c == -1 && num && g.arg.is_pure_minus(i)) p.pure.push_back(k);
    else if (c == -1 && num) p.minus_num.push_back(k);
    else if (c == 1 && num) p.plus_num.push_back(k);
    else if (c == 1) p.plus_den.push_back(k);
    else p.other = true;
  }
  return p;
}

struct PairParts {
  std::vector<size_t> pure_i, pure_j, i_num, i_den, j_num, j_den, joint_num, joint_den;
  bool other = false;
};

inline PairParts split_pair(const MBIntegral& m, int i, int j) {
  PairParts p;
  for (size_t k = 0; k < m.gammas.size(); ++k) {
    const auto& g = m.gammas[k];
    int ci = g.arg.coef(i), cj = g.arg.coef(j);
    if (ci == 0 && cj == 0) continue;
    bool num = g.side == Side::Num;
    if (ci == -1 && cj == 0 && num && g.arg.is_pure_minus(i)) p.pure_i.push_back(k);
    else if (ci == 0 && cj == -1 && num && g.arg.is_pure_minus(j)) p.pure_j.push_back(k);
    else if (ci == 1 && cj == 0) (num ? p.i_num : p.i_den).push_back(k);
    else if (ci == 0 && cj == 1) (num ? p.j_num : p.j_den).push_back(k);
    else if (ci == 1 && cj == 1) (num ? p.joint_num : p.joint_den).push_back(k);
    else p.other = true;
  }
  return p;
}

[[noreturn]] inline void no_match(const std::string& what) { throw Error(ErrorKind::NoMatch, what); }

inline LinArg rest(const MBIntegral& m, size_t k, int i) { return m.gammas[k].arg.without(i); }
inline LinArg rest2(const MBIntegral& m, size_t k, int i, int j) { return m.gammas[k].arg.without(i).without(j); }

inline void check_vars(const MBIntegral& m, const std::vector<int>& vars) {
  for (int v : vars)
    if (v < 1 || v > m.nvars) no_match("variable index " + std::to_string(v) + " out of range");
  if (vars.size() == 2 && vars[0] == vars[1]) no_match("pair step needs two distinct variables");
}

}  // namespace detail

// ---------------------------------------------------------------- single-variable forms

struct SingleForm {
  std::vector<GammaFactor> gammas;  // in terms of s = z_i
  std::vector<LinArg> n_num, n_den;  // Gamma constant of the form
  LinArg one_minus_u_exp;             // exponent of (1-u) in the form's prefactor
  Expr kernel;
};

inline SingleForm single_form(char letter, const LinArg& A, const LinArg& B, const LinArg& C, const Expr& u,
                              int i) {
  LinArg s = LinArg::zvar(i);
  SingleForm f;
  auto num = [&](const LinArg& a) { f.gammas.push_back({a, Side::Num}); };
  auto den = [&](const LinArg& a) { f.gammas.push_back({a, Side::Den}); };
  num(-s);
  f.n_num = {C};
  switch (std::tolower((unsigned char)letter)) {
    case 'a':
      num(A + s), num(B + s), den(C + s);
      f.n_den = {A, B};
      f.kernel = -u;
      break;
    case 'b':
      num(C - A + s), num(C - B + s), den(C + s);
      f.n_den = {C - B, C - A};
      f.one_minus_u_exp = C - A - B;
      f.kernel = -u;
      break;
    case 'c':
      num(C - A - B - s), num(A + s), num(B + s);
      f.n_den = {A, B, C - A, C - B};
      f.kernel = Expr::num(1) - u;
      break;
    case 'd':
      num(A + s), num(C - B + s), den(C + s);
      f.n_den = {A, C - B};
      f.one_minus_u_exp = -A;
      f.kernel = u / (Expr::num(1) - u);
      break;
    case 'e':
      num(B + s), num(C - A + s), den(C + s);
      f.n_den = {B, C - A};
      f.one_minus_u_exp = -B;
      f.kernel = u / (Expr::num(1) - u);
      break;
    default: detail::no_match(std::string("not a single-variable letter: ") + letter);
  }
  f.kernel = detail::nz(f.kernel);
  return f;
}

inline SingleExtraction match_single(const MBIntegral& m, int i, char letter) {
  using namespace detail;
  SingleParts p = split_single(m, i);
  Expr K = m.kernels[i - 1];
  std::string where = std::to_string(i) + letter;
  if (p.other || p.pure.size() != 1) no_match(where + ": z" + std::to_string(i) + " factors do not fit");
  SingleExtraction ex;
  if (letter == 'c') {
    if (p.minus_num.size() != 1 || p.plus_num.size() != 2 || !p.plus_den.empty()) no_match(where + ": not a c-form");
    LinArg kappa = rest(m, p.minus_num[0], i);
    if (kappa.shift.is_zero() && !kappa.has_z()) no_match(where + ": degenerate c-form");
    LinArg al = rest(m, p.plus_num[0], i), be = rest(m, p.plus_num[1], i);
    ex.A = al;
    ex.B = be;
    ex.C = kappa + al + be;
    ex.u = nz(Expr::num(1) - K);
    return ex;
  }
  if (!p.minus_num.empty() || p.plus_num.size() != 2 || p.plus_den.size() != 1) no_match(where + ": shape mismatch");
  LinArg al = rest(m, p.plus_num[0], i), be = rest(m, p.plus_num[1], i), ga = rest(m, p.plus_den[0], i);
  switch (letter) {
    case 'a': ex.A = al, ex.B = be, ex.C = ga, ex.u = nz(-K); break;
    case 'b': ex.A = ga - al, ex.B = ga - be, ex.C = ga, ex.u = nz(-K); break;
    case 'd': ex.A = al, ex.B = ga - be, ex.C = ga, ex.u = nz(K / (Expr::num(1) + K)); break;
    // e reads the numerators with roles swapped relative to d: Γ(C-A+s) then Γ(B+s)
    case 'e': ex.A = ga - al, ex.B = be, ex.C = ga, ex.u = nz(K / (Expr::num(1) + K)); break;
    default: no_match(where + ": unknown letter");
  }
  return ex;
}

// ---------------------------------------------------------------- pair forms

struct PairForm {
  std::vector<GammaFactor> gammas;
  std::vector<LinArg> n_num;
  std::optional<RawPower> power;
  Expr ki, kj;
};

inline PairForm pair_form(char letter, const PairExtraction& p, int i, int j) {
  LinArg zi = LinArg::zvar(i), zj = LinArg::zvar(j);
  PairForm f;
  auto num = [&](const LinArg& a) { f.gammas.push_back({a, Side::Num}); };
  auto den = [&](const LinArg& a) { f.gammas.push_back({a, Side::Den}); };
  num(-zi), num(-zj);
  const Expr &x = p.x, &y = p.y;
  switch (std::tolower((unsigned char)letter)) {
    case 'k':
      for (auto& a : p.as) num(a + zi + zj);
      for (auto& c : p.cs) den(c + zi + zj);
      num(p.b + zi), num(p.bp + zj);
      f.ki = -x, f.kj = -y;
      break;
    case 'l':
      for (auto& a : p.as) num(a + zi + zj);
      for (auto& c : p.cs) den(c + zi + zj);
      num(p.b + p.bp + zi + zj), num(p.b + zi), den(p.b + p.bp + zi);
      f.n_num = {p.bp};
      f.ki = y - x, f.kj = -y;
      break;
    case 'm':
      for (auto& a : p.as) num(a + zj);
      for (auto& c : p.cs) den(c + zj);
      num(p.b + p.bp + zi + zj), num(p.bp + zi), den(p.b + p.bp + zi);
      f.n_num = {p.b};
      // (-y)^{-b'} (-x)^{b'} kept as a single power of x/y
      f.power = RawPower{x / y, p.bp};
      f.ki = (x - y) / y, f.kj = -x;
      break;
    default: detail::no_match(std::string("not a pair letter: ") + letter);
  }
  f.ki = detail::nz(f.ki);
  f.kj = detail::nz(f.kj);
  return f;
}

inline PairExtraction match_pair(const MBIntegral& m, int i, int j, char letter) {
  using namespace detail;
  PairParts p = split_pair(m, i, j);
  std::string where = std::to_string(i) + std::to_string(j) + letter;
  if (p.other || p.pure_i.size() != 1 || p.pure_j.size() != 1) no_match(where + ": pair factors do not fit");
  Expr Ki = m.kernels[i - 1], Kj = m.kernels[j - 1];
  PairExtraction ex;
  switch (letter) {
    case 'k': {
      if (p.i_num.size() != 1 || p.j_num.size() != 1 || !p.i_den.empty() || !p.j_den.empty())
        no_match(where + ": not F1-type");
      ex.b = rest(m, p.i_num[0], i);
      ex.bp = rest(m, p.j_num[0], j);
      for (auto k : p.joint_num) ex.as.push_back(rest2(m, k, i, j));
      for (auto k : p.joint_den) ex.cs.push_back(rest2(m, k, i, j));
      ex.x = nz(-Ki);
      ex.y = nz(-Kj);
      return ex;
    }
    case 'l': {
      if (p.i_num.size() != 1 || p.i_den.size() != 1 || !p.j_num.empty() || !p.j_den.empty())
        no_match(where + ": not KdF-type");
      LinArg S = rest(m, p.i_den[0], i);
      std::optional<size_t> sk;
      for (auto k : p.joint_num) {
        if (!sk && rest2(m, k, i, j) == S) sk = k;
        else ex.as.push_back(rest2(m, k, i, j));
      }
      if (!sk) no_match(where + ": KdF-type joint factor missing");
      for (auto k : p.joint_den) ex.cs.push_back(rest2(m, k, i, j));
      ex.b = rest(m, p.i_num[0], i);
      ex.bp = S - ex.b;
      ex.y = nz(-Kj);
      ex.x = nz(-Kj - Ki);
      return ex;
    }
    case 'm': {
      if (p.i_num.size() != 1 || p.i_den.size() != 1 || p.joint_num.size() != 1 || !p.joint_den.empty())
        no_match(where + ": not F2-type");
      LinArg S = rest(m, p.i_den[0], i);
      if (rest2(m, p.joint_num[0], i, j) != S) no_match(where + ": F2-type joint factor mismatch");
      ex.bp = rest(m, p.i_num[0], i);
      ex.b = S - ex.bp;
      for (auto k : p.j_num) ex.as.push_back(rest(m, k, j));
      for (auto k : p.j_den) ex.cs.push_back(rest(m, k, j));
      ex.x = nz(-Kj);
      ex.y = nz(-Kj / (Expr::num(1) + Ki));
      return ex;
    }
    default: no_match(where + ": unknown letter");
  }
}

// ---------------------------------------------------------------- public operations

inline Extraction match_form(const MBIntegral& m, const std::vector<int>& vars, char letter) {
  detail::check_vars(m, vars);
  Extraction ex;
  ex.letter = letter;
  ex.vars = vars;
  if (is_single_letter(letter) && vars.size() == 1) ex.single = match_single(m, vars[0], letter);
  else if (is_pair_letter(letter) && vars.size() == 2) ex.pair = match_pair(m, vars[0], vars[1], letter);
  else throw Error(ErrorKind::ClassMismatch, std::string("letter ") + letter + " with " + std::to_string(vars.size()) +
                                                 " variable(s)");
  return ex;
}

inline void check_step_class(const TransformStep& s) {
  char t = (char)std::tolower((unsigned char)s.target);
  bool single = is_single_letter(s.source) && is_single_letter(t) && s.vars.size() == 1;
  bool pair = is_pair_letter(s.source) && is_pair_letter(t) && s.vars.size() == 2;
  if (!single && !pair) throw Error(ErrorKind::ClassMismatch, "inconsistent step " + s.str());
}

inline MBIntegral apply_step(const MBIntegral& m, const TransformStep& step) {
  check_step_class(step);
  Extraction ex = match_form(m, step.vars, step.source);
  MBIntegral r = m;
  r.gammas.clear();
  auto involved = [&](const GammaFactor& g) {
    for (int v : step.vars)
      if (g.arg.coef(v) != 0) return true;
    return false;
  };
  for (auto& g : m.gammas)
    if (!involved(g)) r.gammas.push_back(g);
  std::vector<RawPower> raw;
  if (ex.single) {
    int i = step.vars[0];
    const auto& s = *ex.single;
    SingleForm src = single_form(step.source, s.A, s.B, s.C, s.u, i);
    SingleForm dst = single_form(step.target, s.A, s.B, s.C, s.u, i);
    for (auto& g : dst.gammas) detail::add_gamma(r, g.arg, g.side);
    for (auto& a : dst.n_num) detail::add_gamma(r, a, Side::Num);
    for (auto& a : dst.n_den) detail::add_gamma(r, a, Side::Den);
    for (auto& a : src.n_num) detail::add_gamma(r, a, Side::Den);
    for (auto& a : src.n_den) detail::add_gamma(r, a, Side::Num);
    r.kernels[i - 1] = dst.kernel;
    LinArg e = dst.one_minus_u_exp - src.one_minus_u_exp;
    if (!e.shift.is_zero() || e.has_z()) raw.push_back({detail::nz(Expr::num(1) - s.u), e});
  } else {
    int i = step.vars[0], j = step.vars[1];
    const auto& p = *ex.pair;
    PairForm src = pair_form(step.source, p, i, j);
    PairForm dst = pair_form(step.target, p, i, j);
    for (auto& g : dst.gammas) detail::add_gamma(r, g.arg, g.side);
    for (auto& a : dst.n_num) detail::add_gamma(r, a, Side::Num);
    for (auto& a : src.n_num) detail::add_gamma(r, a, Side::Den);
    if (dst.power) raw.push_back(*dst.power);
    if (src.power) raw.push_back({src.power->base, -src.power->exponent});
    r.kernels[i - 1] = dst.ki;
    r.kernels[j - 1] = dst.kj;
  }
  return canonicalize(fold_exponents(r, raw));
}

// Removes z_var by the first Barnes lemma; higher variables are renumbered down.
inline MBIntegral barnes_first_lemma_reduce(const MBIntegral& m, int var) {
  detail::check_vars(m, {var});
  if (!expr_equal(m.kernels[var - 1], Expr::num(1))) detail::no_match("Barnes lemma needs kernel base 1");
  std::vector<LinArg> plus, minus;
  MBIntegral r;
  r.nvars = m.nvars - 1;
  r.prefactor = m.prefactor;
  for (auto& g : m.gammas) {
    int c = g.arg.coef(var);
    if (c == 0) continue;
    if (g.side != Side::Num || (c != 1 && c != -1)) detail::no_match("Barnes lemma shape mismatch");
    (c == 1 ? plus : minus).push_back(g.arg.without(var));
  }
  if (plus.size() != 2 || minus.size() != 2) detail::no_match("Barnes lemma needs two +z and two -z Gammas");
  auto shift_down = [var](const LinArg& a) {
    LinArg b(a.shift);
    for (auto& [k, c] : a.z) b.z[k > var ? k - 1 : k] = c;
    return b;
  };
  for (auto& g : m.gammas)
    if (g.arg.coef(var) == 0) r.gammas.push_back({shift_down(g.arg), g.side});
  for (int k = 0; k < m.nvars; ++k)
    if (k != var - 1) r.kernels.push_back(m.kernels[k]);
  for (auto& a : plus)
    for (auto& c : minus) detail::add_gamma(r, shift_down(a + c), Side::Num);
  detail::add_gamma(r, shift_down(plus[0] + plus[1] + minus[0] + minus[1]), Side::Den);
  return canonicalize(r);
}

inline bool step_matches(const MBIntegral& m, const TransformStep& s) {
  try {
    match_form(m, s.vars, s.source);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NoMatch) return false;
    throw;
  }
}

// All non-identity steps whose source shape matches, ordered by vars, source, target.
inline std::vector<TransformStep> enumerate_steps(const MBIntegral& m) {
  std::vector<std::vector<int>> var_sets;
  for (int i = 1; i <= m.nvars; ++i) var_sets.push_back({i});
  for (int i = 1; i <= m.nvars; ++i)
    for (int j = 1; j <= m.nvars; ++j)
      if (i != j) var_sets.push_back({i, j});
  std::sort(var_sets.begin(), var_sets.end());
  std::vector<TransformStep> out;
  for (auto& vs : var_sets) {
    std::string letters = vs.size() == 1 ? "abcde" : "klm";
    for (char src : letters) {
      TransformStep probe{vs, src, (char)std::toupper((unsigned char)src)};
      if (!step_matches(m, probe)) continue;
      for (char t : letters) {
        if (t == src) continue;
        out.push_back({vs, src, (char)std::toupper((unsigned char)t)});
      }
    }
  }
  return out;
}

// The literal inverse letter pair: xY undone by yX on the same variables.
inline TransformStep strict_inverse(const TransformStep& s) {
  return {s.vars, (char)std::tolower((unsigned char)s.target), (char)std::toupper((unsigned char)s.source)};
}

inline char swap_de(char c) {
  switch (c) {
    case 'd': return 'e';
    case 'e': return 'd';
    case 'D': return 'E';
    case 'E': return 'D';
    default: return c;
  }
}

// Inverse that tracks Gauss slots. The d and e shapes coincide and differ only in which
// numerator is read as the parameter slot; canonical reordering can move it. The inverse
// source is the strict letter or its d/e mirror, whichever extracts the forward (A, B, C);
// when it comes back as (B, A, C) the d/e target is mirrored instead.
inline TransformStep slot_aware_inverse(const MBIntegral& before, const MBIntegral& after, const TransformStep& s) {
  TransformStep inv = strict_inverse(s);
  if (s.vars.size() != 1) return inv;
  SingleExtraction fwd = match_single(before, s.vars[0], s.source);
  std::vector<char> sources = {inv.source};
  if (inv.source == 'd' || inv.source == 'e') sources.push_back(swap_de(inv.source));
  for (int pass = 0; pass < 2; ++pass) {
    for (char c : sources) {
      if (!step_matches(after, {s.vars, c, inv.target})) continue;
      SingleExtraction back = match_single(after, s.vars[0], c);
      if (!(back.C == fwd.C)) continue;
      if (pass == 0 && back.A == fwd.A && back.B == fwd.B) return {s.vars, c, inv.target};
      if (pass == 1 && back.A == fwd.B && back.B == fwd.A) return {s.vars, c, swap_de(inv.target)};
    }
  }
  return inv;
}

}  // namespace mbhf
