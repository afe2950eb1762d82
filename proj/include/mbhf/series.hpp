#pragma once
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "mb_json.hpp"
#include "quadrature.hpp"

namespace mbhf {

// ---------------------------------------------------------------- Pochhammer

// (a)_n = Gamma(a+n)/Gamma(a) for every integer n, by direct product.
inline cplx pochhammer(cplx a, int n) {
  cplx r = 1.0;
  if (n >= 0) {
    for (int k = 0; k < n; ++k) r *= a + double(k);
    return r;
  }
  for (int k = 1; k <= -n; ++k) {
    cplx f = a - double(k);
    if (f == 0.0) throw Error(ErrorKind::PoleInNegativeExtension, "(a)_n with a-" + std::to_string(k) + " = 0");
    r /= f;
  }
  return r;
}

// ---------------------------------------------------------------- types

constexpr const char* kIndexNames = "mnp";

using LinearForm = std::array<int, 3>;

struct PochFactor {
  ParamLin shift;
  LinearForm form{0, 0, 0};
  Side side = Side::Num;
};

// constant * sum over indices of prod args^idx / idx! * prod Pochhammer factors
struct HornSeries {
  int nindices = 1;
  std::vector<Expr> args;
  std::vector<PochFactor> pochs;
  Rational constant{1};
};

struct SeriesBlock {
  Prefactor prefactor;
  HornSeries series;
};

struct HornResult {
  cplx value;
  double tail_estimate = 0.0;
  bool converged = false;
  int shells = 0;
};

struct SeriesOptions {
  double tol = 1e-10;
  int maxN = 0;  // 0 picks 240 for up to two indices, 120 for three
  int growth_run = 3;  // stop after this many growing shells past N = 30; 0 never stops
};

inline std::string form_str(const LinearForm& f) {
  std::string s;
  for (int k = 0; k < 3; ++k) {
    int c = f[k];
    if (c == 0) continue;
    std::string body = (std::abs(c) == 1 ? "" : std::to_string(std::abs(c))) + kIndexNames[k];
    s += (c < 0 ? "-" : (s.empty() ? "" : "+")) + body;
  }
  return s.empty() ? "0" : s;
}

inline std::string poch_string(const std::vector<PochFactor>& p) {
  std::string num, den;
  for (auto& f : p) {
    std::string fs = form_str(f.form);
    std::string t = "(" + f.shift.str() + ")_" + (fs.size() == 1 ? fs : "{" + fs + "}");
    (f.side == Side::Num ? num : den) += t;
  }
  return (num.empty() ? "1" : num) + (den.empty() ? "" : "/" + den);
}

// "(a)_{m+n}(b)_m(b')_n/(c)_{m+n}"
inline std::vector<PochFactor> parse_pochs(const std::string& s) {
  std::vector<PochFactor> out;
  Side side = Side::Num;
  size_t i = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::ParseError, msg + " at position " + std::to_string(i) + " in '" + s + "'");
  };
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace((unsigned char)ch) || ch == '*') {
      ++i;
    } else if (ch == '/') {
      if (side == Side::Den) fail("second '/'");
      side = Side::Den;
      ++i;
    } else if (ch == '1' && side == Side::Num && out.empty()) {
      ++i;  // "1/(c)_m"
    } else if (ch == '(') {
      int depth = 0;
      size_t st = i;
      for (; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')' && --depth == 0) break;
      }
      if (depth != 0) fail("unbalanced parentheses");
      PochFactor f;
      f.shift = parse_paramlin(s.substr(st + 1, i - st - 1));
      f.side = side;
      ++i;
      if (i >= s.size() || s[i] != '_') fail("expected '_'");
      ++i;
      std::string form;
      if (i < s.size() && s[i] == '{') {
        size_t e = s.find('}', i);
        if (e == std::string::npos) fail("unclosed '{'");
        form = s.substr(i + 1, e - i - 1);
        i = e + 1;
      } else if (i < s.size()) {
        form = s.substr(i++, 1);
      }
      auto lin = detail::linearize(parse_expr(form, {}));
      for (auto& [name, c] : lin) {
        auto pos = std::string(kIndexNames).find(name);
        if (name.size() != 1 || pos == std::string::npos || !c.is_integer()) fail("bad index form '" + form + "'");
        f.form[pos] = (int)c.num();
      }
      out.push_back(f);
    } else {
      fail("unexpected character");
    }
  }
  return out;
}

// ---------------------------------------------------------------- summation

namespace detail {

// log of (a)_L for L in [lo, hi]; zero entries flagged instead of logged
struct PochTable {
  int lo = 0;
  std::vector<cplx> logv;
  std::vector<char> zero;
  void build(cplx a, int lo_, int hi, bool denominator) {
    lo = lo_;
    int n = hi - lo + 1;
    logv.assign(n, 0.0);
    zero.assign(n, 0);
    // upward from 0
    cplx acc = 0.0;
    bool z = false;
    for (int L = 0; L <= hi; ++L) {
      if (L >= lo) logv[L - lo] = acc, zero[L - lo] = z;
      cplx f = a + double(L);
      if (f == 0.0) z = true;
      else acc += std::log(f);
    }
    // downward: (a)_{-k} = 1 / prod_{j=1..k} (a - j)
    acc = 0.0;
    bool pole = false;
    for (int L = -1; L >= lo; --L) {
      cplx f = a + double(L);
      if (f == 0.0) pole = true;
      else acc -= std::log(f);
      if (pole && !denominator) throw Error(ErrorKind::PoleInNegativeExtension, "negative-index Pochhammer pole");
      logv[L - lo] = acc;
      zero[L - lo] = pole;  // for a denominator a pole of (a)_L makes 1/(a)_L vanish
    }
  }
};

}  // namespace detail

inline int default_maxN(int nindices) { return nindices >= 3 ? 120 : 240; }

inline HornResult horn_eval(const HornSeries& s, const Bindings& params, const Bindings& point,
                            const SeriesOptions& opt = {}) {
  int d = s.nindices;
  if (d < 1 || d > 3 || (int)s.args.size() != d) throw Error(ErrorKind::BadDocument, "series needs 1..3 indices");
  int maxN = opt.maxN > 0 ? opt.maxN : default_maxN(d);
  Bindings all = merge_bindings(params, point);
  std::vector<cplx> logx(d);
  std::vector<char> xzero(d);
  for (int k = 0; k < d; ++k) {
    cplx v = eval_expr(s.args[k], all);
    xzero[k] = v == 0.0;
    logx[k] = xzero[k] ? 0.0 : std::log(v);
  }
  std::vector<cplx> logfact(maxN + 1, 0.0);
  for (int k = 1; k <= maxN; ++k) logfact[k] = logfact[k - 1] + std::log((double)k);
  std::vector<detail::PochTable> tabs(s.pochs.size());
  for (size_t q = 0; q < s.pochs.size(); ++q) {
    const auto& f = s.pochs[q];
    int lo = 0, hi = 0;
    for (int k = 0; k < d; ++k) (f.form[k] < 0 ? lo : hi) += f.form[k] * maxN;
    tabs[q].build(f.shift.eval(params), lo, hi, f.side == Side::Den);
  }
  double c0 = s.constant.to_double();
  HornResult res;
  detail::Neumaier total;
  int small_run = 0, grow_run = 0;
  double prev_shell = -1.0;
  for (int N = 0; N <= maxN; ++N) {
    detail::Neumaier shell;
    double shell_abs = 0.0;
    int idx[3] = {0, 0, 0};
    auto term = [&]() {
      for (int k = 0; k < d; ++k)
        if (xzero[k] && idx[k] > 0) return;
      cplx lg = 0.0;
      for (int k = 0; k < d; ++k) lg += double(idx[k]) * logx[k] - logfact[idx[k]];
      bool num_zero = false, den_pole = false;
      for (size_t q = 0; q < tabs.size(); ++q) {
        const auto& f = s.pochs[q];
        int L = f.form[0] * idx[0] + f.form[1] * idx[1] + f.form[2] * idx[2];
        const auto& t = tabs[q];
        bool z = t.zero[L - t.lo];
        if (f.side == Side::Num) {
          if (z) num_zero = true;
          else lg += t.logv[L - t.lo];
        } else {
          if (z) {
            if (L >= 0) den_pole = true;
            else num_zero = true;
          } else {
            lg -= t.logv[L - t.lo];
          }
        }
      }
      if (num_zero) return;
      if (den_pole) throw Error(ErrorKind::DenominatorPochPole, "denominator Pochhammer vanishes in the summation range");
      cplx v = c0 * std::exp(lg);
      shell.add(v);
      shell_abs += std::abs(v);
    };
    if (d == 1) {
      idx[0] = N;
      term();
    } else if (d == 2) {
      for (int m = 0; m <= N; ++m) idx[0] = m, idx[1] = N - m, term();
    } else {
      for (int m = 0; m <= N; ++m)
        for (int n = 0; n <= N - m; ++n) idx[0] = m, idx[1] = n, idx[2] = N - m - n, term();
    }
    total.add(shell.value());
    res.shells = N + 1;
    res.tail_estimate = shell_abs;
    double part = std::abs(total.value());
    // two consecutive small shells guard against accidental cancellation in one shell
    if (shell_abs <= opt.tol * part || (shell_abs == 0.0 && part == 0.0 && N > 0)) {
      if (++small_run >= 2) {
        res.converged = true;
        break;
      }
    } else {
      small_run = 0;
    }
    grow_run = (prev_shell >= 0 && shell_abs > prev_shell && N > 30) ? grow_run + 1 : 0;
    prev_shell = shell_abs;
    if (opt.growth_run > 0 && grow_run >= opt.growth_run) break;
  }
  res.value = total.value();
  return res;
}

inline cplx block_prefactor(const Prefactor& p, const Bindings& params, const Bindings& point) {
  return std::exp(log_prefactor(p, params, point));
}

inline HornResult block_eval(const SeriesBlock& b, const Bindings& params, const Bindings& point,
                             const SeriesOptions& opt = {}) {
  cplx pre = block_prefactor(b.prefactor, params, point);
  HornResult r = horn_eval(b.series, params, point, opt);
  r.value *= pre;
  r.tail_estimate *= std::abs(pre);
  return r;
}

// ---------------------------------------------------------------- named registry

struct ValidationPoint {
  Bindings params, point;
};

struct NamedSeries {
  std::string name;
  std::vector<std::string> slots;
  HornSeries tmpl;  // Pochhammer shifts in slot names; args are the index variables
  std::optional<MBIntegral> mb;
  std::optional<ValidationPoint> validation;
  bool validated = false;
  std::string note;
};

inline ParamLin substitute_paramlin(const ParamLin& p, const std::map<std::string, ParamLin>& sub) {
  ParamLin r(p.constant);
  for (auto& [n, c] : p.coeffs) {
    auto it = sub.find(n);
    r = r + (it == sub.end() ? ParamLin::param(n) : it->second).scaled(c);
  }
  return r;
}

inline NamedSeries make_named(const std::string& name, const std::vector<std::string>& slots, int nindices,
                              const std::string& pochs) {
  NamedSeries s;
  s.name = name;
  s.slots = slots;
  s.tmpl.nindices = nindices;
  for (int k = 0; k < nindices; ++k) s.tmpl.args.push_back(Expr::var(default_vars()[k]));
  s.tmpl.pochs = parse_pochs(pochs);
  for (auto& f : s.tmpl.pochs)
    for (auto& [n, c] : f.shift.coeffs)
      if (std::find(slots.begin(), slots.end(), n) == slots.end())
        throw Error(ErrorKind::BadDocument, name + ": Pochhammer shift uses undeclared slot " + n);
  return s;
}

// Kampe de Feriet F^{p:q;k}_{l:m;n}: slots a1..ap, b1..bq, c1..ck over al1..all, be1..bem, ga1..gan.
inline std::optional<NamedSeries> make_kdf(const std::string& name) {
  static const std::regex re(R"(KdF\[(\d):(\d);(\d)/(\d):(\d);(\d)\])");
  std::smatch mt;
  if (!std::regex_match(name, mt, re)) return std::nullopt;
  int cnt[6];
  for (int k = 0; k < 6; ++k) cnt[k] = std::stoi(mt[k + 1]);
  const char* stem[6] = {"a", "b", "c", "al", "be", "ga"};
  const char* form[6] = {"{m+n}", "m", "n", "{m+n}", "m", "n"};
  std::vector<std::string> slots;
  std::string num, den;
  for (int g = 0; g < 6; ++g)
    for (int k = 1; k <= cnt[g]; ++k) {
      std::string sl = std::string(stem[g]) + std::to_string(k);
      slots.push_back(sl);
      (g < 3 ? num : den) += "(" + sl + ")_" + form[g];
    }
  return make_named(name, slots, 2, (num.empty() ? "1" : num) + (den.empty() ? "" : "/" + den));
}

class NamedRegistry {
 public:
  static NamedRegistry builtin() {
    NamedRegistry r;
    auto add = [&](NamedSeries s, std::optional<MBIntegral> mb, ValidationPoint vp) {
      s.mb = std::move(mb);
      s.validation = std::move(vp);
      r.entries_[s.name] = std::move(s);
    };
    add(make_named("2F1", {"a", "b", "c"}, 1, "(a)_m(b)_m/(c)_m"),
        make_integral({"-x"}, "G(-z1)G(a+z1)G(b+z1)/G(c+z1)", "G(c)/G(a)G(b)"),
        {{{"a", 1.3}, {"b", 1.45}, {"c", 3.1}}, {{"x", -0.3}}});
    add(make_named("F1", {"a", "b", "b'", "c"}, 2, "(a)_{m+n}(b)_m(b')_n/(c)_{m+n}"),
        make_integral({"-x", "-y"}, "G(-z1)G(-z2)G(a+z1+z2)G(b+z1)G(b'+z2)/G(c+z1+z2)", "G(c)/G(a)G(b)G(b')"),
        {{{"a", 1.3}, {"b", 0.9}, {"b'", 1.1}, {"c", 2.7}}, {{"x", -0.3}, {"y", -0.2}}});
    add(make_named("F2", {"a", "b", "b'", "c", "c'"}, 2, "(a)_{m+n}(b)_m(b')_n/(c)_m(c')_n"),
        make_integral({"-x", "-y"}, "G(-z1)G(-z2)G(a+z1+z2)G(b+z1)G(b'+z2)/G(c+z1)G(c'+z2)",
                      "G(c)G(c')/G(a)G(b)G(b')"),
        {{{"a", 1.3}, {"b", 0.9}, {"b'", 1.1}, {"c", 2.2}, {"c'", 2.6}}, {{"x", -0.2}, {"y", -0.15}}});
    add(make_named("F3", {"a", "a'", "b", "b'", "c"}, 2, "(a)_m(a')_n(b)_m(b')_n/(c)_{m+n}"),
        make_integral({"-x", "-y"}, "G(-z1)G(-z2)G(a+z1)G(a'+z2)G(b+z1)G(b'+z2)/G(c+z1+z2)",
                      "G(c)/G(a)G(a')G(b)G(b')"),
        {{{"a", 0.9}, {"a'", 1.1}, {"b", 0.8}, {"b'", 1.2}, {"c", 3.3}}, {{"x", -0.3}, {"y", -0.2}}});
    add(make_named("F4", {"a", "b", "c", "c'"}, 2, "(a)_{m+n}(b)_{m+n}/(c)_m(c')_n"),
        make_integral({"-x", "-y"}, "G(-z1)G(-z2)G(a+z1+z2)G(b+z1+z2)/G(c+z1)G(c'+z2)", "G(c)G(c')/G(a)G(b)"),
        {{{"a", 1.3}, {"b", 0.9}, {"c", 2.2}, {"c'", 2.6}}, {{"x", -0.05}, {"y", -0.04}}});
    add(make_named("H2", {"alpha", "beta", "gamma", "delta", "epsilon"}, 2,
                   "(alpha)_{m-n}(beta)_m(gamma)_n(delta)_n/(epsilon)_m"),
        std::nullopt, {});
    add(make_named("H_C", {"a", "b", "c", "d"}, 3, "(a)_{m+n}(b)_{n+p}(c)_{p+m}/(d)_{m+n+p}"),
        make_integral({"-x", "-y", "-z"}, "G(-z1)G(-z2)G(-z3)G(a+z1+z2)G(b+z2+z3)G(c+z3+z1)/G(d+z1+z2+z3)",
                      "G(d)/G(a)G(b)G(c)"),
        {{{"a", 3.2}, {"b", 3.3}, {"c", 3.1}, {"d", 7.3}}, {{"x", -0.1}, {"y", -0.1}, {"z", -0.1}}});
    r.entries_["H2"].validation.reset();
    return r;
  }

  bool contains(const std::string& name) const { return entries_.count(name) || make_kdf(name).has_value(); }

  const NamedSeries& get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it != entries_.end()) return it->second;
    if (auto k = make_kdf(name)) {
      auto& slot = kdf_cache_[name];
      slot = *k;
      return slot;
    }
    throw Error(ErrorKind::UnknownName, "no named series '" + name + "'");
  }

  // Adds an entry; with an MB form and validation point, series and quadrature must agree to 1e-4.
  const NamedSeries& register_named(NamedSeries s, const QuadOptions& qo = {}) {
    if (contains(s.name)) throw Error(ErrorKind::DuplicateName, "named series '" + s.name + "' already registered");
    if (s.mb && s.validation) {
      validate(s, qo);
    } else {
      s.validated = false;
      if (s.note.empty()) s.note = "unvalidated";
    }
    return entries_[s.name] = std::move(s);
  }

  static double validation_deviation(const NamedSeries& s, QuadOptions qo = {}) {
    qo.auto_h = true;
    HornResult h = horn_eval(s.tmpl, s.validation->params, s.validation->point);
    QuadResult q = quad_auto(*s.mb, s.validation->params, s.validation->point, qo);
    return std::abs(h.value - q.value) / std::max(1e-300, std::abs(q.value));
  }

  static void validate(NamedSeries& s, const QuadOptions& qo = {}) {
    double dev = validation_deviation(s, qo);
    if (!(dev <= 1e-4))
      throw Error(ErrorKind::ValidationFailure,
                  s.name + ": series and MB quadrature differ by " + std::to_string(dev) + " (relative)");
    s.validated = true;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> v;
    for (auto& [n, e] : entries_) v.push_back(n);
    return v;
  }
  const std::map<std::string, NamedSeries>& entries() const { return entries_; }

 private:
  std::map<std::string, NamedSeries> entries_;
  mutable std::map<std::string, NamedSeries> kdf_cache_;
};

// A named function applied to parameter combinations and argument expressions.
struct NamedCall {
  std::string name;
  std::vector<ParamLin> params;
  std::vector<Expr> args;
};

inline HornSeries instantiate(const NamedRegistry& reg, const NamedCall& call) {
  const NamedSeries& s = reg.get(call.name);
  if (call.params.size() != s.slots.size())
    throw Error(ErrorKind::BadDocument, call.name + " expects " + std::to_string(s.slots.size()) + " parameters");
  if ((int)call.args.size() != s.tmpl.nindices)
    throw Error(ErrorKind::BadDocument, call.name + " expects " + std::to_string(s.tmpl.nindices) + " arguments");
  std::map<std::string, ParamLin> sub;
  for (size_t k = 0; k < s.slots.size(); ++k) sub[s.slots[k]] = call.params[k];
  HornSeries h = s.tmpl;
  for (auto& f : h.pochs) f.shift = substitute_paramlin(f.shift, sub);
  h.args = call.args;
  return h;
}

// ---------------------------------------------------------------- JSON

inline json to_json(const HornSeries& s) {
  json j;
  j["schema"] = "horn-series.v1";
  j["nindices"] = s.nindices;
  j["args"] = json::array();
  for (auto& a : s.args) j["args"].push_back(a.str());
  j["pochs"] = json::array();
  for (auto& f : s.pochs) {
    json form = json::object();
    for (int k = 0; k < 3; ++k)
      if (f.form[k]) form[std::string(1, kIndexNames[k])] = f.form[k];
    j["pochs"].push_back({{"shift", f.shift.str()}, {"form", form}, {"side", side_name(f.side)}});
  }
  j["constant"] = s.constant.str();
  return j;
}

inline HornSeries horn_from_json(const json& j) {
  try {
    expect_schema(j, "horn-series.v1");
    HornSeries s;
    s.nindices = j.at("nindices").get<int>();
    if (s.nindices < 1 || s.nindices > 3) throw Error(ErrorKind::BadDocument, "nindices must be 1..3");
    for (auto& a : j.at("args")) s.args.push_back(parse_expr(a.get<std::string>()));
    const json& p = j.at("pochs");
    if (p.is_string()) {
      s.pochs = parse_pochs(p.get<std::string>());
    } else {
      for (auto& f : p) {
        PochFactor pf;
        pf.shift = paramlin_from_json(f.at("shift"));
        for (auto& [k, v] : f.at("form").items()) {
          auto pos = std::string(kIndexNames).find(k);
          if (k.size() != 1 || pos == std::string::npos) throw Error(ErrorKind::BadDocument, "bad index " + k);
          pf.form[pos] = v.get<int>();
        }
        pf.side = side_from_json(f.at("side"));
        s.pochs.push_back(pf);
      }
    }
    if (j.contains("constant")) s.constant = rational_from_json(j["constant"]);
    if ((int)s.args.size() != s.nindices) throw Error(ErrorKind::BadDocument, "args count differs from nindices");
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadDocument, std::string("horn-series.v1: ") + e.what());
  }
}

inline json prefactor_to_json(const Prefactor& p) {
  json pf;
  pf["powers"] = json::array();
  for (auto& w : p.powers) pf["powers"].push_back({{"base", w.base.str()}, {"exponent", w.exponent.str()}});
  pf["gammaRatios"] = json::array();
  for (auto& r : p.gamma_ratios) pf["gammaRatios"].push_back({{"arg", r.arg.str()}, {"side", side_name(r.side)}});
  pf["constant"] = p.constant.str();
  return pf;
}

// Prefactor from JSON; "gammas" may be given as a compact "G(c)/G(a)G(b)" string.
inline Prefactor prefactor_from_json(const json& pf) {
  Prefactor p;
  if (pf.contains("powers"))
    for (auto& w : pf["powers"]) {
      // {"base": .., "exponent": ..} or ["base", "exponent"]
      const json& b = w.is_array() ? w.at(0) : w.at("base");
      const json& e = w.is_array() ? w.at(1) : w.at("exponent");
      p.powers.push_back({parse_expr(b.get<std::string>()), paramlin_from_json(e)});
    }
  if (pf.contains("gammaRatios")) {
    const json& g = pf["gammaRatios"];
    if (g.is_string()) p.gamma_ratios = parse_gamma_ratios(g.get<std::string>());
    else
      for (auto& r : g) p.gamma_ratios.push_back({paramlin_from_json(r.at("arg")), side_from_json(r.at("side"))});
  }
  if (pf.contains("constant")) p.constant = rational_from_json(pf["constant"]);
  return p;
}

// {"name", "params", "args"} or ["name", [params], [args]]
inline NamedCall call_from_json(const json& j) {
  NamedCall c;
  bool arr = j.is_array();
  c.name = (arr ? j.at(0) : j.at("name")).get<std::string>();
  for (auto& p : arr ? j.at(1) : j.at("params")) c.params.push_back(paramlin_from_json(p));
  for (auto& a : arr ? j.at(2) : j.at("args")) c.args.push_back(parse_expr(a.get<std::string>()));
  return c;
}

inline json to_json(const NamedCall& c) {
  json j;
  j["name"] = c.name;
  j["params"] = json::array();
  for (auto& p : c.params) j["params"].push_back(p.str());
  j["args"] = json::array();
  for (auto& a : c.args) j["args"].push_back(a.str());
  return j;
}

// series-block.v1: {prefactor, series: horn-series | call: named call}
inline SeriesBlock block_from_json(const json& j, const NamedRegistry& reg) {
  try {
    expect_schema(j, "series-block.v1");
    SeriesBlock b;
    if (j.contains("prefactor")) b.prefactor = prefactor_from_json(j["prefactor"]);
    if (j.contains("series")) b.series = horn_from_json(j["series"]);
    else if (j.contains("call")) b.series = instantiate(reg, call_from_json(j["call"]));
    else throw Error(ErrorKind::BadDocument, "series block needs 'series' or 'call'");
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadDocument, std::string("series-block.v1: ") + e.what());
  }
}

inline json to_json(const SeriesBlock& b) {
  json j;
  j["schema"] = "series-block.v1";
  j["prefactor"] = prefactor_to_json(b.prefactor);
  j["series"] = to_json(b.series);
  return j;
}

inline Bindings bindings_from_json(const json& j) {
  Bindings b;
  for (auto& [k, v] : j.items()) {
    if (v.is_array()) b[k] = cplx(v.at(0).get<double>(), v.at(1).get<double>());
    else b[k] = cplx(v.get<double>());
  }
  return b;
}

inline json to_json(const NamedSeries& s) {
  json j;
  j["name"] = s.name;
  j["slots"] = s.slots;
  j["nindices"] = s.tmpl.nindices;
  j["pochs"] = poch_string(s.tmpl.pochs);
  if (s.mb) j["mb"] = to_json(*s.mb);
  if (s.validation) {
    json p = json::object(), q = json::object();
    for (auto& [k, v] : s.validation->params) p[k] = v.real();
    for (auto& [k, v] : s.validation->point) q[k] = v.real();
    j["validation"] = {{"params", p}, {"point", q}};
  }
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

inline NamedSeries named_from_json(const json& j) {
  NamedSeries s = make_named(j.at("name").get<std::string>(), j.at("slots").get<std::vector<std::string>>(),
                             j.at("nindices").get<int>(), j.at("pochs").get<std::string>());
  if (j.contains("mb")) s.mb = integral_from_json(j["mb"]);
  if (j.contains("validation"))
    s.validation = ValidationPoint{bindings_from_json(j["validation"].at("params")),
                                   bindings_from_json(j["validation"].at("point"))};
  if (j.contains("note")) s.note = j["note"].get<std::string>();
  return s;
}

inline json registry_to_json(const NamedRegistry& r) {
  json j;
  j["schema"] = "named-series.v1";
  j["entries"] = json::array();
  for (auto& [n, e] : r.entries()) j["entries"].push_back(to_json(e));
  return j;
}

// Adds every entry of a named-series.v1 document through register_named.
inline void load_named_series(NamedRegistry& reg, const json& doc, const QuadOptions& qo = {}) {
  expect_schema(doc, "named-series.v1");
  for (auto& e : doc.at("entries")) reg.register_named(named_from_json(e), qo);
}

}  // namespace mbhf
