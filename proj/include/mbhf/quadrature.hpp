#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include "mb_model.hpp"

namespace mbhf {

struct ContourSpec {
  std::vector<double> real_parts;
  double margin = 0.0;  // smallest real part over numerator Gamma arguments
};

struct QuadOptions {
  double T = 0.0;  // 0 picks the default for the fold count
  double h = 0.0;
  double delta = 0.02;
  bool auto_h = false;
  int threads = 0;  // 0 reads MBHF_THREADS, then hardware concurrency
};

struct QuadResult {
  cplx value;
  double error_estimate = 0.0;
  double T = 0.0, h = 0.0;
  ContourSpec contour;
};

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MBHF_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : (int)hw;
}

namespace detail {

// Solves the small dense system A x = b by partial pivoting; false if singular.
inline bool solve_small(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& x) {
  int n = (int)b.size();
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(A[r][c]) > std::abs(A[p][c])) p = r;
    if (std::abs(A[p][c]) < 1e-12) return false;
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (int r = c + 1; r < n; ++r) {
      double f = A[r][c] / A[c][c];
      for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= A[r][k] * x[k];
    x[r] = s / A[r][r];
  }
  return true;
}

}  // namespace detail

// Max-margin straight contours: maximize t subject to Re(arg_g(r)) >= t for every numerator
// Gamma, |r_k| <= box, t <= cap. Solved exactly by enumerating LP vertices (n <= 3).
inline ContourSpec find_contour(const MBIntegral& m, const Bindings& params, double delta = 0.02,
                                double box = 8.0, double cap = 2.0) {
  int n = m.nvars;
  ContourSpec spec;
  // rows: coeffs on r (n), coefficient on t, rhs  ->  sum c_k r_k - t >= -shift
  struct Row {
    std::vector<double> a;
    double rhs;
  };
  std::vector<Row> rows;
  for (auto& g : m.gammas) {
    if (g.side != Side::Num) continue;
    Row r{std::vector<double>(n + 1, 0.0), -g.arg.shift.eval(params).real()};
    for (auto& [k, c] : g.arg.z) r.a[k - 1] = c;
    r.a[n] = -1.0;
    rows.push_back(r);
  }
  if (n == 0) {
    double t = cap;
    for (auto& r : rows) t = std::min(t, -r.rhs);
    spec.margin = t;
    if (t < delta) throw Error(ErrorKind::Infeasible, "constant Gamma argument too close to a pole");
    return spec;
  }
  for (int k = 0; k < n; ++k) {
    Row lo{std::vector<double>(n + 1, 0.0), -box}, hi{std::vector<double>(n + 1, 0.0), -box};
    lo.a[k] = 1.0;
    hi.a[k] = -1.0;
    rows.push_back(lo);
    rows.push_back(hi);
  }
  Row tcap{std::vector<double>(n + 1, 0.0), -cap};
  tcap.a[n] = -1.0;
  rows.push_back(tcap);

  int dim = n + 1, R = (int)rows.size();
  double best_t = -1e300;
  std::vector<double> best;
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  // iterate over all dim-subsets of rows in lexicographic order
  for (;;) {
    std::vector<std::vector<double>> A;
    std::vector<double> b, x;
    for (int i : idx) A.push_back(rows[i].a), b.push_back(rows[i].rhs);
    if (detail::solve_small(A, b, x)) {
      bool ok = true;
      for (auto& r : rows) {
        double s = 0;
        for (int k = 0; k < dim; ++k) s += r.a[k] * x[k];
        if (s < r.rhs - 1e-9) {
          ok = false;
          break;
        }
      }
      if (ok && x[n] > best_t + 1e-12) best_t = x[n], best = x;
    }
    int p = dim - 1;
    while (p >= 0 && idx[p] == R - dim + p) --p;
    if (p < 0) break;
    ++idx[p];
    for (int q = p + 1; q < dim; ++q) idx[q] = idx[q - 1] + 1;
  }
  if (best.empty() || best_t < delta)
    throw Error(ErrorKind::Infeasible, "no straight contour with margin " + std::to_string(delta) +
                                           " (best " + std::to_string(best_t) + ")");
  spec.real_parts.assign(best.begin(), best.begin() + n);
  spec.margin = best_t;
  return spec;
}

inline void default_grid(int nvars, double& T, double& h) {
  if (T <= 0) T = nvars >= 3 ? 28.0 : 40.0;
  if (h <= 0) h = nvars >= 3 ? 0.25 : 0.125;
}

namespace detail {

struct Neumaier {
  cplx sum = 0.0, comp = 0.0;
  void add(cplx v) {
    auto one = [](double& s, double& c, double x) {
      double t = s + x;
      if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
      else c += (x - t) + s;
      s = t;
    };
    double sr = sum.real(), si = sum.imag(), cr = comp.real(), ci = comp.imag();
    one(sr, cr, v.real());
    one(si, ci, v.imag());
    sum = cplx(sr, si);
    comp = cplx(cr, ci);
  }
  cplx value() const { return sum + comp; }
};

}  // namespace detail

// Smallest exponential decay rate of the integrand along unit directions t of Im z:
// (pi/2)(sum_num |l.t| - sum_den |l.t|) - |sum_k arg(K_k) t_k|. Positive means exponential
// decay everywhere; zero leaves directions where only the power-law tail decides.
inline double decay_margin(const MBIntegral& m, const Bindings& params, const Bindings& point) {
  int n = m.nvars;
  if (n == 0) return M_PI;
  Bindings all = merge_bindings(params, point);
  std::vector<double> th(n);
  for (int k = 0; k < n; ++k) th[k] = std::arg(eval_expr(m.kernels[k], all));
  auto rate = [&](const std::array<double, 3>& t) {
    double r = 0.0, a = 0.0;
    for (auto& g : m.gammas) {
      double d = 0.0;
      for (auto& [i, c] : g.arg.z) d += c * t[i - 1];
      r += (g.side == Side::Num ? 1.0 : -1.0) * std::abs(d);
    }
    for (int k = 0; k < n; ++k) a += th[k] * t[k];
    return M_PI / 2 * r - std::abs(a);
  };
  double best = 1e300;
  if (n == 1) return rate({1.0, 0.0, 0.0});
  if (n == 2) {
    for (int j = 0; j < 1440; ++j) {
      double p = M_PI * j / 1440;
      best = std::min(best, rate({std::cos(p), std::sin(p), 0.0}));
    }
    return best;
  }
  // Fibonacci points on the sphere
  const int K = 8000;
  for (int j = 0; j < K; ++j) {
    double zc = 1.0 - (2.0 * j + 1.0) / K, rr = std::sqrt(1.0 - zc * zc), p = j * M_PI * (3.0 - std::sqrt(5.0));
    best = std::min(best, rate({rr * std::cos(p), rr * std::sin(p), zc}));
  }
  return best;
}

// Tensor trapezoid rule on z_k = r_k + i t_k, t_k in [-T, T]. Log-Gamma values are tabulated
// along the integer combination sum c_k j_k, so each grid point costs table lookups and one exp.
// The error estimate compares against the nested step-2h subgrid and the half-width T/2 box.
inline QuadResult mb_quad(const MBIntegral& m, const Bindings& params, const Bindings& point,
                          const ContourSpec& contour, double T, double h, int threads = 0) {
  int n = m.nvars;
  default_grid(n, T, h);
  QuadResult res;
  res.T = T;
  res.h = h;
  res.contour = contour;
  cplx base = log_prefactor(m.prefactor, params, point);
  if (n == 0) {
    for (auto& g : m.gammas) {
      cplx a = g.arg.eval(params, {});
      check_gamma_arg(a);
      base += (g.side == Side::Num ? 1.0 : -1.0) * log_gamma(a);
    }
    res.value = std::exp(base);
    return res;
  }
  if ((int)contour.real_parts.size() != n) throw Error(ErrorKind::Infeasible, "contour dimension mismatch");
  int N = (int)std::llround(T / h);
  if (N % 2) ++N;
  int L = 2 * N + 1;

  Bindings all = merge_bindings(params, point);
  // kernels: z_k log K_k
  std::vector<std::vector<cplx>> ktab(n, std::vector<cplx>(L));
  for (int k = 0; k < n; ++k) {
    cplx lk = principal_log_base(eval_expr(m.kernels[k], all), ErrorKind::NonPositiveKernelBase,
                                 "kernel " + m.kernels[k].str());
    for (int j = -N; j <= N; ++j) ktab[k][j + N] = cplx(contour.real_parts[k], h * j) * lk;
  }
  struct GTab {
    std::array<int, 3> c{0, 0, 0};
    int off = 0;
    std::vector<cplx> v;
  };
  std::vector<GTab> gt;
  for (auto& g : m.gammas) {
    GTab t;
    int span = 0;
    cplx shift = g.arg.shift.eval(params);
    double re = shift.real();
    for (auto& [k, c] : g.arg.z) {
      if (k > 3) throw Error(ErrorKind::BadDocument, "quadrature supports at most 3 folds");
      t.c[k - 1] = c;
      span += std::abs(c);
      re += c * contour.real_parts[k - 1];
    }
    t.off = span * N;
    t.v.resize(2 * t.off + 1);
    double sgn = g.side == Side::Num ? 1.0 : -1.0;
    for (int J = -t.off; J <= t.off; ++J) {
      cplx a(re, shift.imag() + h * J);
      check_gamma_arg(a);
      t.v[J + t.off] = sgn * log_gamma(a);
    }
    gt.push_back(std::move(t));
  }

  int nthreads = std::max(1, std::min(resolve_threads(threads), L));
  // per outer slab: full, even subgrid, inner box
  std::vector<std::array<cplx, 3>> slab(L);
  int half = N / 2;
  auto work = [&](int j0) {
    detail::Neumaier full, even, inner;
    int j1lo = n >= 2 ? -N : 0, j1hi = n >= 2 ? N : 0;
    int j2lo = n >= 3 ? -N : 0, j2hi = n >= 3 ? N : 0;
    for (int j1 = j1lo; j1 <= j1hi; ++j1) {
      for (int j2 = j2lo; j2 <= j2hi; ++j2) {
        int j[3] = {j0, j1, j2};
        cplx s = base;
        for (int k = 0; k < n; ++k) s += ktab[k][j[k] + N];
        for (auto& t : gt) s += t.v[t.c[0] * j[0] + t.c[1] * j[1] + t.c[2] * j[2] + t.off];
        if (s.real() > 700.0) throw Error(ErrorKind::Overflow, "integrand magnitude overflow in quadrature");
        cplx v = std::exp(s);
        full.add(v);
        bool ev = true, in = true;
        for (int k = 0; k < n; ++k) {
          ev = ev && (j[k] % 2 == 0);
          in = in && std::abs(j[k]) <= half;
        }
        if (ev) even.add(v);
        if (in) inner.add(v);
      }
    }
    slab[j0 + N] = {full.value(), even.value(), inner.value()};
  };
  if (nthreads == 1) {
    for (int j0 = -N; j0 <= N; ++j0) work(j0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(nthreads);
    for (int w = 0; w < nthreads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int j0 = -N + w; j0 <= N; j0 += nthreads) work(j0);
        } catch (...) {
          errs[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }
  detail::Neumaier F, E, I;
  for (auto& s : slab) F.add(s[0]), E.add(s[1]), I.add(s[2]);
  double w = std::pow(h / (2 * M_PI), n);
  cplx full = F.value() * w, even = E.value() * w * std::pow(2.0, n), inner = I.value() * w;
  res.value = full;
  res.error_estimate = std::abs(full - even) + std::abs(full - inner);
  return res;
}

// Contour search plus default (or auto) grid.
inline QuadResult quad_auto(const MBIntegral& m, const Bindings& params, const Bindings& point,
                            const QuadOptions& opt = {}) {
  ContourSpec c = find_contour(m, params, opt.delta);
  double T = opt.T, h = opt.h;
  default_grid(m.nvars, T, h);
  if (opt.auto_h && m.nvars > 0) h = std::min(h, 2 * M_PI * c.margin / 28.0);
  return mb_quad(m, params, point, c, T, h, opt.threads);
}

}  // namespace mbhf
