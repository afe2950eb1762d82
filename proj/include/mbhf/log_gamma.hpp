#pragma once
#include <cmath>
#include <complex>

#include "error.hpp"

namespace mbhf {

using cplx = std::complex<double>;

// Principal branch of log Gamma: upward recurrence to Re w >= 15, then Stirling.
// The recurrence subtracts a sum of principal logs, which keeps the branch cut on (-inf, 0].
inline cplx log_gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw Error(ErrorKind::PoleAtNonpositiveInteger, "log_gamma pole at " + std::to_string(z.real()));
  cplx corr = 0.0;
  cplx w = z;
  if (w.real() < 15.0) {
    int n = (int)std::ceil(15.0 - w.real());
    for (int k = 0; k < n; ++k) corr += std::log(w + double(k));
    w += double(n);
  }
  // B_{2k} / (2k (2k-1))
  static const double c[] = {1.0 / 12.0,         -1.0 / 360.0,        1.0 / 1260.0,       -1.0 / 1680.0,
                             1.0 / 1188.0,       -691.0 / 360360.0,   1.0 / 156.0,        -3617.0 / 122400.0,
                             43867.0 / 244188.0, -174611.0 / 125400.0};
  cplx inv = 1.0 / w, inv2 = inv * inv, series = 0.0, p = inv;
  for (double ck : c) {
    series += ck * p;
    p *= inv2;
  }
  const double half_log_2pi = 0.91893853320467274178;
  return (w - 0.5) * std::log(w) - w + half_log_2pi + series - corr;
}

inline cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

}  // namespace mbhf
