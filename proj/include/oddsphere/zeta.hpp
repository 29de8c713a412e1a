#pragma once

#include <cmath>
#include <limits>

#include "oddsphere/error.hpp"
#include "oddsphere/interval.hpp"

namespace oddsphere {

/// Certified enclosure of zeta(s) - 1 = sum_{m>=2} m^{-s}, s > 1.
///
/// Partial sum up to M plus the integral bracket
///   int_{M+1}^inf x^{-s} dx <= sum_{m>M} m^{-s} <= int_M^inf x^{-s} dx,
/// with M the smallest cutoff whose bracket (plus a floating-point
/// allowance) fits in tol.
inline Interval zeta_minus_one(double s, double tol) {
  require(std::isfinite(s) && s > 1.0, "zeta needs s > 1");
  require(std::isfinite(tol) && tol > 0.0, "tolerance must be > 0");
  const double eps = std::numeric_limits<double>::epsilon();
  auto tail = [s](double x) { return std::pow(x, 1.0 - s) / (s - 1.0); };
  // Every quantity is below 2^{-s} (1 + 2/(s-1)) >= the whole sum.
  // Compensated summation errs by at most (2u + M u^2) sum; add an ulp per
  // pow and a few for the tail integrals.
  const double scale = std::pow(2.0, -s) * (1.0 + 2.0 / (s - 1.0));
  auto allowance = [eps, scale](double m) { return (8.0 + m * eps) * eps * scale; };
  auto width = [&](double m) { return tail(m) - tail(m + 1.0) + 2.0 * allowance(m); };

  double hi_m = 2.0;
  while (width(hi_m) > tol) {
    hi_m *= 2.0;
    require(hi_m < 1e9, "tolerance too small for the zeta tail bracket");
  }
  double lo_m = std::max(2.0, hi_m / 2.0);
  while (hi_m - lo_m > 1.0) {
    double m = std::floor(0.5 * (lo_m + hi_m));
    (width(m) > tol ? lo_m : hi_m) = m;
  }
  const auto cutoff = static_cast<long>(width(lo_m) <= tol ? lo_m : hi_m);

  // Kahan summation from the small end.
  double sum = 0.0, comp = 0.0;
  for (long m = cutoff; m >= 2; --m) {
    double y = std::pow(static_cast<double>(m), -s) - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double pad = allowance(static_cast<double>(cutoff));
  return {sum + tail(cutoff + 1.0) - pad, sum + tail(static_cast<double>(cutoff)) + pad};
}

/// gamma_alpha = zeta(alpha + 2) - 1, the constant bounding
/// ||T - sigma(pi(T))|| by gamma_alpha L_alpha(T).
inline Interval gamma_interval(double alpha, double tol = 1e-12) {
  require(std::isfinite(alpha) && alpha >= 1.0, "gamma needs alpha >= 1");
  return zeta_minus_one(alpha + 2.0, tol);
}

/// 2 gamma_alpha: the bridge bound on the quantum Gromov-Hausdorff distance
/// between the Toeplitz algebra at weight alpha and C(S^{2d-1}).
inline Interval qgh_upper_bound(double alpha, double tol = 1e-12) {
  Interval g = gamma_interval(alpha, tol / 2.0);
  return {2.0 * g.lo, 2.0 * g.hi};
}

}  // namespace oddsphere
