#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "oddsphere/error.hpp"
#include "oddsphere/gauss_rational.hpp"
#include "oddsphere/multiindex.hpp"
#include "oddsphere/polynomial.hpp"
#include "oddsphere/sphere.hpp"

namespace oddsphere {

/// The weighted probability measure dV_alpha = c_alpha (1-|z|^2)^{alpha-d} dV
/// on the unit ball of C^d, for real alpha >= d. Integer alpha = n gives the
/// generalized Bergman space H_n; alpha = d is the classical Bergman space.
///
/// Monomials are orthogonal and
///   ||z^m||^2 = m! Gamma(alpha+1) / Gamma(|m|+alpha+1),
/// so the orthonormal basis is e_k = z^k / ||z^k||.
class BergmanWeight {
 public:
  static constexpr int kTableDegree = 512;

  BergmanWeight(std::size_t d, double alpha) : d_(d), alpha_(alpha) {
    require(d >= 1, "dimension d must be >= 1");
    require(std::isfinite(alpha) && alpha >= static_cast<double>(d),
            "weight alpha must satisfy alpha >= d");
    auto tables = std::make_shared<Tables>();
    tables->log_factorial.resize(kTableDegree + 1);
    tables->log_gamma_shift.resize(kTableDegree + 1);
    for (int j = 0; j <= kTableDegree; ++j) {
      tables->log_factorial[j] = std::lgamma(j + 1.0);
      tables->log_gamma_shift[j] = std::lgamma(j + alpha + 1.0);
    }
    tables_ = std::move(tables);
  }

  std::size_t dim() const noexcept { return d_; }
  double alpha() const noexcept { return alpha_; }
  bool integer_alpha() const noexcept { return alpha_ == std::floor(alpha_) && alpha_ < 1e9; }

  double log_norm_sq(const MultiIndex& m) const {
    check(m);
    double s = tables_->log_gamma_shift[0] - log_gamma_shift(m.degree());
    for (std::size_t i = 0; i < d_; ++i) s += log_factorial(m[i]);
    return s;
  }

  /// ||z^m||^2 in L^2(dV_alpha).
  double monomial_norm_sq(const MultiIndex& m) const { return std::exp(log_norm_sq(m)); }

  /// Exact m! alpha! / (|m|+alpha)!, integer alpha only.
  Rational exact_norm_sq(const MultiIndex& m) const {
    check(m);
    require(integer_alpha(), "exact norms need an integer alpha");
    auto n = static_cast<unsigned long>(alpha_);
    mpz_class num = factorial(n), den = factorial(n + static_cast<unsigned long>(m.degree()));
    for (std::size_t i = 0; i < d_; ++i) num *= factorial(static_cast<unsigned long>(m[i]));
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  /// Coefficient of z^k in e_k: sqrt(Gamma(|k|+alpha+1) / (k! Gamma(alpha+1))).
  double basis_coeff(const MultiIndex& k) const { return std::exp(-0.5 * log_norm_sq(k)); }

  /// K(z,v) = (1 - <z,v>)^{-(alpha+1)}, <z,v> = sum z_i conj(v_i), principal branch.
  std::complex<double> kernel(const Point& z, const Point& v) const {
    require(z.size() == d_ && v.size() == d_, "kernel point dimension mismatch");
    std::complex<double> w = 1.0 - inner(z, v);
    if (std::abs(w) == 0.0) throw InputError("kernel singularity: <z,v> = 1");
    return std::pow(w, -(alpha_ + 1.0));
  }

  static std::complex<double> inner(const Point& z, const Point& v) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * std::conj(v[i]);
    return s;
  }

 private:
  struct Tables {
    std::vector<double> log_factorial;
    std::vector<double> log_gamma_shift;  // lgamma(j + alpha + 1)
  };

  void check(const MultiIndex& m) const {
    require(m.dim() == d_, "multi-index dimension does not match weight");
  }
  double log_factorial(int j) const {
    return j <= kTableDegree ? tables_->log_factorial[j] : std::lgamma(j + 1.0);
  }
  double log_gamma_shift(int j) const {
    return j <= kTableDegree ? tables_->log_gamma_shift[j] : std::lgamma(j + alpha_ + 1.0);
  }
  static mpz_class factorial(unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
  }

  std::size_t d_;
  double alpha_;
  std::shared_ptr<const Tables> tables_;  // immutable after construction
};

struct KernelSeriesCheck {
  std::complex<double> partial_sum;
  std::complex<double> closed_form;
  double gap = 0.0;
};

/// Compares sum_{|k| <= max_degree} e_k(z) conj(e_k(v)) with the closed-form kernel.
inline KernelSeriesCheck kernel_series_check(const BergmanWeight& w, const Point& z, const Point& v,
                                             int max_degree) {
  require(max_degree >= 0, "degree cutoff must be >= 0");
  require(z.size() == w.dim() && v.size() == w.dim(), "kernel point dimension mismatch");
  require(euclidean_norm(z) < 1.0 && euclidean_norm(v) < 1.0,
          "kernel series points must lie strictly inside the unit ball");
  KernelSeriesCheck out;
  out.closed_form = w.kernel(z, v);
  Enumeration en(w.dim());
  for (const auto& k : en.up_to_degree(max_degree)) {
    std::complex<double> term = 1.0 / w.monomial_norm_sq(k);
    for (std::size_t i = 0; i < w.dim(); ++i)
      if (k[i]) term *= std::pow(z[i] * std::conj(v[i]), k[i]);
    out.partial_sum += term;
  }
  out.gap = std::abs(out.partial_sum - out.closed_form);
  return out;
}

}  // namespace oddsphere
