#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>

#include "oddsphere/bergman.hpp"
#include "oddsphere/error.hpp"
#include "oddsphere/harmonic.hpp"
#include "oddsphere/interval.hpp"
#include "oddsphere/polynomial.hpp"
#include "oddsphere/sphere.hpp"
#include "oddsphere/toeplitz.hpp"
#include "oddsphere/zeta.hpp"

namespace oddsphere {

/// Finitely supported real symmetric operator K on the enumerated basis,
/// with Lip seminorm sup_{i,j} (i+j)^s |<K e_i, e_j>|, s = alpha + 2.
/// Indices are 1-based, matching the enumeration.
class LipCompactOperator {
 public:
  using IndexPair = std::pair<std::uint64_t, std::uint64_t>;

  explicit LipCompactOperator(double exponent) : exponent_(exponent) {
    require(std::isfinite(exponent) && exponent > 0.0, "Lip weight exponent must be positive");
  }

  /// Takes a dense matrix indexed from 1; rejects asymmetric or complex input.
  static LipCompactOperator from_matrix(const Eigen::MatrixXcd& m, double exponent,
                                        double tol = 0.0) {
    require(m.rows() == m.cols(), "compact part must be square");
    LipCompactOperator k(exponent);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        require(std::abs(m(i, j).imag()) <= tol, "compact part must have real entries");
        require(std::abs(m(i, j) - m(j, i)) <= tol, "compact part must be symmetric");
        if (j >= i && m(i, j).real() != 0.0)
          k.set(static_cast<std::uint64_t>(i + 1), static_cast<std::uint64_t>(j + 1), m(i, j).real());
      }
    return k;
  }

  double exponent() const noexcept { return exponent_; }

  /// Sets K_ij = K_ji = v.
  void set(std::uint64_t i, std::uint64_t j, double v) {
    require(i >= 1 && j >= 1, "compact-part indices are 1-based");
    require(std::isfinite(v), "compact-part entries must be finite");
    if (i > j) std::swap(i, j);
    if (v == 0.0)
      entries_.erase({i, j});
    else
      entries_[{i, j}] = v;
  }

  double get(std::uint64_t i, std::uint64_t j) const {
    if (i > j) std::swap(i, j);
    auto it = entries_.find({i, j});
    return it == entries_.end() ? 0.0 : it->second;
  }

  /// Upper-triangular support (i <= j).
  const std::map<IndexPair, double>& entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }

  std::uint64_t max_index() const {
    std::uint64_t m = 0;
    for (const auto& [ij, v] : entries_) m = std::max(m, ij.second);
    return m;
  }

  LipCompactOperator scaled(double s) const {
    LipCompactOperator r(exponent_);
    for (const auto& [ij, v] : entries_) r.set(ij.first, ij.second, v * s);
    return r;
  }

  friend LipCompactOperator operator+(const LipCompactOperator& a, const LipCompactOperator& b) {
    require(a.exponent_ == b.exponent_, "compact parts carry different weight exponents");
    LipCompactOperator r = a;
    for (const auto& [ij, v] : b.entries_) r.set(ij.first, ij.second, r.get(ij.first, ij.second) + v);
    return r;
  }

  /// Dense size x size real matrix (0-based), size >= max_index().
  Eigen::MatrixXd dense(std::uint64_t size) const {
    require(size >= max_index(), "compact part does not fit in the requested truncation");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size),
                                              static_cast<Eigen::Index>(size));
    for (const auto& [ij, v] : entries_) {
      auto i = static_cast<Eigen::Index>(ij.first - 1), j = static_cast<Eigen::Index>(ij.second - 1);
      m(i, j) = v;
      m(j, i) = v;
    }
    return m;
  }

 private:
  double exponent_;
  std::map<IndexPair, double> entries_;
};

/// sup (i+j)^s |K_ij| over the support.
inline double lip_compact_norm(const LipCompactOperator& k) {
  double m = 0.0;
  for (const auto& [ij, v] : k.entries())
    m = std::max(m, std::pow(static_cast<double>(ij.first + ij.second), k.exponent()) * std::abs(v));
  return m;
}

/// T = sigma(f) + K, with f a real boundary symbol on S^{2d-1} and K a
/// finitely supported Lip compact part; materialised on the degree cutoff.
class LipElement {
 public:
  LipElement(ExactSymbol f, LipCompactOperator k, BergmanWeight w, int cutoff)
      : f_(std::move(f)), k_(std::move(k)), w_(std::move(w)), cutoff_(cutoff) {
    require(f_.dim() == w_.dim(), "boundary symbol dimension does not match weight");
    require(f_.is_hermitian(), "boundary symbol must be real-valued");
    require(cutoff_ >= 0, "degree cutoff must be >= 0");
    require(k_.max_index() <= count_up_to_degree(cutoff_, w_.dim()),
            "compact part exceeds the truncation");
  }

  /// sigma(f) alone.
  static LipElement sigma(ExactSymbol f, const BergmanWeight& w, int cutoff) {
    return {std::move(f), LipCompactOperator(w.alpha() + 2.0), w, cutoff};
  }
  /// K alone.
  static LipElement compact(LipCompactOperator k, const BergmanWeight& w, int cutoff) {
    return {ExactSymbol(w.dim()), std::move(k), w, cutoff};
  }

  const ExactSymbol& boundary() const noexcept { return f_; }
  const LipCompactOperator& compact_part() const noexcept { return k_; }
  const BergmanWeight& weight() const noexcept { return w_; }
  int cutoff() const noexcept { return cutoff_; }

  Eigen::MatrixXcd matrix() const {
    Eigen::MatrixXcd m = splitting_sigma(f_, w_, cutoff_).entries();
    m += k_.dense(static_cast<std::uint64_t>(m.rows())).cast<std::complex<double>>();
    return m;
  }

 private:
  ExactSymbol f_;
  LipCompactOperator k_;
  BergmanWeight w_;
  int cutoff_;
};

/// The symbol map: pi(sigma(f) + K) = f on the sphere.
inline const ExactSymbol& pi_of(const LipElement& t) { return t.boundary(); }

/// L(T) = Lip(K) + L(f|_S): lo uses the sampled Lipschitz lower bound, hi the
/// certified coefficient bound.
inline Interval lip_norm(const LipElement& t, const SphereSampler& s) {
  double lk = lip_compact_norm(t.compact_part());
  Interval lf = lipschitz_constant(t.boundary(), s);
  return {lk + lf.lo, lk + lf.hi};
}

struct LemmaCheck {
  double max_norm = 0.0;        // max ||K|| over trials with Lip(K) = 1
  double max_ratio = 0.0;       // max_norm / gamma.hi
  double max_row_sum = 0.0;     // max over trials of sup_j sum_i |K_ij|
  Interval gamma;
  std::size_t violations = 0;   // trials breaking any link of the chain
  bool pass = false;
};

/// Seeded random check of ||K|| <= sup_j sum_i |K_ij| <= Lip(K) sum_i (i+j)^{-s}
///   <= Lip(K) (zeta(s) - 1), s = alpha + 2, for real symmetric K supported
/// on the top-left support x support block.
inline LemmaCheck lemma_bound_check(double alpha, std::size_t trials, std::uint64_t seed,
                                    std::size_t support) {
  require(trials >= 1, "lemma check needs at least one trial");
  require(support >= 1, "support size must be >= 1");
  const double s = alpha + 2.0;
  LemmaCheck out;
  out.gamma = gamma_interval(alpha, 1e-12);

  std::vector<double> weight_row_sum(support);  // sum_{i<=support} (i+j)^{-s}
  for (std::size_t j = 1; j <= support; ++j) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= support; ++i) acc += std::pow(static_cast<double>(i + j), -s);
    weight_row_sum[j - 1] = acc;
  }
  const double slack = 1e-12;
  for (std::size_t t = 0; t < trials; ++t) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(t)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    LipCompactOperator k(s);
    for (std::size_t i = 1; i <= support; ++i)
      for (std::size_t j = i; j <= support; ++j) k.set(i, j, uni(rng));
    double lip = lip_compact_norm(k);
    if (lip == 0.0) continue;
    k = k.scaled(1.0 / lip);

    Eigen::MatrixXd dense = k.dense(support);
    double norm = spectral_norm(dense);
    Eigen::VectorXd rows = dense.cwiseAbs().rowwise().sum();
    bool ok = norm <= rows.maxCoeff() * (1 + slack);
    for (std::size_t j = 0; j < support; ++j)
      ok = ok && rows(j) <= weight_row_sum[j] * (1 + slack) && weight_row_sum[j] <= weight_row_sum[0];
    ok = ok && weight_row_sum[0] <= out.gamma.hi;
    if (!ok) ++out.violations;
    out.max_norm = std::max(out.max_norm, norm);
    out.max_row_sum = std::max(out.max_row_sum, rows.maxCoeff());
  }
  out.max_ratio = out.max_norm / out.gamma.hi;
  out.pass = out.violations == 0 && out.max_norm <= out.gamma.hi;
  return out;
}

}  // namespace oddsphere
