#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <optional>
#include <vector>

#include "oddsphere/bergman.hpp"
#include "oddsphere/error.hpp"
#include "oddsphere/interval.hpp"
#include "oddsphere/multiindex.hpp"
#include "oddsphere/polynomial.hpp"
#include "oddsphere/sphere.hpp"

namespace oddsphere {

/// <T_phi e_k, e_l> for a polynomial symbol.
///
/// Because phi e_k is again a polynomial, <P(phi e_k), e_l> = <phi e_k, e_l>
/// and only terms with k + a = l + b survive:
///   entry = sum c_{a,b} ||z^{k+a}||^2 / (||z^k|| ||z^l||).
template <class C>
std::complex<double> matrix_element(const BergmanWeight& w, const Polynomial<C>& phi,
                                    const MultiIndex& k, const MultiIndex& l) {
  require(phi.dim() == w.dim() && k.dim() == w.dim() && l.dim() == w.dim(),
          "dimension mismatch in matrix element");
  std::complex<double> sum = 0.0;
  double half = 0.5 * (w.log_norm_sq(k) + w.log_norm_sq(l));
  for (const auto& [key, c] : phi.terms()) {
    MultiIndex top = k + key.first;
    if (top != l + key.second) continue;
    sum += ScalarTraits<C>::to_complex(c) * std::exp(w.log_norm_sq(top) - half);
  }
  return sum;
}

/// Compression P_D T_phi P_D to the span of e_k with |k| <= D, rows and
/// columns in enumeration order. entries()(l, k) = <T_phi e_k, e_l>.
class ToeplitzMatrix {
 public:
  template <class C>
  ToeplitzMatrix(const BergmanWeight& w, const Polynomial<C>& phi, int cutoff)
      : weight_(w), symbol_(to_float(phi)), cutoff_(cutoff) {
    require(cutoff >= 0, "degree cutoff must be >= 0");
    require(phi.dim() == w.dim(), "symbol dimension does not match weight");
    Enumeration en(w.dim());
    basis_ = en.up_to_degree(cutoff);
    const auto size = static_cast<Eigen::Index>(basis_.size());
    entries_ = Eigen::MatrixXcd::Zero(size, size);
    std::vector<double> log_norm(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) log_norm[i] = w.log_norm_sq(basis_[i]);
    for (Eigen::Index col = 0; col < size; ++col) {
      const MultiIndex& k = basis_[col];
      for (const auto& [key, c] : symbol_.terms()) {
        MultiIndex top = k + key.first, l;
        if (!top.try_subtract(key.second, l) || l.degree() > cutoff) continue;
        auto row = static_cast<Eigen::Index>(en.index_of(l) - 1);
        entries_(row, col) +=
            c * std::exp(w.log_norm_sq(top) - 0.5 * (log_norm[col] + log_norm[row]));
      }
    }
  }

  const BergmanWeight& weight() const noexcept { return weight_; }
  const Symbol& symbol() const noexcept { return symbol_; }
  int cutoff() const noexcept { return cutoff_; }
  const std::vector<MultiIndex>& basis() const noexcept { return basis_; }
  const Eigen::MatrixXcd& entries() const noexcept { return entries_; }
  Eigen::Index size() const noexcept { return entries_.rows(); }

 private:
  BergmanWeight weight_;
  Symbol symbol_;
  int cutoff_;
  std::vector<MultiIndex> basis_;
  Eigen::MatrixXcd entries_;
};

template <class C>
ToeplitzMatrix build(const BergmanWeight& w, const Polynomial<C>& phi, int cutoff) {
  return ToeplitzMatrix(w, phi, cutoff);
}

inline bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Largest singular value of a dense matrix.
inline double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (is_hermitian(m, 1e-13 * scale)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

inline double spectral_norm(const Eigen::MatrixXd& m) {
  return spectral_norm(Eigen::MatrixXcd(m.cast<std::complex<double>>()));
}

/// Norm enclosure for a finitely supported operator: exact spectral norm on
/// both sides, with the Schur bound sqrt(max row sum * max column sum) as
/// a check on hi.
inline Interval finite_norm_interval(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return {0.0, 0.0};
  double lo = spectral_norm(m);
  double schur = std::sqrt(m.cwiseAbs().rowwise().sum().maxCoeff() *
                           m.cwiseAbs().colwise().sum().maxCoeff());
  return {lo, std::max(lo, schur)};
}

/// Encloses the norm of the full (untruncated) operator T_phi. The norm of
/// the compression is a lower bound; sum |c_{a,b}| >= sup_ball |phi| is an
/// upper bound, sharpened to the sphere supremum when phi is harmonic
/// (|phi| is then subharmonic and peaks on the boundary).
inline Interval norm_interval(const ToeplitzMatrix& t, const SphereSampler* sampler = nullptr) {
  double lo = spectral_norm(t.entries());
  double hi = t.symbol().coefficient_abs_sum();
  if (sampler != nullptr && sampler->dim() == t.symbol().dim() &&
      to_exact(t.symbol()).is_harmonic())
    hi = std::min(hi, sup_norm_on_sphere(t.symbol(), *sampler).hi);
  return {lo, std::max(lo, hi)};
}

struct DegreeMax {
  int degree = 0;
  double max_abs = 0.0;
};

namespace detail {

inline std::vector<DegreeMax> per_degree_max(const Eigen::MatrixXcd& m,
                                             const std::vector<MultiIndex>& basis,
                                             int max_degree) {
  std::vector<DegreeMax> out;
  for (int deg = 0; deg <= max_degree; ++deg) out.push_back({deg, 0.0});
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    int dr = basis[r].degree();
    if (dr > max_degree) continue;
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (basis[c].degree() > max_degree) continue;
      out[dr].max_abs = std::max(out[dr].max_abs, std::abs(m(r, c)));
    }
  }
  return out;
}

}  // namespace detail

/// Per-row-degree max |[T_phi, T_psi]_{l,k}|. Rows and columns are limited to
/// degree <= D - deg(phi) - deg(psi), where the product of compressions
/// coincides with the compression of the product.
template <class C>
std::vector<DegreeMax> commutator_decay(const BergmanWeight& w, const Polynomial<C>& phi,
                                        const Polynomial<C>& psi, int cutoff) {
  ToeplitzMatrix a(w, phi, cutoff), b(w, psi, cutoff);
  Eigen::MatrixXcd comm = a.entries() * b.entries() - b.entries() * a.entries();
  int valid = cutoff - std::max(0, phi.degree()) - std::max(0, psi.degree());
  if (valid < 0) return {};
  return detail::per_degree_max(comm, a.basis(), valid);
}

/// Per-row-degree max |U* T_{phi,d} U - T_{phi,alpha}| where U identifies the
/// orthonormal bases of H_alpha and the Bergman space H_d.
template <class C>
std::vector<DegreeMax> u_conjugation_difference(const Polynomial<C>& phi, double alpha,
                                                int cutoff) {
  const std::size_t d = phi.dim();
  require(alpha > static_cast<double>(d), "u-conjugation needs alpha > d");
  ToeplitzMatrix base(BergmanWeight(d, static_cast<double>(d)), phi, cutoff);
  ToeplitzMatrix other(BergmanWeight(d, alpha), phi, cutoff);
  return detail::per_degree_max(base.entries() - other.entries(), base.basis(), cutoff);
}

// ---------------------------------------------------------------------------
// Exact path (integer alpha, Gaussian-rational symbols).

/// coeff * sqrt(radicand), radicand >= 0.
struct ExactEntry {
  GaussRational coeff;
  Rational radicand{1};

  bool is_zero() const { return coeff.is_zero() || sgn(radicand) == 0; }
  Rational abs_sq() const { return coeff.norm() * radicand; }
  std::complex<double> to_complex() const {
    return coeff.to_complex() * std::sqrt(radicand.get_d());
  }
  /// The value as a Gaussian rational when the radicand is a perfect square.
  std::optional<GaussRational> as_gauss_rational() const {
    if (is_zero()) return GaussRational{};
    if (!is_perfect_square(radicand)) return std::nullopt;
    Rational root = exact_sqrt(radicand);
    return GaussRational{coeff.re * root, coeff.im * root};
  }
};

/// Exact Toeplitz compression in the scaled form T = N^{-1/2} S N^{-1/2},
/// N = diag(||z^k||^2). S has Gaussian-rational entries, so products and
/// commutators stay exact: (AB)_S = S_A N^{-1} S_B.
class ExactToeplitz {
 public:
  ExactToeplitz(const BergmanWeight& w, const ExactSymbol& phi, int cutoff) : cutoff_(cutoff) {
    require(cutoff >= 0, "degree cutoff must be >= 0");
    require(phi.dim() == w.dim(), "symbol dimension does not match weight");
    require(w.integer_alpha(), "exact Toeplitz entries need an integer alpha");
    Enumeration en(w.dim());
    basis_ = en.up_to_degree(cutoff);
    n_ = basis_.size();
    norms_.reserve(n_);
    for (const auto& k : basis_) norms_.push_back(w.exact_norm_sq(k));
    scaled_.assign(n_ * n_, GaussRational{});
    for (std::size_t col = 0; col < n_; ++col) {
      const MultiIndex& k = basis_[col];
      for (const auto& [key, c] : phi.terms()) {
        MultiIndex top = k + key.first, l;
        if (!top.try_subtract(key.second, l) || l.degree() > cutoff) continue;
        std::size_t row = en.index_of(l) - 1;
        at(row, col) += c * GaussRational(w.exact_norm_sq(top));
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  int cutoff() const noexcept { return cutoff_; }
  const std::vector<MultiIndex>& basis() const noexcept { return basis_; }

  ExactEntry entry(std::size_t row, std::size_t col) const {
    Rational rad = 1 / (norms_[row] * norms_[col]);
    rad.canonicalize();
    return {scaled(row, col), rad};
  }

  friend ExactToeplitz operator*(const ExactToeplitz& a, const ExactToeplitz& b) {
    a.check_compatible(b);
    ExactToeplitz r = a.empty_like();
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = 0; j < a.n_; ++j) {
        if (a.scaled(i, j).is_zero()) continue;
        GaussRational left = a.scaled(i, j) / GaussRational(a.norms_[j]);
        for (std::size_t k = 0; k < a.n_; ++k)
          if (!b.scaled(j, k).is_zero()) r.at(i, k) += left * b.scaled(j, k);
      }
    return r;
  }
  friend ExactToeplitz operator-(const ExactToeplitz& a, const ExactToeplitz& b) {
    a.check_compatible(b);
    ExactToeplitz r = a;
    for (std::size_t i = 0; i < r.scaled_.size(); ++i) r.scaled_[i] -= b.scaled_[i];
    return r;
  }

 private:
  ExactToeplitz() = default;

  ExactToeplitz empty_like() const {
    ExactToeplitz r;
    r.cutoff_ = cutoff_;
    r.basis_ = basis_;
    r.n_ = n_;
    r.norms_ = norms_;
    r.scaled_.assign(n_ * n_, GaussRational{});
    return r;
  }
  void check_compatible(const ExactToeplitz& o) const {
    require(n_ == o.n_ && norms_ == o.norms_, "exact Toeplitz matrices are not compatible");
  }
  GaussRational& at(std::size_t r, std::size_t c) { return scaled_[r * n_ + c]; }
  const GaussRational& scaled(std::size_t r, std::size_t c) const { return scaled_[r * n_ + c]; }

  int cutoff_ = 0;
  std::vector<MultiIndex> basis_;
  std::size_t n_ = 0;
  std::vector<Rational> norms_;
  std::vector<GaussRational> scaled_;
};

/// Exact <T_phi e_k, e_l>, integer alpha.
inline ExactEntry exact_matrix_element(const BergmanWeight& w, const ExactSymbol& phi,
                                       const MultiIndex& k, const MultiIndex& l) {
  require(phi.dim() == w.dim() && k.dim() == w.dim() && l.dim() == w.dim(),
          "dimension mismatch in matrix element");
  ExactEntry e;
  for (const auto& [key, c] : phi.terms())
    if (k + key.first == l + key.second) e.coeff += c * GaussRational(w.exact_norm_sq(k + key.first));
  e.radicand = 1 / (w.exact_norm_sq(k) * w.exact_norm_sq(l));
  e.radicand.canonicalize();
  return e;
}

struct ExactDegreeMax {
  int degree = 0;
  ExactEntry max_entry;
};

/// Exact counterpart of commutator_decay: the entry of largest modulus per row degree.
inline std::vector<ExactDegreeMax> commutator_decay_exact(const BergmanWeight& w,
                                                          const ExactSymbol& phi,
                                                          const ExactSymbol& psi, int cutoff) {
  ExactToeplitz a(w, phi, cutoff), b(w, psi, cutoff);
  ExactToeplitz comm = a * b - b * a;
  int valid = cutoff - std::max(0, phi.degree()) - std::max(0, psi.degree());
  std::vector<ExactDegreeMax> out;
  for (int deg = 0; deg <= valid; ++deg) out.push_back({deg, ExactEntry{GaussRational{}, 1}});
  const auto& basis = comm.basis();
  for (std::size_t r = 0; r < comm.size(); ++r) {
    int dr = basis[r].degree();
    if (dr > valid) continue;
    for (std::size_t c = 0; c < comm.size(); ++c) {
      if (basis[c].degree() > valid) continue;
      ExactEntry e = comm.entry(r, c);
      if (e.abs_sq() > out[dr].max_entry.abs_sq()) out[dr].max_entry = e;
    }
  }
  return out;
}

}  // namespace oddsphere
