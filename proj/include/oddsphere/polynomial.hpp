#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "oddsphere/error.hpp"
#include "oddsphere/gauss_rational.hpp"
#include "oddsphere/multiindex.hpp"

namespace oddsphere {

using Point = std::vector<std::complex<double>>;

/// A polynomial sum c_{a,b} z^a zbar^b on C^d.
///
/// The coefficient field is a template parameter: GaussRational for exact
/// work (harmonic extension, exact Toeplitz entries), std::complex<double>
/// for numerics. Zero coefficients are never stored, so two polynomials are
/// equal iff their term maps are equal.
template <class C>
class Polynomial {
 public:
  using Coeff = C;
  using Key = std::pair<MultiIndex, MultiIndex>;  // (holomorphic a, antiholomorphic b)
  using Traits = ScalarTraits<C>;

  Polynomial() = default;
  explicit Polynomial(std::size_t d) : d_(d) { require(d >= 1, "polynomial dimension must be >= 1"); }

  static Polynomial constant(std::size_t d, C c) {
    Polynomial p(d);
    p.add_term(MultiIndex(d), MultiIndex(d), std::move(c));
    return p;
  }
  static Polynomial monomial(const MultiIndex& a, const MultiIndex& b, C c = Traits::from_int(1)) {
    require(a.dim() == b.dim(), "monomial exponent dimension mismatch");
    Polynomial p(a.dim());
    p.add_term(a, b, std::move(c));
    return p;
  }
  /// z_i, 0-based coordinate.
  static Polynomial z(std::size_t d, std::size_t i) {
    return monomial(MultiIndex::unit(d, i), MultiIndex(d));
  }
  /// conj(z_i), 0-based coordinate.
  static Polynomial zbar(std::size_t d, std::size_t i) {
    return monomial(MultiIndex(d), MultiIndex::unit(d, i));
  }
  /// |z|^2 = sum_i z_i zbar_i.
  static Polynomial norm_squared(std::size_t d) {
    Polynomial p(d);
    for (std::size_t i = 0; i < d; ++i)
      p.add_term(MultiIndex::unit(d, i), MultiIndex::unit(d, i), Traits::from_int(1));
    return p;
  }

  std::size_t dim() const noexcept { return d_; }
  const std::map<Key, C>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  /// Coefficient of z^a zbar^b (zero when absent).
  C coeff(const MultiIndex& a, const MultiIndex& b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? C{} : it->second;
  }

  void add_term(const MultiIndex& a, const MultiIndex& b, const C& c) {
    require(a.dim() == d_ && b.dim() == d_, "term dimension does not match polynomial");
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace({a, b}, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Total degree max(|a| + |b|); -1 for the zero polynomial.
  int degree() const {
    int m = -1;
    for (const auto& [k, c] : terms_) m = std::max(m, k.first.degree() + k.second.degree());
    return m;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
    return *this;
  }
  Polynomial scaled(const C& s) const {
    Polynomial r(d_);
    for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, c * s);
    return r;
  }
  Polynomial operator-() const { return scaled(-Traits::from_int(1)); }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    p.check_dim(q);
    Polynomial r(p.d_);
    for (const auto& [kp, cp] : p.terms_)
      for (const auto& [kq, cq] : q.terms_)
        r.add_term(kp.first + kq.first, kp.second + kq.second, cp * cq);
    return r;
  }
  friend bool operator==(const Polynomial& p, const Polynomial& q) {
    return p.d_ == q.d_ && p.terms_ == q.terms_;
  }

  Polynomial pow(int e) const {
    require(e >= 0, "negative polynomial power");
    Polynomial r = constant(d_, Traits::from_int(1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  /// conj(p): swaps a and b and conjugates coefficients.
  Polynomial conjugate() const {
    Polynomial r(d_);
    for (const auto& [k, c] : terms_) r.add_term(k.second, k.first, Traits::conj(c));
    return r;
  }

  /// Real-valued on C^d iff c_{a,b} = conj(c_{b,a}). Exact for rational
  /// coefficients; the float overload uses an absolute tolerance.
  bool is_hermitian(double tol = 0.0) const {
    for (const auto& [k, c] : terms_) {
      C other = coeff(k.second, k.first);
      if constexpr (Traits::exact) {
        if (!(Traits::conj(other) == c)) return false;
      } else {
        if (std::abs(std::conj(other) - c) > tol) return false;
      }
    }
    return true;
  }

  /// Euclidean Laplacian on R^{2d}: 4 sum_i d^2/(dz_i dzbar_i).
  Polynomial laplacian() const {
    Polynomial r(d_);
    for (const auto& [k, c] : terms_) {
      for (std::size_t i = 0; i < d_; ++i) {
        int ai = k.first[i], bi = k.second[i];
        if (ai == 0 || bi == 0) continue;
        MultiIndex a = k.first, b = k.second;
        --a[i];
        --b[i];
        r.add_term(a, b, c * Traits::from_int(4L * ai * bi));
      }
    }
    return r;
  }

  bool is_harmonic() const { return laplacian().is_zero(); }

  std::complex<double> evaluate(const Point& z) const {
    require(z.size() == d_, "point dimension does not match polynomial");
    std::complex<double> sum = 0.0;
    for (const auto& [k, c] : terms_) {
      std::complex<double> t = Traits::to_complex(c);
      for (std::size_t i = 0; i < d_; ++i) {
        if (k.first[i]) t *= std::pow(z[i], k.first[i]);
        if (k.second[i]) t *= std::pow(std::conj(z[i]), k.second[i]);
      }
      sum += t;
    }
    return sum;
  }

  /// Evaluation in the coefficient field itself (exact for GaussRational).
  C evaluate_exact(const std::vector<C>& z) const {
    require(z.size() == d_, "point dimension does not match polynomial");
    C sum{};
    for (const auto& [k, c] : terms_) {
      C t = c;
      for (std::size_t i = 0; i < d_; ++i) {
        C zb = Traits::conj(z[i]);
        for (int e = 0; e < k.first[i]; ++e) t *= z[i];
        for (int e = 0; e < k.second[i]; ++e) t *= zb;
      }
      sum += t;
    }
    return sum;
  }

  /// sum |c_{a,b}|: bounds sup |p| on the closed unit ball.
  double coefficient_abs_sum() const {
    double s = 0.0;
    for (const auto& [k, c] : terms_) s += Traits::abs(c);
    return s;
  }

  /// sum |c_{a,b}| (|a|+|b|): bounds the Euclidean gradient on the closed
  /// unit ball, hence a chordal Lipschitz constant on any subset of it.
  double gradient_bound() const {
    double s = 0.0;
    for (const auto& [k, c] : terms_)
      s += Traits::abs(c) * (k.first.degree() + k.second.degree());
    return s;
  }

 private:
  void check_dim(const Polynomial& o) const {
    require(d_ == o.d_, "polynomial dimension mismatch");
  }

  std::size_t d_ = 1;
  std::map<Key, C> terms_;
};

using ExactSymbol = Polynomial<GaussRational>;
using Symbol = Polynomial<std::complex<double>>;

inline Symbol to_float(const ExactSymbol& p) {
  Symbol r(p.dim());
  for (const auto& [k, c] : p.terms()) r.add_term(k.first, k.second, c.to_complex());
  return r;
}

inline ExactSymbol to_exact(const Symbol& p) {
  ExactSymbol r(p.dim());
  for (const auto& [k, c] : p.terms()) r.add_term(k.first, k.second, exact_from_complex(c));
  return r;
}

inline Symbol to_float(const Symbol& p) { return p; }

}  // namespace oddsphere
