#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "oddsphere/error.hpp"
#include "oddsphere/interval.hpp"
#include "oddsphere/polynomial.hpp"

namespace oddsphere {

/// Euclidean distance in R^{2d} between two points of C^d.
inline double chordal_distance(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

inline double euclidean_norm(const Point& x) {
  double s = 0.0;
  for (const auto& c : x) s += std::norm(c);
  return std::sqrt(s);
}

/// Seeded uniform sample of S^{2d-1}, obtained by normalising standard
/// Gaussian vectors of R^{2d}.
///
/// mesh() bounds the covering radius: every point of the sphere lies within
/// mesh() (chordal) of some sample. On the circle it is computed exactly from
/// the angular gaps; for d >= 2 it is estimated as twice the largest
/// nearest-neighbour distance inside the sample.
class SphereSampler {
 public:
  SphereSampler(std::size_t d, std::size_t count, std::uint64_t seed) : d_(d) {
    require(d >= 1, "sphere dimension d must be >= 1");
    require(count >= 1, "sphere sample set must be nonempty");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    points_.reserve(count);
    while (points_.size() < count) {
      Point p(d);
      for (auto& c : p) c = {gauss(rng), gauss(rng)};
      double r = euclidean_norm(p);
      if (r < 1e-12) continue;
      for (auto& c : p) c /= r;
      points_.push_back(std::move(p));
    }
    mesh_ = d == 1 ? circle_covering_radius() : nearest_neighbour_estimate();
  }

  /// Uses the given points verbatim (each must have unit norm).
  SphereSampler(std::size_t d, std::vector<Point> points) : d_(d), points_(std::move(points)) {
    require(!points_.empty(), "sphere sample set must be nonempty");
    for (const auto& p : points_) {
      require(p.size() == d, "sample point dimension mismatch");
      require(std::abs(euclidean_norm(p) - 1.0) <= 1e-12, "sample point is not on the unit sphere");
    }
    mesh_ = d == 1 ? circle_covering_radius() : nearest_neighbour_estimate();
  }

  /// n equally spaced points on the unit circle (d = 1), starting at z = 1.
  static SphereSampler circle_grid(std::size_t n) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) {
      double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
      pts.push_back({std::polar(1.0, t)});
    }
    return SphereSampler(1, std::move(pts));
  }

  std::size_t dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  double mesh() const noexcept { return mesh_; }

 private:
  double circle_covering_radius() const {
    std::vector<double> angles;
    angles.reserve(points_.size());
    for (const auto& p : points_) angles.push_back(std::arg(p[0]));
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    return 2.0 * std::sin(gap / 4.0);  // chord to the midpoint of the largest arc
  }

  double nearest_neighbour_estimate() const {
    if (points_.size() == 1) return 2.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < points_.size(); ++j)
        if (i != j) best = std::min(best, chordal_distance(points_[i], points_[j]));
      worst = std::max(worst, best);
    }
    return std::min(2.0, 2.0 * worst);
  }

  std::size_t d_;
  std::vector<Point> points_;
  double mesh_ = 0.0;
};

/// Seeded points uniform in the ball |z| <= radius of C^d.
inline std::vector<Point> random_ball_points(std::size_t d, std::size_t count, double radius,
                                             std::uint64_t seed) {
  require(d >= 1, "dimension d must be >= 1");
  require(radius >= 0.0 && radius < 1.0, "ball radius must lie in [0, 1)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Point> out;
  while (out.size() < count) {
    Point p(d);
    for (auto& c : p) c = {gauss(rng), gauss(rng)};
    double r = euclidean_norm(p);
    if (r < 1e-12) continue;
    double scale = radius * std::pow(uni(rng), 1.0 / (2.0 * static_cast<double>(d))) / r;
    for (auto& c : p) c *= scale;
    out.push_back(std::move(p));
  }
  return out;
}

/// Encloses sup_{S^{2d-1}} |p|: lo is the sample maximum, hi inflates it by a
/// certified gradient bound times the sampler mesh.
template <class C>
Interval sup_norm_on_sphere(const Polynomial<C>& p, const SphereSampler& s) {
  require(p.dim() == s.dim(), "symbol and sampler dimensions differ");
  require(s.size() > 0, "empty sample set");
  double lo = 0.0;
  for (const auto& x : s.points()) lo = std::max(lo, std::abs(p.evaluate(x)));
  double hi = lo + p.gradient_bound() * s.mesh();
  return {lo, std::min(hi, std::max(lo, p.coefficient_abs_sum()))};
}

/// Encloses the chordal Lipschitz constant of p restricted to S^{2d-1}:
/// lo is the largest difference quotient over all sample pairs, hi the
/// coefficient gradient bound.
template <class C>
Interval lipschitz_constant(const Polynomial<C>& p, const SphereSampler& s) {
  require(p.dim() == s.dim(), "symbol and sampler dimensions differ");
  if constexpr (ScalarTraits<C>::exact) {
    require(p.is_hermitian(), "Lipschitz constant requires a real-valued symbol");
  } else {
    require(p.is_hermitian(1e-12 * std::max(1.0, p.coefficient_abs_sum())),
            "Lipschitz constant requires a real-valued symbol");
  }
  const auto& pts = s.points();
  std::vector<double> values;
  values.reserve(pts.size());
  for (const auto& x : pts) values.push_back(p.evaluate(x).real());
  double lo = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dist = chordal_distance(pts[i], pts[j]);
      if (dist > 0.0) lo = std::max(lo, std::abs(values[i] - values[j]) / dist);
    }
  return {lo, std::max(lo, p.gradient_bound())};
}

}  // namespace oddsphere
