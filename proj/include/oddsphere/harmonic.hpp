#pragma once

#include <map>
#include <utility>
#include <vector>

#include "oddsphere/bergman.hpp"
#include "oddsphere/error.hpp"
#include "oddsphere/polynomial.hpp"
#include "oddsphere/sphere.hpp"
#include "oddsphere/toeplitz.hpp"

namespace oddsphere {

/// Harmonic polynomial agreeing with given boundary data on S^{2d-1}.
struct DirichletSolution {
  ExactSymbol boundary;
  ExactSymbol extension;
  int residual_degree = -1;  // degree of boundary - extension, -1 when they coincide
  int rounds = 0;            // peeling rounds used by the solver
};

namespace detail {

using Bidegree = std::pair<int, int>;

inline std::map<Bidegree, ExactSymbol> split_bidegree(const ExactSymbol& p) {
  std::map<Bidegree, ExactSymbol> parts;
  for (const auto& [key, c] : p.terms()) {
    Bidegree bd{key.first.degree(), key.second.degree()};
    auto [it, _] = parts.try_emplace(bd, ExactSymbol(p.dim()));
    it->second.add_term(key.first, key.second, c);
  }
  return parts;
}

/// Solves L x = rhs exactly for square L with rational entries and two
/// right-hand sides (real and imaginary parts) by Gauss-Jordan elimination.
inline std::vector<GaussRational> solve_exact(std::vector<std::vector<Rational>> lhs,
                                              std::vector<GaussRational> rhs) {
  const std::size_t n = lhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(lhs[pivot][col]) == 0) ++pivot;
    ensure(pivot < n, "harmonic solver: singular system");
    std::swap(lhs[pivot], lhs[col]);
    std::swap(rhs[pivot], rhs[col]);
    Rational inv = 1 / lhs[col][col];
    for (std::size_t j = col; j < n; ++j) lhs[col][j] *= inv;
    rhs[col] = rhs[col] * GaussRational(inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || sgn(lhs[r][col]) == 0) continue;
      Rational f = lhs[r][col];
      for (std::size_t j = col; j < n; ++j) lhs[r][j] -= f * lhs[col][j];
      rhs[r] -= GaussRational(f) * rhs[col];
    }
  }
  return rhs;
}

/// Finds q of the same bidegree as r with Laplacian(|z|^2 q) = r.
/// On bidegree (p,q) the map is 4(d+p+q) Id + |z|^2 Laplacian, which is
/// invertible, so the square system below always has a unique solution.
inline ExactSymbol solve_shifted_laplacian(const ExactSymbol& r, int hol, int anti) {
  const std::size_t d = r.dim();
  Enumeration en(d);
  std::vector<MultiIndex> as = en.of_degree(hol), bs = en.of_degree(anti);
  std::vector<ExactSymbol::Key> unknowns;
  for (const auto& a : as)
    for (const auto& b : bs) unknowns.emplace_back(a, b);
  std::map<ExactSymbol::Key, std::size_t> row_of;
  for (std::size_t i = 0; i < unknowns.size(); ++i) row_of[unknowns[i]] = i;

  const std::size_t n = unknowns.size();
  std::vector<std::vector<Rational>> lhs(n, std::vector<Rational>(n, Rational(0)));
  ExactSymbol rho = ExactSymbol::norm_squared(d);
  for (std::size_t col = 0; col < n; ++col) {
    ExactSymbol image = (rho * ExactSymbol::monomial(unknowns[col].first, unknowns[col].second))
                            .laplacian();
    for (const auto& [key, c] : image.terms()) lhs[row_of.at(key)][col] = c.re;
  }
  std::vector<GaussRational> rhs(n);
  for (const auto& [key, c] : r.terms()) rhs[row_of.at(key)] = c;
  auto x = solve_exact(std::move(lhs), std::move(rhs));
  ExactSymbol q(d);
  for (std::size_t i = 0; i < n; ++i) q.add_term(unknowns[i].first, unknowns[i].second, x[i]);
  return q;
}

}  // namespace detail

/// The unique harmonic polynomial h with h = f on S^{2d-1}.
///
/// Each round writes f = h0 + |z|^2 q with h0 harmonic (solving
/// Laplacian(|z|^2 q) = Laplacian(f) bidegree by bidegree); on the sphere
/// |z|^2 q = q, so the extension is h0 + extension(q). deg q <= deg f - 2,
/// hence at most deg(f)/2 + 1 rounds. Everything is exact.
inline DirichletSolution harmonic_extension(const ExactSymbol& f) {
  require(f.is_hermitian(), "harmonic extension requires a real-valued symbol");
  const std::size_t d = f.dim();
  ExactSymbol rho = ExactSymbol::norm_squared(d);
  ExactSymbol remaining = f, extension(d);
  int rounds = 0;
  while (!remaining.is_zero()) {
    ++rounds;
    ExactSymbol lap = remaining.laplacian();
    if (lap.is_zero()) {
      extension += remaining;
      break;
    }
    ExactSymbol q(d);
    for (const auto& [bd, part] : detail::split_bidegree(lap))
      q += detail::solve_shifted_laplacian(part, bd.first, bd.second);
    ExactSymbol h0 = remaining - rho * q;
    ensure(h0.is_harmonic(), "harmonic solver produced a non-harmonic part");
    extension += h0;
    remaining = q;
  }
  ensure(extension.is_harmonic(), "harmonic extension is not harmonic");
  ExactSymbol diff = f - extension;
  return {f, extension, diff.degree(), rounds};
}

inline DirichletSolution harmonic_extension(const Symbol& f) {
  require(f.is_hermitian(1e-12 * std::max(1.0, f.coefficient_abs_sum())),
          "harmonic extension requires a real-valued symbol");
  ExactSymbol e = to_exact(f);
  // Hermitian up to rounding: symmetrise so the exact solver sees real data.
  ExactSymbol sym = (e + e.conjugate()).scaled(GaussRational(Rational(1, 2)));
  return harmonic_extension(sym);
}

/// max |f - f~| over the sample points, zero up to rounding when the
/// extension matches the boundary data.
inline double boundary_residual_max(const DirichletSolution& s, const SphereSampler& sampler) {
  Symbol diff = to_float(s.boundary - s.extension);
  double worst = 0.0;
  for (const auto& x : sampler.points()) worst = std::max(worst, std::abs(diff.evaluate(x)));
  return worst;
}

/// Normal form of g modulo the ideal generated by |z|^2 - 1: every term
/// divisible by z_1 zbar_1 is rewritten with z_1 zbar_1 = 1 - sum_{i>1} z_i zbar_i.
/// g vanishes on S^{2d-1} iff the normal form is zero.
inline ExactSymbol reduce_modulo_sphere(const ExactSymbol& g) {
  const std::size_t d = g.dim();
  ExactSymbol current = g;
  while (true) {
    ExactSymbol next(d);
    bool changed = false;
    for (const auto& [key, c] : current.terms()) {
      if (key.first[0] == 0 || key.second[0] == 0) {
        next.add_term(key.first, key.second, c);
        continue;
      }
      changed = true;
      MultiIndex a = key.first, b = key.second;
      --a[0];
      --b[0];
      next.add_term(a, b, c);
      for (std::size_t i = 1; i < d; ++i)
        next.add_term(a + MultiIndex::unit(d, i), b + MultiIndex::unit(d, i), -c);
    }
    current = std::move(next);
    if (!changed) return current;
  }
}

inline bool vanishes_on_sphere(const ExactSymbol& g) { return reduce_modulo_sphere(g).is_zero(); }

/// sigma(f) = T_{f~}: the Toeplitz operator of the harmonic extension.
template <class C>
ToeplitzMatrix splitting_sigma(const Polynomial<C>& f, const BergmanWeight& w, int cutoff) {
  return ToeplitzMatrix(w, harmonic_extension(f).extension, cutoff);
}

}  // namespace oddsphere
