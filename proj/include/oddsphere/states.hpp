#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <variant>

#include "oddsphere/error.hpp"
#include "oddsphere/harmonic.hpp"
#include "oddsphere/lip.hpp"
#include "oddsphere/sphere.hpp"

namespace oddsphere {

/// Point evaluation f -> f(x) on C(S^{2d-1}).
struct PointState {
  Point x;
};

/// T -> trace(rho T) on the truncated Toeplitz algebra.
struct DensityState {
  Eigen::MatrixXcd rho;
};

/// nu o sigma for a density state nu: f -> trace(rho sigma(f)), a state of C(S^{2d-1}).
struct SigmaPullbackState {
  Eigen::MatrixXcd rho;
};

/// delta_x o pi: T -> pi(T)(x), a state of the Toeplitz algebra.
struct PiPullbackState {
  Point x;
};

using State = std::variant<PointState, DensityState, SigmaPullbackState, PiPullbackState>;

enum class Side { toeplitz, sphere };

inline Side side_of(const State& s) {
  return std::holds_alternative<PointState>(s) || std::holds_alternative<SigmaPullbackState>(s)
             ? Side::sphere
             : Side::toeplitz;
}

inline void validate_density(const Eigen::MatrixXcd& rho, double tol = 1e-12) {
  require(rho.rows() == rho.cols() && rho.rows() > 0, "density matrix must be square and nonempty");
  require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= tol, "density matrix must be Hermitian");
  require(std::abs(rho.trace() - std::complex<double>(1.0)) <= tol, "density matrix must have trace 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -tol, "density matrix must be positive semidefinite");
}

inline void validate_point(const Point& x, double tol = 1e-12) {
  require(std::abs(euclidean_norm(x) - 1.0) <= tol, "point state must lie on the unit sphere");
}

inline void validate_state(const State& s, std::size_t d, std::size_t truncation) {
  std::visit(
      [&](const auto& st) {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, PointState> || std::is_same_v<T, PiPullbackState>) {
          require(st.x.size() == d, "point state dimension mismatch");
          validate_point(st.x);
        } else {
          require(static_cast<std::size_t>(st.rho.rows()) == truncation,
                  "density matrix size does not match the truncation");
          validate_density(st.rho);
        }
      },
      s);
}

inline PointState point_state(Point x) {
  validate_point(x);
  return {std::move(x)};
}

/// e_j e_j^*, j 1-based.
inline DensityState vector_state(std::size_t j, std::size_t truncation) {
  require(j >= 1 && j <= truncation, "vector state index outside the truncation");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(truncation),
                                                static_cast<Eigen::Index>(truncation));
  rho(static_cast<Eigen::Index>(j - 1), static_cast<Eigen::Index>(j - 1)) = 1.0;
  return {rho};
}

/// v v^* / |v|^2 with v a seeded complex Gaussian vector.
inline DensityState random_rank_one_state(std::size_t truncation, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(truncation));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {gauss(rng), gauss(rng)};
  v.normalize();
  Eigen::MatrixXcd rho = v * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return {rho};
}

inline double trace_product(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& a) {
  require(rho.rows() == a.rows() && rho.cols() == a.cols(), "state and operator sizes differ");
  return (rho.transpose().cwiseProduct(a)).sum().real();
}

/// Value of a state on the pair (T, f) of Lip(T_alpha) (+) C(S^{2d-1}).
inline double evaluate_state(const State& s, const LipElement& t, const ExactSymbol& f) {
  return std::visit(
      [&](const auto& st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, PointState>) {
          validate_point(st.x);
          return f.evaluate(st.x).real();
        } else if constexpr (std::is_same_v<T, PiPullbackState>) {
          validate_point(st.x);
          return pi_of(t).evaluate(st.x).real();
        } else if constexpr (std::is_same_v<T, DensityState>) {
          validate_density(st.rho);
          return trace_product(st.rho, t.matrix());
        } else {
          validate_density(st.rho);
          return trace_product(st.rho, splitting_sigma(f, t.weight(), t.cutoff()).entries());
        }
      },
      s);
}

}  // namespace oddsphere
