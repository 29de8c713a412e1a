#pragma once

#include <algorithm>

#include "oddsphere/error.hpp"
#include "oddsphere/interval.hpp"
#include "oddsphere/lip.hpp"
#include "oddsphere/sphere.hpp"
#include "oddsphere/zeta.hpp"

namespace oddsphere {

/// Anchor data for the bridge N(T, f) = gamma_{n0}^{-1} ||pi(T) - f||_inf.
struct BridgeConfig {
  double n0;
  Interval gamma;
  SphereSampler sampler;

  static BridgeConfig make(std::size_t d, double n0, std::size_t samples, std::uint64_t seed,
                           double tol = 1e-12) {
    require(n0 >= static_cast<double>(d), "bridge anchor n0 must satisfy n0 >= d");
    return {n0, gamma_interval(n0, tol), SphereSampler(d, samples, seed)};
  }
};

inline Interval bridge_N(const LipElement& t, const ExactSymbol& f, const BridgeConfig& cfg) {
  require(f.is_hermitian(), "bridge needs a real-valued boundary function");
  Interval sup = sup_norm_on_sphere(pi_of(t) - f, cfg.sampler);
  return {sup.lo / cfg.gamma.hi, sup.hi / cfg.gamma.lo};
}

/// max{L(T), L(f), N(T, f)} on certified upper values.
inline double combined_lip(const LipElement& t, const ExactSymbol& f, const BridgeConfig& cfg) {
  double ln = lip_norm(t, cfg.sampler).hi;
  double lf = lipschitz_constant(f, cfg.sampler).hi;
  double n = bridge_N(t, f, cfg).hi;
  return std::max({ln, lf, n});
}

}  // namespace oddsphere
