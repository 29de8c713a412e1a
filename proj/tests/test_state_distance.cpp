#include <gtest/gtest.h>

#include <random>

#include "oddsphere/state_distance.hpp"

using namespace oddsphere;

namespace {

StateDistanceSolver make_solver(std::size_t d, double alpha, int cutoff, std::size_t pairs = 512,
                                int family = 2, std::uint64_t seed = 0) {
  StateDistanceOptions opts;
  opts.family_degree = family;
  opts.pairs = pairs;
  opts.seed = seed;
  auto cfg = BridgeConfig::make(d, alpha, samples_for_pairs(pairs), seed);
  return StateDistanceSolver(BergmanWeight(d, alpha), cutoff, cfg, opts);
}

Point on_circle(double t) { return {std::polar(1.0, t)}; }

// Oracle: Kantorovich dual of the grid LP between two point masses is the
// shortest path in the complete graph with chord weights (Floyd-Warshall).
double grid_shortest_path(int n, int from, int to) {
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dist[i][j] = std::abs(std::polar(1.0, 2 * M_PI * i / n) - std::polar(1.0, 2 * M_PI * j / n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
  return dist[from][to];
}

}  // namespace

TEST(HarmonicBasis, DimensionsAndHarmonicity) {
  // Harmonic polynomials of degree <= F restricted to S^{2d-1}: on the circle 2F + 1.
  for (int F = 0; F <= 4; ++F) EXPECT_EQ(harmonic_basis(1, F).size(), static_cast<std::size_t>(2 * F + 1));
  // d = 2: sum over bidegrees (p, q), p + q <= F of (p+1)(q+1) - pq.
  for (int F = 0; F <= 3; ++F) {
    std::size_t want = 0;
    for (int p = 0; p <= F; ++p)
      for (int q = 0; p + q <= F; ++q) want += (p + 1) * (q + 1) - p * q;
    EXPECT_EQ(harmonic_basis(2, F).size(), want) << F;
  }
  auto basis = harmonic_basis(2, 3);
  EXPECT_EQ(basis.front(), ExactSymbol::constant(2, GaussRational(1)));
  for (const auto& h : basis) {
    EXPECT_TRUE(h.is_harmonic());
    EXPECT_TRUE(h.is_hermitian());
  }
}

TEST(StateDistance, PointMassesMatchChord) {
  auto solver = make_solver(1, 1.0, 6);
  const int n = 64;
  for (auto [i, j] : {std::pair{0, 32}, std::pair{0, 16}, std::pair{5, 13}, std::pair{3, 50}}) {
    double oracle = grid_shortest_path(n, i, j);
    auto r = solver.distance(PointState{on_circle(2 * M_PI * i / n)}, PointState{on_circle(2 * M_PI * j / n)});
    EXPECT_NEAR(r.value, oracle, 0.02 * oracle) << i << " " << j;
    EXPECT_LE(r.max_violation, 1e-8);
  }
}

TEST(StateDistance, SameStateIsZero) {
  auto solver = make_solver(1, 1.0, 6);
  EXPECT_NEAR(solver.distance(PointState{on_circle(0.3)}, PointState{on_circle(0.3)}).value, 0.0, 1e-8);
  auto v = vector_state(3, solver.truncation());
  EXPECT_NEAR(solver.distance(v, v).value, 0.0, 1e-8);
}

TEST(StateDistance, Symmetric) {
  auto solver = make_solver(1, 2.0, 6, 200);
  std::mt19937_64 rng(3);
  std::vector<State> states{PointState{on_circle(1.0)}, vector_state(2, solver.truncation()),
                            random_rank_one_state(solver.truncation(), rng), PiPullbackState{on_circle(-2.0)},
                            SigmaPullbackState{vector_state(1, solver.truncation()).rho}};
  for (std::size_t a = 0; a < states.size(); ++a)
    for (std::size_t b = a + 1; b < states.size(); ++b)
      EXPECT_NEAR(solver.distance(states[a], states[b]).value, solver.distance(states[b], states[a]).value, 1e-8);
}

TEST(StateDistance, WitnessPairingWithinTwoGamma) {
  for (double alpha : {1.0, 3.0}) {
    auto solver = make_solver(1, alpha, 8, 300);
    std::mt19937_64 rng(1);
    for (int t = 0; t < 4; ++t) {
      auto rho = t == 0 ? vector_state(1, solver.truncation()) : random_rank_one_state(solver.truncation(), rng);
      auto r = solver.distance(rho, SigmaPullbackState{rho.rho});
      double two_gamma = 2 * solver.bridge().gamma.hi;
      EXPECT_LE(r.value, two_gamma + 0.05);
      // proof chain: |nu(a) - nu o sigma(a)| <= ||K|| + ||g - f||_inf, each <= gamma
      const auto& o = r.optimizer;
      double k_norm = spectral_norm(o.k.dense(solver.truncation()));
      EXPECT_LE(k_norm, solver.bridge().gamma.hi * (1 + 1e-9));
      EXPECT_LE(lip_compact_norm(o.k), o.u * (1 + 1e-9) + 1e-12);
      EXPECT_LE(o.u + o.v, 1 + 1e-9);
    }
  }
}

TEST(StateDistance, PiPullbackOfPointIsNearThePoint) {
  // The gap constraint is imposed at the evaluation point itself.
  auto solver = make_solver(1, 2.0, 6, 200);
  auto r = solver.distance(PiPullbackState{on_circle(0.7)}, PointState{on_circle(0.7)});
  EXPECT_LE(r.value, solver.bridge().gamma.hi * (1 + 1e-9));
}

TEST(StateDistance, RejectsInvalidStates) {
  auto solver = make_solver(1, 1.0, 4, 50);
  EXPECT_THROW(solver.distance(vector_state(1, 3), PointState{on_circle(0)}), InputError);
  EXPECT_THROW(solver.distance(PointState{{{0.5, 0}}}, PointState{on_circle(0)}), InputError);
}

TEST(Hausdorff, TrendAndBound) {
  double prev = 1e9;
  for (double alpha : {1.0, 4.0}) {
    auto solver = make_solver(1, alpha, 8, 200);
    auto est = hausdorff_estimate(solver, default_density_net(solver.truncation(), 3, 0, 0), random_point_net(1, 2, 5));
    EXPECT_LE(est.value, est.upper_bound_2gamma.hi + 0.05);
    EXPECT_LE(est.value, est.witness_max + 1e-12);
    EXPECT_LT(est.value, prev);
    prev = est.value;
  }
}

TEST(Hausdorff, LargeAlphaIsTiny) {
  auto solver = make_solver(1, 20.0, 6, 200);
  auto est = hausdorff_estimate(solver, default_density_net(solver.truncation(), 2, 1, 3), random_point_net(1, 2, 4));
  EXPECT_LT(est.value, 0.01);
  EXPECT_LT(est.upper_bound_2gamma.hi, 1e-6);
}

TEST(Hausdorff, WellConditionedAcrossAlpha) {
  // At alpha = 8 the unscaled LP once drove the simplex onto a singular basis.
  for (double alpha : {6.0, 7.0, 8.0}) {
    auto solver = make_solver(1, alpha, 8, 200);
    HausdorffEstimate est;
    ASSERT_NO_THROW(est = hausdorff_estimate(solver, default_density_net(solver.truncation(), 5, 5, 0),
                                             random_point_net(1, 3, 0)));
    EXPECT_TRUE(std::isfinite(est.value));
    EXPECT_LE(est.value, est.upper_bound_2gamma.hi + 0.05);
  }
}
