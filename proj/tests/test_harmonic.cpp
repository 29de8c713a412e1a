#include <gtest/gtest.h>

#include <random>

#include "oddsphere/harmonic.hpp"
#include "oddsphere/io.hpp"
#include "random_symbols.hpp"

using namespace oddsphere;
using testing_support::frac;

namespace {

ExactSymbol sym(const char* text, std::size_t d) { return parse_symbol(text, d); }

}  // namespace

TEST(Harmonic, NormSquaredExtendsToOne) {
  for (std::size_t d = 1; d <= 3; ++d) {
    auto s = harmonic_extension(ExactSymbol::norm_squared(d));
    EXPECT_EQ(s.extension, ExactSymbol::constant(d, GaussRational(1)));
  }
}

TEST(Harmonic, HarmonicInputUnchanged) {
  auto f = sym("z1^3*z2 + zb1^3*zb2", 2);
  EXPECT_EQ(harmonic_extension(f).extension, f);
  auto g = sym("z1*zb2 + z2*zb1", 2);
  auto s = harmonic_extension(g);
  EXPECT_EQ(s.extension, g);
  EXPECT_EQ(s.residual_degree, -1);
}

TEST(Harmonic, FirstModulusOnThreeSphere) {
  auto s = harmonic_extension(sym("z1*zb1", 2));
  EXPECT_EQ(s.extension, sym("1/2 + (1/2)*z1*zb1 - (1/2)*z2*zb2", 2));
  EXPECT_TRUE(s.extension.is_harmonic());
  EXPECT_LT(boundary_residual_max(s, SphereSampler(2, 100, 3)), 1e-12);
}

TEST(Harmonic, HigherDegreeOnCircle) {
  // |z|^4 z = z on the circle
  auto s = harmonic_extension(sym("z1^3*zb1^2 + z1^2*zb1^3", 1));
  EXPECT_EQ(s.extension, sym("z1 + zb1", 1));
}

TEST(Harmonic, RandomSymbolsExactlyHarmonicAndAgreeOnSphere) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 60; ++t) {
    std::size_t d = 1 + t % 3;
    ExactSymbol f = testing_support::random_real_symbol(d, 6, rng);
    auto s = harmonic_extension(f);
    EXPECT_TRUE(s.extension.laplacian().is_zero());
    EXPECT_TRUE(vanishes_on_sphere(f - s.extension));
    EXPECT_TRUE(s.extension.is_hermitian());
    EXPECT_LE(boundary_residual_max(s, SphereSampler(d, 1000, t)), 1e-10);
    // idempotent
    EXPECT_EQ(harmonic_extension(s.extension).extension, s.extension);
  }
}

TEST(Harmonic, LinearOverRationals) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    std::size_t d = 1 + t % 3;
    ExactSymbol f = testing_support::random_real_symbol(d, 5, rng), g = testing_support::random_real_symbol(d, 5, rng);
    GaussRational c(frac(-3, 7));
    EXPECT_EQ(harmonic_extension(f.scaled(c) + g).extension,
              harmonic_extension(f).extension.scaled(c) + harmonic_extension(g).extension);
  }
}

TEST(Harmonic, MaximumPrinciple) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 10; ++t) {
    std::size_t d = 1 + t % 3;
    ExactSymbol f = testing_support::random_real_symbol(d, 4, rng);
    Symbol ff = to_float(f), h = to_float(harmonic_extension(f).extension);
    SphereSampler sphere(d, 3000, t);
    double lo = 1e300, hi = -1e300;
    for (const auto& x : sphere.points()) {
      double v = ff.evaluate(x).real();
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // sampled extremes under-estimate the sphere range; allow the mesh error
    double slack = ff.gradient_bound() * sphere.mesh();
    for (int i = 0; i < 1000; ++i) {
      Point z(d);
      double r2 = 0;
      for (auto& c : z) {
        c = {u(rng), u(rng)};
        r2 += std::norm(c);
      }
      if (r2 >= 1) continue;
      double v = h.evaluate(z).real();
      EXPECT_GE(v, lo - slack);
      EXPECT_LE(v, hi + slack);
    }
  }
}

TEST(Harmonic, SphereIdealReduction) {
  EXPECT_TRUE(vanishes_on_sphere(ExactSymbol::norm_squared(3) - ExactSymbol::constant(3, GaussRational(1))));
  EXPECT_FALSE(vanishes_on_sphere(sym("z1*zb1", 2)));
  auto ideal = sym("z1*zb1 + z2*zb2 - 1", 2);
  EXPECT_TRUE(vanishes_on_sphere(sym("z2*zb1^2 + 3*zb2", 2) * ideal));
  EXPECT_FALSE(vanishes_on_sphere(sym("z2*zb1^2", 2) * ideal + sym("z1", 2)));
}

TEST(Harmonic, RejectsComplexSymbols) {
  EXPECT_THROW(harmonic_extension(sym("z1", 1)), InputError);
  EXPECT_THROW(harmonic_extension(to_float(sym("i", 1))), InputError);
}

TEST(Harmonic, FloatInputWithRoundoffIsSymmetrised) {
  Symbol f = to_float(sym("z1*zb1 + (1/3)*z1 + (1/3)*zb1", 1));
  auto s = harmonic_extension(f);
  EXPECT_TRUE(s.extension.is_harmonic());
}

TEST(Sigma, ExamplesFromClosedForms) {
  BergmanWeight w1(1, 1.0), w2(2, 2.0);
  auto id = splitting_sigma(sym("1", 1), w1, 4);
  EXPECT_LT((id.entries() - Eigen::MatrixXcd::Identity(5, 5)).norm(), 1e-15);
  auto t = splitting_sigma(sym("z1 + zb1", 1), w1, 3);
  for (int k = 0; k < 3; ++k) {
    double want = std::sqrt((k + 1.0) / (k + 2.0));
    EXPECT_NEAR(std::abs(t.entries()(k + 1, k) - want), 0, 1e-15);
    EXPECT_NEAR(std::abs(t.entries()(k, k + 1) - want), 0, 1e-15);
  }
  auto s2 = splitting_sigma(sym("z1*zb1", 2), w2, 3);
  EXPECT_NEAR(std::abs(s2.entries()(0, 0) - 0.5), 0, 1e-15);
  EXPECT_TRUE(is_hermitian(s2.entries(), 1e-15));
}

TEST(Sigma, LinearAndPositive) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    std::size_t d = 1 + t % 2;
    BergmanWeight w(d, static_cast<double>(d) + 0.5 * t);
    ExactSymbol f = testing_support::random_real_symbol(d, 4, rng), g = testing_support::random_real_symbol(d, 4, rng);
    auto sum = splitting_sigma(f + g, w, 6).entries();
    auto parts = (splitting_sigma(f, w, 6).entries() + splitting_sigma(g, w, 6).entries()).eval();
    EXPECT_LT((sum - parts).cwiseAbs().maxCoeff(), 1e-12 * (1 + sum.cwiseAbs().maxCoeff()));

    ExactSymbol p = testing_support::random_nonnegative_symbol(d, 3, rng);
    auto m = splitting_sigma(p, w, 6).entries();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * (1 + m.cwiseAbs().maxCoeff()));
  }
}
