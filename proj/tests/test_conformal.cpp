#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "conflab/conformal.hpp"

using namespace conflab;

namespace {

std::vector<double> random_unit(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> x(n + 1);
  double r = 0.0;
  for (auto& v : x) {
    v = g(rng);
    r += v * v;
  }
  for (auto& v : x) v /= std::sqrt(r);
  return x;
}

}  // namespace

TEST(MobiusMap, BoostsAreLorentz) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const auto a = MobiusMap::boost(n, random_unit(n, rng), 0.1 * trial);
    EXPECT_LT(a.lorentz_error(), 1e-13);
    EXPECT_LT((a * a.inverse()).lorentz_error(), 1e-13);
    const auto id = a * a.inverse();
    for (int i = 0; i < n + 2; ++i) {
      for (int j = 0; j < n + 2; ++j) EXPECT_NEAR(id.entry(i, j), i == j ? 1.0 : 0.0, 1e-12);
    }
  }
}

TEST(MobiusMap, MapsSphereToSphere) {
  std::mt19937_64 rng(62);
  const auto a = MobiusMap::boost(3, {1, 2, 0, -1}, 0.7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_unit(3, rng);
    std::vector<double> y(4);
    const double y0 = a.apply(x.data(), y.data());
    EXPECT_GT(y0, 0.0);
    double r = 0.0;
    for (double v : y) r += v * v;
    EXPECT_NEAR(r, 1.0, 1e-14);
  }
}

TEST(ConformalProperty, ActionComposes) {
  std::mt19937_64 rng(63);
  const Frac w(-1, 2);
  const SphereFunction f = as_function(SpherePoly::constant(3, 1) + SpherePoly::coordinate(3, 0).scaled(ratio(1, 2)));
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = MobiusMap::boost(3, random_unit(3, rng), 0.4);
    const auto b = MobiusMap::boost(3, random_unit(3, rng), 0.3);
    const auto lhs = act(act(f, a, w), b, w);
    const auto rhs = act(f, a * b, w);
    for (int p = 0; p < 5; ++p) {
      const auto x = random_unit(3, rng);
      EXPECT_NEAR(lhs(x.data()), rhs(x.data()), 1e-13);
    }
  }
}

TEST(ConformalProperty, CriticalNormIsPreserved) {
  const SphereGrid grid = gauss_grid(3, 48, 96);
  const Frac w(-1, 2);
  std::mt19937_64 rng(64);
  const double expected = std::pow(2 * M_PI * M_PI, 1.0 / 6);
  for (int trial = 0; trial < 4; ++trial) {
    const auto v = act([](const double*) { return 1.0; }, MobiusMap::boost(3, random_unit(3, rng), 0.5), w);
    std::vector<double> vals(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) vals[p] = v(grid.point(p));
    EXPECT_NEAR(grid_norm(grid, vals, 6.0), expected, 1e-10);
  }
}

TEST(Balance, CenterOfMassOfConstantIsZero) {
  const auto c = center_of_mass([](const double*) { return 1.0; }, 6.0, gauss_grid(3, 16, 32));
  for (double v : c) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(Balance, RecoversBoostedConstant) {
  const SphereGrid grid = gauss_grid(3, 32, 64);
  const Frac w(-1, 2);
  const auto bubble = act([](const double*) { return 1.0; }, MobiusMap::boost_axis(3, 1, 0.8), w);
  const BalanceResult r = balance(bubble, w, grid);
  EXPECT_TRUE(r.converged);
  const auto v = act(bubble, r.phi, w);
  for (std::size_t p = 0; p < grid.size(); p += 97) EXPECT_NEAR(v(grid.point(p)), 1.0, 1e-8);
}

TEST(Balance, AffinePerturbation) {
  const SphereGrid grid = gauss_grid(3, 48, 96);
  const Frac w(-1, 2);
  const auto u = as_function(SpherePoly::constant(3, 1) + SpherePoly::coordinate(3, 0).scaled(ratio(1, 2)));
  const BalanceResult r = balance(u, w, grid);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.residual_norm, 1e-10);
  EXPECT_LT(r.iterations, 50);
  EXPECT_THROW(balance([](const double*) { return 0.0; }, w, grid), std::invalid_argument);
}

TEST(Spectrum, ConformalLaplacian) {
  const auto eig = rank2_spectrum(*gjms(3, 1), 2);
  ASSERT_EQ(eig.size(), 3u);
  EXPECT_EQ(eig[0], ratio(3, 4));
  EXPECT_EQ(eig[1], ratio(15, 4));
  EXPECT_EQ(eig[2], ratio(35, 4));
  EXPECT_THROW(rank2_spectrum(*ovsienko_redou(5, 1), 2), std::invalid_argument);
}

TEST(Invariance, FunctionalUnderBoost) {
  const auto h = gjms(3, 1);
  const SpherePoly u = SpherePoly::from_poly(3, Poly::constant(4, 1) + Poly::variable(4, 0).scaled(ratio(1, 5)) +
                                                   (Poly::variable(4, 1) * Poly::variable(4, 2) * Poly::variable(4, 3))
                                                       .scaled(ratio(1, 3)));
  const InvarianceCheck r =
      functional_invariance_check(*h, u, MobiusMap::boost(3, {1, 1, 0, 0.5}, 0.5), gauss_grid(3, 48, 96), 12);
  EXPECT_LT(r.relative_deviation, 1e-6);
  EXPECT_LT(r.truncation_residual, 1e-8);
  EXPECT_GT(r.f_original, 0.0);
}
