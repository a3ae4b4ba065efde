#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "conflab/operators.hpp"
#include "conflab/quadrature.hpp"
#include "conflab/sphere.hpp"

using namespace conflab;

TEST(SpherePoly, DecomposeCoordinateSquare) {
  const int n = 3;
  const Poly x0 = Poly::variable(n + 1, 0);
  const SpherePoly u = SpherePoly::from_poly(n, x0 * x0);
  EXPECT_EQ(u.component(0), Poly::constant(n + 1, ratio(1, 4)));
  EXPECT_EQ(u.component(2), x0 * x0 - Poly::norm_squared(n + 1).scaled(ratio(1, 4)));
  EXPECT_EQ(u.to_poly().homogeneous_part(0), Poly::constant(n + 1, ratio(1, 4)));
}

TEST(SpherePoly, NormSquaredRestrictsToOne) {
  for (int n = 2; n <= 6; ++n) {
    EXPECT_EQ(SpherePoly::from_poly(n, Poly::norm_squared(n + 1)), SpherePoly::constant(n, 1));
  }
}

TEST(SpherePoly, ComponentsAreHarmonic) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const SpherePoly u = random_sphere_poly(n, 4, rng);
    for (const auto& [d, h] : u.components()) {
      EXPECT_TRUE(h.laplacian().is_zero());
      EXPECT_TRUE(h.is_homogeneous());
      EXPECT_EQ(h.max_degree(), d);
    }
  }
}

TEST(SphereProperty, ExtendThenRestrictIsIdentity) {
  std::mt19937_64 rng(22);
  const Frac weights[] = {Frac(-1, 2), Frac(-1, 3), Frac(2), Frac(-3, 4)};
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 3;
    const SpherePoly u = random_sphere_poly(n, 3, rng);
    const Frac w = weights[trial % 4];
    const AmbientElement e = extend(u, w);
    EXPECT_EQ(e.weight().value_or(w), w);
    EXPECT_EQ(restrict_to_sphere(e), u);
  }
}

TEST(SphereProperty, MultiplicationMatchesPolynomials) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3;
    const SpherePoly u = random_sphere_poly(n, 2, rng);
    const SpherePoly v = random_sphere_poly(n, 2, rng);
    EXPECT_EQ(u * v, SpherePoly::from_poly(n, u.to_poly() * v.to_poly()));
  }
}

TEST(Integrate, MonomialMeans) {
  for (int n = 2; n <= 7; ++n) {
    Multi two{};
    two[0] = 2;
    Multi four{};
    four[0] = 4;
    Multi mixed{};
    mixed[0] = 2;
    mixed[1] = 2;
    EXPECT_EQ(monomial_mean(n, two), ratio(1, n + 1));
    EXPECT_EQ(monomial_mean(n, four), ratio(3, (n + 1) * (n + 3)));
    EXPECT_EQ(monomial_mean(n, mixed), ratio(1, (n + 1) * (n + 3)));
    EXPECT_EQ(monomial_mean(n, unit_multi(0)), Rational(0));
  }
}

TEST(Integrate, VolumeAndConstant) {
  EXPECT_NEAR(sphere_volume(3), 2.0 * M_PI * M_PI, 1e-14);
  EXPECT_NEAR(sphere_volume(5), M_PI * M_PI * M_PI, 1e-13);
  EXPECT_NEAR(sphere_volume(2), 4.0 * M_PI, 1e-14);
  const SphereIntegral one = integrate(SpherePoly::constant(4, 3));
  EXPECT_EQ(one.mean, Rational(3));
}

TEST(Integrate, HarmonicDecompositionAgreesWithMoments) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const SpherePoly u = random_sphere_poly(n, 4, rng);
    EXPECT_EQ(integrate(u).mean, integrate_poly(n, u.to_poly()).mean);
  }
}

TEST(Laplacian, CoordinatesAreEigenfunctions) {
  for (int n = 2; n <= 6; ++n) {
    const SpherePoly x = SpherePoly::coordinate(n, 0);
    EXPECT_EQ(laplacian_sphere(x), x.scaled(n));
    const SpherePoly xy = SpherePoly::coordinate(n, 0) * SpherePoly::coordinate(n, 1);
    EXPECT_EQ(laplacian_sphere(xy), xy.scaled(2 * (n + 1)));
  }
}

TEST(SphereProperty, ProductRuleForLaplacian) {
  // Delta(uv) = u Delta v + v Delta u - 2 <grad u, grad v> with Delta >= 0.
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const SpherePoly u = random_sphere_poly(n, 2, rng);
    const SpherePoly v = random_sphere_poly(n, 2, rng);
    EXPECT_EQ(laplacian_sphere(u * v),
              u * laplacian_sphere(v) + v * laplacian_sphere(u) - gradient_pairing(u, v).scaled(2));
  }
}

TEST(SphereProperty, LaplacianIsSymmetricAndNonnegative) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    const SpherePoly u = random_sphere_poly(n, 3, rng);
    const SpherePoly v = random_sphere_poly(n, 3, rng);
    EXPECT_EQ(inner_product(u, laplacian_sphere(v)).mean, inner_product(laplacian_sphere(u), v).mean);
    EXPECT_GE(inner_product(u, laplacian_sphere(u)).mean, 0);
    EXPECT_EQ(inner_product(u, laplacian_sphere(u)).mean, integrate(gradient_pairing(u, u)).mean);
  }
}

TEST(RoundSphere, CurvatureData) {
  const auto g = RoundSphereData::make(5);
  EXPECT_EQ(g.J, ratio(5, 2));
  EXPECT_EQ(g.sigma2, ratio(5, 2));
  EXPECT_EQ(g.t1_multiple, Rational(2));
}

TEST(Quadrature, GaussGridIsExactOnLowDegree) {
  for (int n = 2; n <= 5; ++n) {
    const SphereGrid grid = gauss_grid(n, 6, 12);
    std::mt19937_64 rng(27 + n);
    for (int trial = 0; trial < 5; ++trial) {
      const SpherePoly u = random_sphere_poly(n, 5, rng);
      const double exact = integrate(u).value();
      EXPECT_NEAR(grid_integrate(grid, evaluate_on_grid(u, grid)), exact, 1e-11 * (1 + std::abs(exact)));
    }
  }
}

TEST(Quadrature, NormOfConstant) {
  const SphereGrid grid = make_grid(3, {});
  EXPECT_NEAR(quadrature_norm(SpherePoly::constant(3, 1), 6.0, grid), std::pow(2 * M_PI * M_PI, 1.0 / 6), 1e-13);
}

TEST(Quadrature, QmcApproximatesIntegral) {
  const SphereGrid grid = qmc_grid(4, 100000);
  const SpherePoly u = SpherePoly::constant(4, 1) + SpherePoly::coordinate(4, 0) * SpherePoly::coordinate(4, 0);
  const std::vector<double> values = evaluate_on_grid(u, grid);
  const double exact = integrate(u).value();
  EXPECT_NEAR(grid_integrate(grid, values), exact, 1e-2 * exact);
  EXPECT_TRUE(grid.monte_carlo);
}

TEST(Quadrature, PairwiseSumIsReproducible) {
  std::vector<double> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
  EXPECT_EQ(pairwise_sum(v), pairwise_sum(v));
  // H_1001.
  EXPECT_NEAR(pairwise_sum(v), 7.4864698615493452, 1e-13);
}

TEST(Quadrature, GaussAboveFiveRejected) { EXPECT_THROW(make_grid(6, {QuadScheme::Gauss}), std::invalid_argument); }
