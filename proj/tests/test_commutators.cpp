#include <gtest/gtest.h>

#include <random>

#include "conflab/commutators.hpp"

using namespace conflab;

TEST(Commutator, AmbientMatchesDirect) {
  const auto g = gjms(5, 2);
  const SpherePoly u = SpherePoly::coordinate(5, 0) * SpherePoly::coordinate(5, 1) + SpherePoly::coordinate(5, 2);
  EXPECT_EQ(ambient_commutator(*g, u, {}), direct_commutator(*g, u, {}));
  std::mt19937_64 rng(51);
  const auto o = ovsienko_redou(5, 1);
  const SpherePoly v = random_sphere_poly(5, 2, rng);
  EXPECT_EQ(ambient_commutator(*o, u, {v}), direct_commutator(*o, u, {v}));
}

TEST(Commutator, ConstantInputGivesLowerOrderConstant) {
  // k(n+2k-2) L_{2k-2}(1): 2*7*L_2(1) = 14 * 15/4 at (5, 2); n = 4 at (4, 1).
  EXPECT_EQ(ambient_commutator(*gjms(5, 2), SpherePoly::constant(5, 1), {}), SpherePoly::constant(5, ratio(105, 2)));
  EXPECT_EQ(ambient_commutator(*gjms(4, 1), SpherePoly::constant(4, 1), {}), SpherePoly::constant(4, 4));
}

TEST(Commutator, GjmsIdentity) {
  for (int n : {3, 5, 8}) {
    for (int k = 1; k <= 3 && 2 * k < n; ++k) {
      const auto rep = check_gjms_commutator(n, k, 4);
      EXPECT_TRUE(rep.exact_equal) << "n=" << n << " k=" << k;
      ASSERT_TRUE(rep.stated_constant.has_value());
      EXPECT_EQ(*rep.stated_constant, Rational(k * (n + 2 * k - 2)));
    }
  }
}

TEST(Commutator, CaseYanIdentity) {
  for (int k = 1; k <= 3; ++k) {
    EXPECT_TRUE(check_case_yan_commutator(5, k, Frac(-1, 3), AmbientElement::t_power(5, Frac(-2)), 2).exact_equal);
    EXPECT_TRUE(check_case_yan_commutator(5, k, Frac(-1, 3), AmbientElement::coordinate(5, 0), 2).exact_equal);
    EXPECT_TRUE(check_case_yan_commutator(5, k, Frac(-1, 3), AmbientElement::constant(5, 1), 2).exact_equal);
  }
}

TEST(Commutator, OvsienkoRedouIdentity) {
  for (const auto& [n, k] : {std::pair{3, 1}, std::pair{5, 1}, std::pair{5, 2}, std::pair{7, 2}}) {
    const auto rep = check_or_commutator(n, k, 2);
    EXPECT_TRUE(rep.exact_equal) << "n=" << n << " k=" << k;
    ASSERT_TRUE(rep.stated_constant.has_value());
    EXPECT_EQ(*rep.stated_constant, ratio(k * (n + 2 * k - 2) * (n + k - 3), 3));
  }
}

TEST(Commutator, Sigma2Identity) {
  for (int n = 5; n <= 6; ++n) {
    const auto rep = check_sigma2_commutator(n, 1);
    EXPECT_TRUE(rep.exact_equal) << "n=" << n;
    ASSERT_TRUE(rep.stated_constant.has_value());
    EXPECT_EQ(*rep.stated_constant, ratio(n - 1, 24));
  }
}

TEST(Commutator, Sigma2ConstraintRoundFormula) {
  const SpherePoly v = SpherePoly::constant(5, 1) + SpherePoly::coordinate(5, 1);
  EXPECT_EQ(sigma2_constraint_round(5, v), sigma2_constraint(5)->evaluate({v, v}));
  EXPECT_EQ(sigma2_constraint_round(5, SpherePoly::constant(5, 1)), SpherePoly::constant(5, ratio(5, 4)));
}

TEST(FrankLieb, GjmsGapIsLaplacianPairing) {
  // Gap = <u, Delta L_{2k-2} u>.
  std::mt19937_64 rng(52);
  for (const auto& [n, k] : {std::pair{3, 1}, std::pair{5, 1}, std::pair{5, 2}}) {
    for (int trial = 0; trial < 3; ++trial) {
      const SpherePoly u = random_sphere_poly(n, 3, rng);
      const SpherePoly lower = k == 1 ? u : gjms(n, k - 1)->evaluate({u});
      const SphereIntegral gap = frank_lieb_gap(*gjms(n, k), u);
      EXPECT_EQ(gap.mean, inner_product(u, laplacian_sphere(lower)).mean);
      EXPECT_GE(gap.mean, 0);
    }
  }
  EXPECT_EQ(frank_lieb_gap(*gjms(3, 1), SpherePoly::coordinate(3, 0)).mean, ratio(3, 4));
}

TEST(FrankLieb, VanishesAtConstants) {
  EXPECT_EQ(frank_lieb_gap(*sigma2_ambient(5), SpherePoly::constant(5, 1)).mean, 0);
  EXPECT_EQ(frank_lieb_gap(*ovsienko_redou(5, 1), SpherePoly::constant(5, 1)).mean, 0);
  EXPECT_EQ(frank_lieb_gap(*ovsienko_redou(7, 2), SpherePoly::constant(7, 1)).mean, 0);
  EXPECT_EQ(frank_lieb_gap(*gjms(5, 2), SpherePoly::constant(5, 2)).mean, 0);
}

TEST(FrankLieb, NonnegativeNearConstants) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = ovsienko_redou(5, 1 + trial % 2);
    const SpherePoly u = SpherePoly::constant(5, 1) + random_sphere_poly(5, 2, rng, 4).scaled(ratio(1, 30));
    if (!cone_membership(*h, u).member) continue;
    EXPECT_GE(frank_lieb_gap(*h, u).mean, 0);
  }
}

TEST(Inputs, MonomialCounts) {
  // Every monomial of degree <= 2 in 4 variables.
  EXPECT_EQ(monomial_inputs(3, 2).size(), 15u);
  EXPECT_GE(harmonic_samples(3, 3).size(), 4u);
}
