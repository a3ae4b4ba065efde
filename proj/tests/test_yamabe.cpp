#include <gtest/gtest.h>

#include <cmath>

#include "conflab/yamabe.hpp"

using namespace conflab;

namespace {

const double kY31 = 0.75 * std::pow(2 * M_PI * M_PI, 2.0 / 3);

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

SpectralModel model31(int L) {
  const auto h = gjms(3, 1);
  const double p = critical_exponent(*h);
  return SpectralModel(h, L, p, grid_for_exponent(3, L, p));
}

}  // namespace

TEST(Exponent, CriticalValues) {
  EXPECT_DOUBLE_EQ(critical_exponent(*gjms(3, 1)), 6.0);
  EXPECT_DOUBLE_EQ(critical_exponent(*gjms(5, 2)), 10.0);
  EXPECT_DOUBLE_EQ(critical_exponent(*sigma2_ambient(5)), 20.0);
  EXPECT_DOUBLE_EQ(critical_exponent(*ovsienko_redou(5, 1)), 5.0);
}

TEST(SpectralModel, ConstantValue) {
  const SpectralModel m = model31(2);
  EXPECT_NEAR(m.functional(m.constant_state()), kY31, 1e-12 * kY31);
  EXPECT_NEAR(m.functional(m.constant_state(3.0)), kY31, 1e-12 * kY31);
  EXPECT_LT(norm(m.gradient(m.constant_state())), 1e-12);
  EXPECT_THROW(m.functional(std::vector<double>(m.size(), 0.0)), std::invalid_argument);
}

TEST(SpectralModel, DirichletMatchesExactForm) {
  const SpectralModel m = model31(2);
  const SpherePoly u = SpherePoly::constant(3, 1) + SpherePoly::coordinate(3, 0).scaled(ratio(1, 3));
  const auto c = m.project(u);
  EXPECT_NEAR(m.dirichlet(c), dirichlet(*gjms(3, 1), {u, u}).value(), 1e-12);
}

TEST(SpectralProperty, GradientMatchesFiniteDifferences) {
  const SpectralModel m = model31(3);
  auto c = perturbed_constant(m, 0.2, 5);
  const auto g = m.gradient(c);
  double orth = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) orth += g[j] * c[j];
  EXPECT_NEAR(orth, 0.0, 1e-10);
  for (std::size_t j = 0; j < c.size(); j += 3) {
    const double eps = 1e-6;
    auto a = c;
    auto b = c;
    a[j] += eps;
    b[j] -= eps;
    EXPECT_NEAR((m.functional(a) - m.functional(b)) / (2 * eps), g[j], 1e-6);
  }
}

TEST(SpectralProperty, RankFourGradientMatchesFiniteDifferences) {
  const auto h = sigma2_ambient(5);
  const SpectralModel m(h, 1, critical_exponent(*h));
  const auto c = perturbed_constant(m, 0.05, 9);
  const auto g = m.gradient(c);
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double eps = 1e-6;
    auto a = c;
    auto b = c;
    a[j] += eps;
    b[j] -= eps;
    EXPECT_NEAR((m.functional(a) - m.functional(b)) / (2 * eps), g[j], 1e-6 * (1 + std::abs(g[j])));
  }
}

TEST(PerturbedConstant, SeededAndReproducible) {
  const SpectralModel m = model31(2);
  EXPECT_EQ(perturbed_constant(m, 0.1, 42), perturbed_constant(m, 0.1, 42));
  EXPECT_NE(perturbed_constant(m, 0.1, 42), perturbed_constant(m, 0.1, 43));
  const auto c = perturbed_constant(m, 0.1, 42);
  for (std::size_t j = 1; j < c.size(); ++j) EXPECT_LE(std::abs(c[j]), 0.1 * c[0]);
}

TEST(Minimize, ConformalLaplacianReachesConstant) {
  const SpectralModel m = model31(2);
  const YamabeResult r = minimize(m, perturbed_constant(m, 0.1, 42));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, kY31, 1e-8 * kY31);
  EXPECT_LT(r.sup_distance, 1e-4);
  EXPECT_TRUE(r.cone_member);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1] + 1e-15);
}

TEST(Minimize, ResultIsDeterministic) {
  const SpectralModel m = model31(2);
  const YamabeResult a = minimize(m, perturbed_constant(m, 0.1, 7));
  const YamabeResult b = minimize(m, perturbed_constant(m, 0.1, 7));
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Eigenvalue, GjmsEqualsBottomEigenvalue) {
  EXPECT_NEAR(first_nonlinear_eigenvalue(gjms(3, 1), 2).lambda, 0.75, 1e-10);
  EXPECT_NEAR(first_nonlinear_eigenvalue(gjms(5, 1), 2).lambda, 3.75, 1e-10);
}

TEST(Eigenvalue, Sigma2Positive) {
  const auto e = first_nonlinear_eigenvalue(sigma2_ambient(5), 1);
  EXPECT_NEAR(e.lambda, 5.0 / 128.0, 1e-10);
  EXPECT_TRUE(e.run.converged);
}

TEST(SecondVariation, VanishesAtConstants) {
  for (double v : second_variation_probe(*gjms(3, 1), SpherePoly::constant(3, 1))) EXPECT_NEAR(v, 0.0, 1e-12);
  for (double v : second_variation_probe(*sigma2_ambient(5), SpherePoly::constant(5, 1))) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(SecondVariation, SumIdentityIsExact) {
  const SpherePoly u = SpherePoly::constant(3, 2) + SpherePoly::coordinate(3, 1);
  const auto id = second_variation_sum_identity(*gjms(3, 1), u);
  EXPECT_EQ(id.lhs.mean, id.rhs.mean);
  EXPECT_EQ(id.lhs.mean, ratio(267, 16));
  const SpherePoly v = SpherePoly::constant(5, 2) + SpherePoly::coordinate(5, 1);
  const auto id2 = second_variation_sum_identity(*sigma2_ambient(5), v);
  EXPECT_EQ(id2.lhs.mean, id2.rhs.mean);
  EXPECT_EQ(id2.lhs.mean, ratio(19135, 6144));
}

TEST(GridForExponent, ExactForEvenPowers) {
  const SphereGrid g = grid_for_exponent(3, 2, 6.0);
  const SpherePoly u = SpherePoly::constant(3, 1) + SpherePoly::coordinate(3, 0) * SpherePoly::coordinate(3, 1);
  SpherePoly u6 = u;
  for (int i = 0; i < 5; ++i) u6 = u6 * u;
  EXPECT_NEAR(std::pow(quadrature_norm(u, 6.0, g), 6.0), integrate(u6).value(), 1e-12 * integrate(u6).value());
}
