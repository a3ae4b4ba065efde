#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conflab/operators.hpp"

namespace conflab {

/// Outcome of comparing both sides of a commutator identity on a basis.
struct CommutatorReport {
  std::string identity;
  int n = 0;
  int k = 0;
  long basis_size = 0;
  bool exact_equal = true;
  /// Largest |lhs - rhs| coefficient over all sampled inputs (0 when exact).
  double max_deviation = 0.0;
  /// Stated constant and, when the sides are proportional, the observed one.
  std::optional<Rational> stated_constant;
  std::optional<Rational> fitted_constant;
  std::vector<std::string> failures;
};

/// sum_i x^i [D, x^i]_1 (u (x) v...) through the flat ambient space:
/// sum_i x^i t D(x^i u (x) v...) - (x^i)^2 D(t u (x) v...), with u extended at
/// weight w_1 - 1 and the v's at their own weights.
SpherePoly ambient_commutator(const OperatorHandle& h, const SpherePoly& u, const std::vector<SpherePoly>& vs);
/// Same quantity computed downstairs: sum_i x^i D(x^i u (x) v...) - D(u (x) v...).
SpherePoly direct_commutator(const OperatorHandle& h, const SpherePoly& u, const std::vector<SpherePoly>& vs);

/// Polynomial inputs: every monomial of degree <= degree on S^n, restricted.
std::vector<SpherePoly> monomial_inputs(int n, int degree);
/// One or two harmonics per degree l <= L, plus a mixed sum.
std::vector<SpherePoly> harmonic_samples(int n, int L);

CommutatorReport check_gjms_commutator(int n, int k, int L = 6);
CommutatorReport check_case_yan_commutator(int n, int k, Frac w, const AmbientElement& f, int degree = 3);
CommutatorReport check_or_commutator(int n, int k, int degree = 3);
CommutatorReport check_sigma2_commutator(int n, int degree = 2);

/// C(v (x) v) on the round sphere: n Lap v^2 - 8 v Lap v + n(n-4)^2/4 v^2.
SpherePoly sigma2_constraint_round(int n, const SpherePoly& v);

/// D(u^{(x)r}) - ((r-1)(n-2k)/(2rk)) int sum_i x^i u [D, x^i]_1(u^{(x)(r-1)}).
SphereIntegral frank_lieb_gap(const OperatorHandle& h, const SpherePoly& u);

}  // namespace conflab
