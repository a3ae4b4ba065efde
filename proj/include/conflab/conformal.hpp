#pragma once

#include <functional>
#include <string>
#include <vector>

#include "conflab/harmonic_basis.hpp"
#include "conflab/operators.hpp"
#include "conflab/quadrature.hpp"

namespace conflab {

/// Real-valued function on S^n evaluated at a unit vector of length n+1.
using SphereFunction = std::function<double(const double*)>;

/// Conformal map of S^n stored as a Lorentz matrix A on R^{1,n+1}.
/// A sends the null ray through (1, x) to the ray through (1, Phi(x)):
/// A (1, x) = y0(x) (1, Phi(x)), and |J_Phi|^{1/n} = 1 / y0(x).
class MobiusMap {
 public:
  MobiusMap() = default;
  static MobiusMap identity(int n);
  /// Boost of rapidity theta toward the unit direction e (length n+1).
  static MobiusMap boost(int n, const std::vector<double>& e, double theta);
  static MobiusMap boost_axis(int n, int axis, double theta);

  int dim() const { return n_; }
  double entry(int i, int j) const { return a_[i * (n_ + 2) + j]; }

  /// Writes Phi(x) to out and returns y0(x).
  double apply(const double* x, double* out) const;
  /// max |A^T eta A - eta|.
  double lorentz_error() const;
  /// eta A^T eta.
  MobiusMap inverse() const;

  /// Matrix product; u . (A B) = (u . A) . B.
  friend MobiusMap operator*(const MobiusMap& a, const MobiusMap& b);

 private:
  int n_ = 0;
  std::vector<double> a_;
};

/// (u . Phi)(x) = |J_Phi|^{-w/n} u(Phi(x)) = y0(x)^w u(Phi(x)).
SphereFunction act(SphereFunction u, const MobiusMap& phi, Frac w);
SphereFunction as_function(const SpherePoly& u);

struct BalanceOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
};

struct BalanceResult {
  MobiusMap phi;
  /// int x |u.Phi|^{r*} / int |u.Phi|^{r*}.
  std::vector<double> residual;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Center of mass of |f|^p on the grid.
std::vector<double> center_of_mass(const SphereFunction& f, double p, const SphereGrid& grid);

/// Finds Phi with u . Phi balanced for r* = -n/w. Each step composes a boost
/// toward the current center of mass m with rapidity (n+1)/n |m|, halving
/// the rapidity while the residual fails to decrease. Throws on u = 0.
BalanceResult balance(const SphereFunction& u, Frac w, const SphereGrid& grid, const BalanceOptions& opt = {});

/// Eigenvalues of a rotation-invariant rank-2 handle on degrees 0..L, read
/// off by applying it to zonal harmonics.
std::vector<Rational> rank2_spectrum(const OperatorHandle& h, int L);

struct InvarianceCheck {
  double f_original = 0.0;
  double f_transformed = 0.0;
  double relative_deviation = 0.0;
  /// Unresolved L^2 mass of u . Phi beyond the refit degree, relative.
  double truncation_residual = 0.0;
};

/// |F(u . Phi) - F(u)| / |F(u)| for a rank-2 handle. u . Phi is refit to the
/// orthonormal harmonic basis of degree <= L on the grid; its Dirichlet form
/// is sum lambda_l a_j^2 and its L^{r*} norm is taken by quadrature.
InvarianceCheck functional_invariance_check(const OperatorHandle& h, const SpherePoly& u, const MobiusMap& phi,
                                            const SphereGrid& grid, int L);

}  // namespace conflab
