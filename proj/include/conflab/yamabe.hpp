#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "conflab/conformal.hpp"
#include "conflab/harmonic_basis.hpp"
#include "conflab/operators.hpp"
#include "conflab/quadrature.hpp"

namespace conflab {

/// r* = r n / (n - 2k).
double critical_exponent(const OperatorHandle& h);

/// Grid on which |u|^p is integrated exactly for u of degree <= L when p is
/// an even integer (nodes p L / 2 + 1, azimuth p L + 2); the default grid
/// otherwise.
SphereGrid grid_for_exponent(int n, int L, double p);

/// Restriction of F to the span of the orthonormal harmonics of degree <= L.
/// The Dirichlet form is an exact symmetric tensor over the basis (diagonal
/// for rank 2); the norm ||u||_p is taken by quadrature. p = r* gives the
/// Yamabe functional and p = r the first nonlinear eigenvalue quotient.
class SpectralModel {
 public:
  SpectralModel(HandlePtr h, int L, double p);
  SpectralModel(HandlePtr h, int L, double p, SphereGrid grid);

  const OperatorHandle& handle() const { return *h_; }
  const HarmonicBasis& basis() const { return basis_; }
  const SphereGrid& grid() const { return grid_; }
  double exponent() const { return p_; }
  std::size_t size() const { return basis_.size(); }

  /// D(u^{(x)r}) for u = sum c_j phi_j.
  double dirichlet(const std::vector<double>& c) const;
  /// r T(c, ..., c, e_j).
  std::vector<double> dirichlet_gradient(const std::vector<double>& c) const;
  std::vector<double> values(const std::vector<double>& c) const;
  /// int |u|^p.
  double norm_power(const std::vector<double>& values) const;

  /// D(u^{(x)r}) / ||u||_p^r; throws on a zero-norm state.
  double functional(const std::vector<double>& c) const;
  /// Coefficients of r (D(u^{(x)(r-1)}) - (D / ||u||_p^p) |u|^{p-2} u) / ||u||_p^r.
  std::vector<double> gradient(const std::vector<double>& c) const;

  std::vector<double> project(const SpherePoly& u) const { return basis_.project(u); }
  std::vector<double> constant_state(double value = 1.0) const;
  /// sum c_j phi_j with each coefficient converted exactly from its double.
  SpherePoly to_sphere_poly(const std::vector<double>& c) const;
  SphereFunction function(const std::vector<double>& c) const;

 private:
  void build_tensor();

  HandlePtr h_;
  HarmonicBasis basis_;
  SphereGrid grid_;
  double p_;
  std::vector<double> table_;
  std::vector<double> diag_;
  std::vector<double> tensor_;
};

struct MinimizeOptions {
  double tolerance = 1e-8;
  int max_iterations = 2000;
  /// Re-balance every this many iterations; 0 disables.
  int rebalance_every = 25;
  double armijo = 1e-4;
};

struct YamabeResult {
  std::vector<double> coefficients;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
  int rebalances_accepted = 0;
  int cone_projections = 0;
  /// Steps taken by the directional-derivative secant after Armijo stalled.
  int secant_steps = 0;
  bool cone_member = true;
  /// (max - min) / 2 of the balanced minimizer with mean |u|^{r*} = 1.
  double sup_distance = 0.0;
  double balance_residual = 0.0;
  /// Smallest grid value of the minimizer; reported, not enforced.
  double min_value = 0.0;
};

/// 1 + amplitude * (uniform(-1, 1) on every nonconstant coefficient), seeded.
std::vector<double> perturbed_constant(const SpectralModel& model, double amplitude, std::uint64_t seed);

/// Normalized-gradient descent with Armijo backtracking halving from 1.0,
/// falling back to a secant on the directional derivative once Armijo stalls.
/// Rebalancing and the final sup-distance apply when the exponent is r*.
YamabeResult minimize(const SpectralModel& model, std::vector<double> init, const MinimizeOptions& opt = {});

struct EigenvalueResult {
  double lambda = 0.0;
  YamabeResult run;
};

/// min D(u^{(x)r}) subject to ||u||_r = 1 over harmonics of degree <= L.
EigenvalueResult first_nonlinear_eigenvalue(HandlePtr h, int L, std::uint64_t seed = 42,
                                            const MinimizeOptions& opt = {});

/// For v = x^0, ..., x^n and u rescaled to ||u||_{r*} = 1:
/// D((uv)^{(x)2} (x) u^{(x)(r-2)}) - ((r-1)n + 2k)/((r-1)(n-2k)) D(u^{(x)r}) int v^2 |u|^{r*}.
/// |u|^{r*} is integrated exactly when r* is an even integer, else on the grid.
std::vector<double> second_variation_probe(const OperatorHandle& h, const SpherePoly& u,
                                           const std::optional<SphereGrid>& grid = std::nullopt);

/// sum_i D((x^i u)^{(x)2} (x) u^{(x)(r-2)}) against D(u^{(x)r}) + int u sum_i x^i [D, x^i]_1(u^{(x)(r-1)}),
/// both exact.
struct VariationSumIdentity {
  SphereIntegral lhs;
  SphereIntegral rhs;
};
VariationSumIdentity second_variation_sum_identity(const OperatorHandle& h, const SpherePoly& u);

}  // namespace conflab
