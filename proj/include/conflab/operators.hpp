#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <memory>
#include <string>
#include <vector>

#include "conflab/ambient.hpp"
#include "conflab/quadrature.hpp"
#include "conflab/sphere.hpp"

namespace conflab {

/// Ambient multilinear form acting on homogeneous extensions of its arguments.
using AmbientForm = std::function<AmbientElement(const std::vector<AmbientElement>&)>;

/// Multilinear polydifferential operator on S^n induced by a tangential
/// ambient form. Rank r means r - 1 arguments; homogeneity is -2k.
class OperatorHandle {
 public:
  std::string name;
  int rank = 2;
  int k = 0;
  int n = 0;
  /// Extension weight of each of the r - 1 arguments.
  std::vector<Frac> input_weights;
  AmbientForm ambient;
  bool self_adjoint = true;
  std::vector<std::shared_ptr<const OperatorHandle>> constraints;

  int arity() const { return rank - 1; }
  Frac output_weight() const;

  AmbientElement apply_ambient(const std::vector<AmbientElement>& extensions) const;
  /// D(u_1 (x) ... (x) u_{r-1}).
  SpherePoly evaluate(const std::vector<SpherePoly>& args) const;
  /// D(u^{(x)(r-1)}).
  SpherePoly evaluate_diagonal(const SpherePoly& u) const;
};

using HandlePtr = std::shared_ptr<const OperatorHandle>;

/// Sum of c * Lap^a(f Lap^b u) over a + b = k with
/// c = k!/(a! b!) ((n-2k)/2 + w)_a (-w - w' - (n-2k)/2)_b.
Rational case_yan_coefficient(int n, int k, const Rational& w, const Rational& wprime, int a);
AmbientElement case_yan_ambient(int n, int k, Frac w, const AmbientElement& f, const AmbientElement& u);

/// k!/(a!b!c!) (al)_{a+b} (al)_{a+c} (al)_{b+c} / (al)_k^2, al = (n-2k)/6.
Rational ovsienko_redou_coefficient(int n, int k, int a, int b, int c);
/// k!/(a!b!c!) (be+1)_{a+b} (be)_{a+c} (be)_{b+c} / (be (be+1)_k^2), be = (n-2k-2)/6.
Rational or_prime_coefficient(int n, int k, int a, int b, int c);
/// Single-sum forms B'_{a,b} and B''_{a,b} of the same family.
Rational or_prime_single_sum_u(int n, int k, int a, int b);
Rational or_prime_single_sum_v(int n, int k, int a, int b);

/// prod_{j<k} (l(l+n-1) + (n-2j-2)(n+2j)/4).
Rational gjms_eigenvalue(int n, int k, int l);
/// Q_{2k} on the round sphere: 2 L_{2k}(1)/(n-2k).
Rational q_curvature(int n, int k);

HandlePtr gjms(int n, int k);
HandlePtr gjms_rank4(int n, int k);
HandlePtr case_yan(int n, int k, Frac w, const AmbientElement& f);
HandlePtr ovsienko_redou(int n, int k);
HandlePtr or_prime(int n, int k);
HandlePtr sigma2_ambient(int n);
/// Bilinear constraint C(v (x) v) = n Lap v^2 - 8 v Lap v on weight -(n-4)/4.
HandlePtr sigma2_constraint(int n);
/// The identity as a rank-2 constraint at the given weight.
HandlePtr identity_constraint(int n, Frac w);

/// Cubic sigma_2 operator evaluated intrinsically on the round sphere.
SpherePoly sigma2_intrinsic_round(int n, const SpherePoly& u);

/// Exact integral of u * v using orthogonality of harmonic components.
SphereIntegral inner_product(const SpherePoly& u, const SpherePoly& v);
/// Integral of u_0 D(u_1 (x) ... (x) u_{r-1}).
SphereIntegral dirichlet(const OperatorHandle& h, const std::vector<SpherePoly>& args);

struct ConeMembership {
  bool member = true;
  double witness_min = 0.0;
  std::string method;
};

/// Strict positivity of every constraint on u, checked on a grid and refined
/// locally around the smallest grid value.
ConeMembership cone_membership(const OperatorHandle& h, const SpherePoly& u, const SphereGrid& grid);
ConeMembership cone_membership(const OperatorHandle& h, const SpherePoly& u);

/// Count of exact comparisons behind a structural check.
struct ExactCheck {
  std::string name;
  long checked = 0;
  long failures = 0;
  bool passed() const { return failures == 0; }
};

/// Random restriction of a polynomial of degree <= degree with small integer
/// coefficients, keeping at most max_terms monomials when max_terms > 0.
SpherePoly random_sphere_poly(int n, int degree, std::mt19937_64& rng, int max_terms = 0);

/// For each argument slot and every monomial of degree <= degree in that slot
/// (other slots random affine), replaces the slot's extension u~ by
/// u~ + Q (g~ + |x|^{w-2}) with g~ a random affine extension of weight w - 2, and
/// compares the restricted output exactly.
ExactCheck check_tangentiality(const OperatorHandle& h, int degree, std::uint64_t seed = 1);

/// The Dirichlet form on random tuples, compared exactly across every
/// permutation of its r arguments.
ExactCheck check_self_adjointness(const OperatorHandle& h, int samples, int degree, int max_terms = 0,
                                  std::uint64_t seed = 1);

/// Resolves a CLI selector such as `gjms:1`, `gjms4:1`, `or:1`, `sigma2`.
HandlePtr handle_from_selector(const std::string& selector, int n);

}  // namespace conflab
