#pragma once

#include <map>
#include <string>

#include "conflab/ambient.hpp"
#include "conflab/polynomial.hpp"
#include "conflab/rational.hpp"

namespace conflab {

/// Polynomial function on the unit sphere S^n in R^{n+1}, stored as its
/// harmonic decomposition u = sum_d h_d with each h_d a homogeneous harmonic
/// polynomial of degree d. The decomposition is unique, so equality of
/// functions on the sphere is equality of component maps.
class SpherePoly {
 public:
  SpherePoly() = default;
  explicit SpherePoly(int n);

  static SpherePoly constant(int n, const Rational& c);
  /// Restriction of the Cartesian coordinate x^i.
  static SpherePoly coordinate(int n, int i);
  /// Restriction of an arbitrary polynomial in n+1 variables.
  static SpherePoly from_poly(int n, const Poly& p);
  /// Single component h of degree d; h must already be harmonic and homogeneous.
  static SpherePoly from_components_unchecked(int n, int d, Poly h);

  int dim() const { return n_; }
  const std::map<int, Poly>& components() const { return comps_; }
  /// Harmonic component of degree d (zero polynomial if absent).
  Poly component(int d) const;
  bool is_zero() const { return comps_.empty(); }
  int max_degree() const;

  /// sum_d h_d as a polynomial in n+1 variables.
  Poly to_poly() const;
  double evaluate(const double* x) const;

  SpherePoly& operator+=(const SpherePoly& o);
  SpherePoly& operator-=(const SpherePoly& o);
  SpherePoly operator-() const { return scaled(-1); }
  SpherePoly scaled(const Rational& c) const;
  friend SpherePoly operator+(SpherePoly a, const SpherePoly& b) { return a += b; }
  friend SpherePoly operator-(SpherePoly a, const SpherePoly& b) { return a -= b; }
  friend SpherePoly operator*(const SpherePoly& a, const SpherePoly& b);
  friend SpherePoly operator*(const Rational& c, const SpherePoly& a) { return a.scaled(c); }
  friend bool operator==(const SpherePoly& a, const SpherePoly& b);

  std::string to_string() const;

 private:
  int n_ = 0;
  std::map<int, Poly> comps_;
};

/// Splits p into harmonic components modulo |x|^2 = 1.
SpherePoly harmonic_decompose(int n, const Poly& p);
/// Harmonic projection of a homogeneous polynomial of degree d:
/// the unique harmonic h with f - h divisible by |x|^2.
Poly harmonic_projection(const Poly& f, int d);

/// Homogeneous extension sum_d t^{w-d} h_d(x) of weight w.
AmbientElement extend(const SpherePoly& u, Frac w);
/// Restriction to {t = 1, |x| = 1}. Throws std::invalid_argument unless the
/// input is homogeneous (or zero).
SpherePoly restrict_to_sphere(const AmbientElement& a);

/// Volume of the unit n-sphere, 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_volume(int n);

/// Exact integral stored as a rational multiple of Vol(S^n).
struct SphereIntegral {
  int n = 0;
  Rational mean;
  double value() const { return to_double(mean) * sphere_volume(n); }
};

/// Average of x^gamma over S^n: prod (gamma_i - 1)!! / prod_{j < |gamma|/2} (n + 1 + 2j),
/// zero when some gamma_i is odd.
Rational monomial_mean(int n, const Multi& gamma);
/// Integral of an arbitrary polynomial over S^n via monomial moments.
SphereIntegral integrate_poly(int n, const Poly& p);
/// Integral of a sphere function: Vol(S^n) times its degree-0 component.
SphereIntegral integrate(const SpherePoly& u);

/// Round-sphere Laplacian (nonnegative): h_d -> d(d+n-1) h_d.
SpherePoly laplacian_sphere(const SpherePoly& u);
/// <grad u, grad v> on S^n from the Euclidean gradients of the degree-homogeneous
/// components minus their radial parts.
SpherePoly gradient_pairing(const SpherePoly& u, const SpherePoly& v);
/// delta(f du) = -<grad f, grad u> + f Delta u.
SpherePoly divergence_term(const SpherePoly& f, const SpherePoly& u);

/// Curvature data of the round unit sphere.
struct RoundSphereData {
  int n = 0;
  Rational J;                  // n/2
  Rational schouten_multiple;  // P = (1/2) g
  Rational p_norm_squared;     // |P|^2 = n/4
  Rational sigma2;             // n(n-1)/8
  Rational t1_multiple;        // T_1 = J g - P = (n-1)/2 g
  static RoundSphereData make(int n);
};

}  // namespace conflab
