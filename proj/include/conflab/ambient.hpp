#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conflab/polynomial.hpp"
#include "conflab/rational.hpp"

namespace conflab {

/// One term coeff * t^tpow * q^qpow * x^multi of an ambient function, where
/// q = |x|^2 = (x^0)^2 + ... + (x^n)^2.
struct AmbientTerm {
  Frac tpow;
  Frac qpow;
  Multi x{};
  Rational coeff;
};

/// Exact linear combination of weighted monomials on the flat ambient space
/// R_t x R^{n+1}_x with metric -dt^2 + |dx|^2.
///
/// Canonical form: terms sorted by (tpow, qpow, x), no duplicates, no zero
/// coefficients, and the exponent of x^n is at most 1. The last rule rewrites
/// (x^n)^2 as q - sum_{i<n} (x^i)^2, which makes the representation of a
/// function unique, so equality is term-list equality.
class AmbientElement {
 public:
  AmbientElement() = default;
  explicit AmbientElement(int n);

  static AmbientElement constant(int n, const Rational& c);
  static AmbientElement monomial(int n, Frac tpow, Frac qpow, const Multi& x, const Rational& c = 1);
  static AmbientElement t_power(int n, Frac a, const Rational& c = 1);
  static AmbientElement q_power(int n, Frac b, const Rational& c = 1);
  static AmbientElement coordinate(int n, int i);
  /// Q = |x|^2 - t^2, the defining function of the null cone.
  static AmbientElement defining_function(int n);
  /// t^a * p(x) for a polynomial p in the n+1 Cartesian variables.
  static AmbientElement from_poly(int n, const Poly& p, Frac a = Frac(0));
  /// Canonicalizes an arbitrary term list.
  static AmbientElement from_terms(int n, std::vector<AmbientTerm> terms);

  int dim() const { return n_; }
  const std::vector<AmbientTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Common weight tpow + 2 qpow + |x| of all terms, if homogeneous.
  std::optional<Frac> weight() const;

  AmbientElement& operator+=(const AmbientElement& o);
  AmbientElement& operator-=(const AmbientElement& o);
  AmbientElement operator-() const { return scaled(-1); }
  AmbientElement scaled(const Rational& c) const;
  friend AmbientElement operator+(AmbientElement a, const AmbientElement& b) { return a += b; }
  friend AmbientElement operator-(AmbientElement a, const AmbientElement& b) { return a -= b; }
  friend AmbientElement operator*(const AmbientElement& a, const AmbientElement& b);
  friend AmbientElement operator*(const Rational& c, const AmbientElement& a) { return a.scaled(c); }
  friend bool operator==(const AmbientElement& a, const AmbientElement& b);

  AmbientElement d_t() const;
  AmbientElement d_x(int i) const;

  std::string to_string() const;

 private:
  int n_ = 0;
  std::vector<AmbientTerm> terms_;
};

Frac term_weight(const AmbientTerm& t);

/// d_t^2 - sum_i d_{x^i}^2, the ambient Laplacian (nonnegative convention).
AmbientElement ambient_laplacian(const AmbientElement& a);
AmbientElement ambient_laplacian_power(const AmbientElement& a, int k);
/// The Euler field t d_t + sum_i x^i d_{x^i}.
AmbientElement euler(const AmbientElement& a);
/// Ambient Laplacian assembled from first derivatives (reference path).
AmbientElement ambient_laplacian_by_derivatives(const AmbientElement& a);

struct Sl2Report {
  int k = 0;
  int n = 0;
  int basis_degree = 0;
  long checked = 0;
  long failures = 0;
  std::vector<std::string> failed_monomials;
  bool passed() const { return failures == 0; }
};

/// Both sides of [Lap^k, Q] = -2k Lap^{k-1} (2X + n + 4 - 2k) on one element.
std::pair<AmbientElement, AmbientElement> sl2_sides(const AmbientElement& a, int k);

/// The monomial basis used by the sl(2) check: t and q exponents drawn from
/// {0, +-1/3, +-1/2, +-1} and canonical x-monomials of degree <= basis_degree.
std::vector<AmbientElement> sl2_basis(int n, int basis_degree);

/// Verifies the sl(2) commutator identity for every k in 1..kmax on the basis.
/// By default each monomial is first run through a checked int64 rational
/// kernel and falls back to GMP on overflow; exact_only forces GMP throughout.
std::vector<Sl2Report> check_sl2_range(int kmax, int n, int basis_degree, bool exact_only = false);
Sl2Report check_sl2(int k, int n, int basis_degree);

/// Startup self-test: k = 1 identity on a handful of monomials with the
/// chosen sign of the ambient Laplacian.
bool laplacian_sign_self_test();

}  // namespace conflab
