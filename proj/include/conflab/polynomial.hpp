#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "conflab/rational.hpp"

namespace conflab {

/// Largest supported number of Cartesian variables (sphere dimension + 1).
inline constexpr int kMaxVars = 12;

/// Exponent vector over the Cartesian variables x^0..x^{N-1}.
using Multi = std::array<std::uint8_t, kMaxVars>;

int degree(const Multi& m);
Multi unit_multi(int i);
std::string multi_to_string(const Multi& m, int nvars);

struct PolyTerm {
  Multi exps{};
  Rational coeff;
};

/// Polynomial in N variables with exact coefficients, kept sorted by
/// exponent vector with no zero coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars);

  static Poly constant(int nvars, const Rational& c);
  static Poly variable(int nvars, int i);
  static Poly monomial(int nvars, const Multi& exps, const Rational& c = 1);
  /// Sum of squares of all variables.
  static Poly norm_squared(int nvars);
  /// Builds from an unsorted term list, merging duplicates.
  static Poly from_terms(int nvars, std::vector<PolyTerm> terms);

  int nvars() const { return nvars_; }
  const std::vector<PolyTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_degree() const;
  bool is_homogeneous() const;

  Poly homogeneous_part(int d) const;
  Poly partial(int i) const;
  /// Euclidean Laplacian sum_i d^2/dx_i^2.
  Poly laplacian() const;
  Poly scaled(const Rational& c) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly operator-() const { return scaled(-1); }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Rational& c) { return a.scaled(c); }
  friend Poly operator*(const Rational& c, const Poly& a) { return a.scaled(c); }
  friend bool operator==(const Poly& a, const Poly& b);

  Poly pow(int k) const;
  double evaluate(const double* x) const;
  std::string to_string() const;

 private:
  int nvars_ = 0;
  std::vector<PolyTerm> terms_;
};

/// Sorts, merges equal exponents, and drops zero coefficients in place.
void canonicalize_terms(std::vector<PolyTerm>& terms);

}  // namespace conflab
