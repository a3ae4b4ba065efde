#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace conflab {

/// Coefficient field for every exact computation.
using Rational = mpq_class;

/// Small exact rational used for exponents of t and |x|^2.
///
/// Values stay tiny in practice; every operation is checked and throws
/// std::overflow_error instead of wrapping.
class Frac {
 public:
  Frac() = default;
  Frac(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  Frac operator-() const;
  Frac& operator+=(const Frac& o);
  Frac& operator-=(const Frac& o);
  Frac& operator*=(const Frac& o);

  friend Frac operator+(Frac a, const Frac& b) { return a += b; }
  friend Frac operator-(Frac a, const Frac& b) { return a -= b; }
  friend Frac operator*(Frac a, const Frac& b) { return a *= b; }

  friend bool operator==(const Frac&, const Frac&) = default;
  friend std::strong_ordering operator<=>(const Frac& a, const Frac& b);

  Rational to_rational() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  static Frac from_rational(const Rational& r);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::string to_string(const Frac& f);

/// Serializes as "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);
Rational parse_rational(const std::string& s);
double to_double(const Rational& r);

/// Rising factorial (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1.
Rational pochhammer(const Rational& x, int k);
Rational factorial(int k);
Rational power(const Rational& x, int k);
/// Canonical num/den; mpq_class(num, den) alone does not reduce.
Rational ratio(long num, long den);

}  // namespace conflab
