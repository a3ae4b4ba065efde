#include "conflab/rational.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace conflab {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("exponent arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void normalize(i128& num, i128& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
}

}  // namespace

Frac::Frac(std::int64_t num, std::int64_t den) {
  i128 n = num;
  i128 d = den;
  normalize(n, d);
  num_ = narrow(n);
  den_ = narrow(d);
}

Frac Frac::operator-() const {
  Frac r;
  r.num_ = narrow(-static_cast<i128>(num_));
  r.den_ = den_;
  return r;
}

Frac& Frac::operator+=(const Frac& o) {
  i128 n = static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_;
  i128 d = static_cast<i128>(den_) * o.den_;
  normalize(n, d);
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

Frac& Frac::operator-=(const Frac& o) { return *this += -o; }

Frac& Frac::operator*=(const Frac& o) {
  i128 n = static_cast<i128>(num_) * o.num_;
  i128 d = static_cast<i128>(den_) * o.den_;
  normalize(n, d);
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

std::strong_ordering operator<=>(const Frac& a, const Frac& b) {
  i128 lhs = static_cast<i128>(a.num_) * b.den_;
  i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Frac::to_rational() const {
  Rational r(static_cast<long>(num_), static_cast<long>(den_));
  r.canonicalize();
  return r;
}

Frac Frac::from_rational(const Rational& r) {
  if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) {
    throw std::overflow_error("rational does not fit an exponent");
  }
  return Frac(r.get_num().get_si(), r.get_den().get_si());
}

std::string to_string(const Frac& f) {
  if (f.den() == 1) return std::to_string(f.num());
  return std::to_string(f.num()) + "/" + std::to_string(f.den());
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
  r.canonicalize();
  return r;
}

double to_double(const Rational& r) { return r.get_d(); }

Rational pochhammer(const Rational& x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i) r *= x + i;
  return r;
}

Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational factorial(int k) {
  Rational r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

Rational power(const Rational& x, int k) {
  Rational r = 1;
  if (k >= 0) {
    for (int i = 0; i < k; ++i) r *= x;
  } else {
    for (int i = 0; i < -k; ++i) r *= x;
    r = 1 / r;
  }
  return r;
}

}  // namespace conflab
