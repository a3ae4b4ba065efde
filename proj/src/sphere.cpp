#include "conflab/sphere.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace conflab {

namespace {

void check_sphere_dim(int n) {
  if (n < 1 || n + 1 > kMaxVars) throw std::invalid_argument("unsupported sphere dimension");
}

Rational double_factorial_odd(int m) {
  // (m-1)!! for even m; 1 for m = 0.
  Rational r = 1;
  for (int j = m - 1; j > 1; j -= 2) r *= j;
  return r;
}

}  // namespace

SpherePoly::SpherePoly(int n) : n_(n) { check_sphere_dim(n); }

SpherePoly SpherePoly::constant(int n, const Rational& c) {
  return from_poly(n, Poly::constant(n + 1, c));
}

SpherePoly SpherePoly::coordinate(int n, int i) {
  return from_poly(n, Poly::variable(n + 1, i));
}

SpherePoly SpherePoly::from_poly(int n, const Poly& p) { return harmonic_decompose(n, p); }

SpherePoly SpherePoly::from_components_unchecked(int n, int d, Poly h) {
  SpherePoly r(n);
  if (!h.is_zero()) r.comps_[d] = std::move(h);
  return r;
}

Poly SpherePoly::component(int d) const {
  auto it = comps_.find(d);
  return it == comps_.end() ? Poly(n_ + 1) : it->second;
}

int SpherePoly::max_degree() const { return comps_.empty() ? -1 : comps_.rbegin()->first; }

Poly SpherePoly::to_poly() const {
  Poly p(n_ + 1);
  for (const auto& [d, h] : comps_) p += h;
  return p;
}

double SpherePoly::evaluate(const double* x) const {
  double s = 0.0;
  for (const auto& [d, h] : comps_) s += h.evaluate(x);
  return s;
}

SpherePoly& SpherePoly::operator+=(const SpherePoly& o) {
  if (o.n_ != n_) throw std::invalid_argument("dimension mismatch");
  for (const auto& [d, h] : o.comps_) {
    Poly sum = component(d) + h;
    if (sum.is_zero()) {
      comps_.erase(d);
    } else {
      comps_[d] = std::move(sum);
    }
  }
  return *this;
}

SpherePoly& SpherePoly::operator-=(const SpherePoly& o) { return *this += o.scaled(-1); }

SpherePoly SpherePoly::scaled(const Rational& c) const {
  SpherePoly r(n_);
  if (sgn(c) == 0) return r;
  for (const auto& [d, h] : comps_) r.comps_[d] = h.scaled(c);
  return r;
}

SpherePoly operator*(const SpherePoly& a, const SpherePoly& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("dimension mismatch");
  return harmonic_decompose(a.n_, a.to_poly() * b.to_poly());
}

bool operator==(const SpherePoly& a, const SpherePoly& b) {
  if (a.n_ != b.n_ || a.comps_.size() != b.comps_.size()) return false;
  auto i = a.comps_.begin();
  auto j = b.comps_.begin();
  for (; i != a.comps_.end(); ++i, ++j) {
    if (i->first != j->first || !(i->second == j->second)) return false;
  }
  return true;
}

std::string SpherePoly::to_string() const {
  if (comps_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [d, h] : comps_) {
    if (!first) out << " + ";
    out << "[" << d << "] " << h.to_string();
    first = false;
  }
  return out.str();
}

Poly harmonic_projection(const Poly& f, int d) {
  const int nv = f.nvars();
  Poly result = f;
  Poly lap = f;
  Poly rpow = Poly::constant(nv, 1);
  const Poly r2 = Poly::norm_squared(nv);
  Rational denom = 1;
  for (int i = 1; 2 * i <= d; ++i) {
    lap = lap.laplacian();
    if (lap.is_zero()) break;
    rpow = rpow * r2;
    denom *= Rational(2 * i) * (nv + 2 * d - 2 * i - 2);
    Rational c = (i % 2 == 1 ? Rational(-1) : Rational(1)) / denom;
    result += (rpow * lap).scaled(c);
  }
  return result;
}

SpherePoly harmonic_decompose(int n, const Poly& p) {
  check_sphere_dim(n);
  if (p.nvars() != n + 1) throw std::invalid_argument("polynomial has wrong variable count");
  const int nv = n + 1;
  SpherePoly out(n);
  const int top = p.max_degree();
  for (int m = 0; m <= top; ++m) {
    Poly pm = p.homogeneous_part(m);
    if (pm.is_zero()) continue;
    Poly lap = pm;
    for (int j = 0; 2 * j <= m; ++j) {
      if (j > 0) lap = lap.laplacian();
      if (lap.is_zero()) break;
      const int d = m - 2 * j;
      // Lap^j (|x|^{2j} h_d) = kappa h_d.
      Rational kappa = 1;
      for (int s = 1; s <= j; ++s) kappa *= Rational(2 * s) * (nv + 2 * d + 2 * s - 2);
      Poly h = harmonic_projection(lap, d).scaled(1 / kappa);
      if (!h.is_zero()) out += SpherePoly::from_components_unchecked(n, d, std::move(h));
    }
  }
  return out;
}

AmbientElement extend(const SpherePoly& u, Frac w) {
  AmbientElement a(u.dim());
  for (const auto& [d, h] : u.components()) a += AmbientElement::from_poly(u.dim(), h, w - Frac(d));
  return a;
}

SpherePoly restrict_to_sphere(const AmbientElement& a) {
  const int n = a.dim();
  if (a.is_zero()) return SpherePoly(n);
  if (!a.weight()) throw std::invalid_argument("restriction of a non-homogeneous ambient element");
  std::vector<PolyTerm> terms;
  terms.reserve(a.terms().size());
  for (const auto& t : a.terms()) terms.push_back({t.x, t.coeff});
  return harmonic_decompose(n, Poly::from_terms(n + 1, std::move(terms)));
}

double sphere_volume(int n) {
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(M_PI, h) / std::tgamma(h);
}

Rational monomial_mean(int n, const Multi& gamma) {
  Rational num = 1;
  int total = 0;
  for (int i = 0; i <= n; ++i) {
    if (gamma[i] % 2 != 0) return 0;
    num *= double_factorial_odd(gamma[i]);
    total += gamma[i];
  }
  Rational den = 1;
  for (int j = 0; j < total / 2; ++j) den *= n + 1 + 2 * j;
  return num / den;
}

SphereIntegral integrate_poly(int n, const Poly& p) {
  SphereIntegral r{n, 0};
  for (const auto& t : p.terms()) r.mean += t.coeff * monomial_mean(n, t.exps);
  return r;
}

SphereIntegral integrate(const SpherePoly& u) {
  Poly h0 = u.component(0);
  Rational c = h0.is_zero() ? Rational(0) : h0.terms().front().coeff;
  return SphereIntegral{u.dim(), c};
}

SpherePoly laplacian_sphere(const SpherePoly& u) {
  SpherePoly r(u.dim());
  for (const auto& [d, h] : u.components()) {
    if (d == 0) continue;
    r += SpherePoly::from_components_unchecked(u.dim(), d, h.scaled(Rational(d * (d + u.dim() - 1))));
  }
  return r;
}

SpherePoly gradient_pairing(const SpherePoly& u, const SpherePoly& v) {
  const int n = u.dim();
  if (v.dim() != n) throw std::invalid_argument("dimension mismatch");
  Poly acc(n + 1);
  for (const auto& [d, hu] : u.components()) {
    if (d == 0) continue;
    for (const auto& [e, hv] : v.components()) {
      if (e == 0) continue;
      for (int i = 0; i <= n; ++i) acc += hu.partial(i) * hv.partial(i);
      acc -= (hu * hv).scaled(Rational(d * e));
    }
  }
  return harmonic_decompose(n, acc);
}

SpherePoly divergence_term(const SpherePoly& f, const SpherePoly& u) {
  return f * laplacian_sphere(u) - gradient_pairing(f, u);
}

RoundSphereData RoundSphereData::make(int n) {
  RoundSphereData d;
  d.n = n;
  d.J = ratio(n, 2);
  d.schouten_multiple = ratio(1, 2);
  d.p_norm_squared = ratio(n, 4);
  d.sigma2 = ratio(n * (n - 1), 8);
  d.t1_multiple = ratio(n - 1, 2);
  return d;
}

}  // namespace conflab
