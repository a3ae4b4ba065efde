#include "conflab/conformal.hpp"

#include <cmath>
#include <stdexcept>

namespace conflab {

MobiusMap MobiusMap::identity(int n) {
  MobiusMap m;
  m.n_ = n;
  m.a_.assign(static_cast<std::size_t>((n + 2) * (n + 2)), 0.0);
  for (int i = 0; i < n + 2; ++i) m.a_[i * (n + 2) + i] = 1.0;
  return m;
}

MobiusMap MobiusMap::boost(int n, const std::vector<double>& e, double theta) {
  if (static_cast<int>(e.size()) != n + 1) throw std::invalid_argument("boost direction must have n+1 entries");
  double norm = 0.0;
  for (double v : e) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw std::invalid_argument("boost direction must be nonzero");
  MobiusMap m = identity(n);
  const int s = n + 2;
  const double ch = std::cosh(theta);
  const double sh = std::sinh(theta);
  m.a_[0] = ch;
  for (int i = 0; i <= n; ++i) {
    const double ei = e[i] / norm;
    m.a_[i + 1] = sh * ei;
    m.a_[(i + 1) * s] = sh * ei;
    for (int j = 0; j <= n; ++j) m.a_[(i + 1) * s + j + 1] += (ch - 1.0) * ei * e[j] / norm;
  }
  return m;
}

MobiusMap MobiusMap::boost_axis(int n, int axis, double theta) {
  if (axis < 0 || axis > n) throw std::invalid_argument("boost axis out of range");
  std::vector<double> e(n + 1, 0.0);
  e[axis] = 1.0;
  return boost(n, e, theta);
}

double MobiusMap::apply(const double* x, double* out) const {
  const int s = n_ + 2;
  double y0 = a_[0];
  for (int j = 0; j <= n_; ++j) y0 += a_[j + 1] * x[j];
  for (int i = 0; i <= n_; ++i) {
    const double* row = a_.data() + (i + 1) * s;
    double yi = row[0];
    for (int j = 0; j <= n_; ++j) yi += row[j + 1] * x[j];
    out[i] = yi / y0;
  }
  return y0;
}

double MobiusMap::lorentz_error() const {
  const int s = n_ + 2;
  double err = 0.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      double v = -a_[i] * a_[j];
      for (int k = 1; k < s; ++k) v += a_[k * s + i] * a_[k * s + j];
      const double eta = i != j ? 0.0 : (i == 0 ? -1.0 : 1.0);
      err = std::max(err, std::abs(v - eta));
    }
  }
  return err;
}

MobiusMap MobiusMap::inverse() const {
  MobiusMap m = *this;
  const int s = n_ + 2;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      const double sign = (i == 0) == (j == 0) ? 1.0 : -1.0;
      m.a_[i * s + j] = sign * a_[j * s + i];
    }
  }
  return m;
}

MobiusMap operator*(const MobiusMap& a, const MobiusMap& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("dimension mismatch");
  const int s = a.n_ + 2;
  MobiusMap m = MobiusMap::identity(a.n_);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      double v = 0.0;
      for (int k = 0; k < s; ++k) v += a.a_[i * s + k] * b.a_[k * s + j];
      m.a_[i * s + j] = v;
    }
  }
  return m;
}

SphereFunction act(SphereFunction u, const MobiusMap& phi, Frac w) {
  const double wd = w.to_double();
  return [u = std::move(u), phi, wd](const double* x) {
    std::vector<double> y(phi.dim() + 1);
    const double y0 = phi.apply(x, y.data());
    return std::pow(y0, wd) * u(y.data());
  };
}

SphereFunction as_function(const SpherePoly& u) {
  auto p = std::make_shared<Poly>(u.to_poly());
  return [p](const double* x) { return p->evaluate(x); };
}

std::vector<double> center_of_mass(const SphereFunction& f, double p, const SphereGrid& grid) {
  const int d = grid.n + 1;
  std::vector<std::vector<double>> moments(d + 1, std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double* x = grid.point(i);
    const double m = std::pow(std::abs(f(x)), p) * grid.weights[i];
    moments[0][i] = m;
    for (int j = 0; j < d; ++j) moments[j + 1][i] = m * x[j];
  }
  const double mass = pairwise_sum(moments[0]);
  if (!(mass > 0.0)) throw std::invalid_argument("center of mass of a vanishing function");
  std::vector<double> c(d);
  for (int j = 0; j < d; ++j) c[j] = pairwise_sum(moments[j + 1]) / mass;
  return c;
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

BalanceResult balance(const SphereFunction& u, Frac w, const SphereGrid& grid, const BalanceOptions& opt) {
  if (w.num() >= 0) throw std::invalid_argument("balance: weight must be negative");
  const int n = grid.n;
  const double rstar = -static_cast<double>(n) / w.to_double();
  BalanceResult res;
  res.phi = MobiusMap::identity(n);
  res.residual = center_of_mass(u, rstar, grid);
  res.residual_norm = norm2(res.residual);
  while (res.residual_norm > opt.tolerance && res.iterations < opt.max_iterations) {
    ++res.iterations;
    double theta = (n + 1.0) / n * res.residual_norm;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, theta *= 0.5) {
      MobiusMap trial = res.phi * MobiusMap::boost(n, res.residual, theta);
      auto c = center_of_mass(act(u, trial, w), rstar, grid);
      const double r = norm2(c);
      if (r < res.residual_norm) {
        res.phi = trial;
        res.residual = std::move(c);
        res.residual_norm = r;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  res.converged = res.residual_norm <= opt.tolerance;
  return res;
}

std::vector<Rational> rank2_spectrum(const OperatorHandle& h, int L) {
  if (h.rank != 2) throw std::invalid_argument(h.name + ": spectrum needs a rank-2 handle");
  std::vector<Rational> out;
  for (int l = 0; l <= L; ++l) {
    HarmonicIndex zonal{std::vector<int>(h.n, 0), false};
    zonal.chain[0] = l;
    const Poly z = harmonic_polynomial(h.n, zonal);
    const SpherePoly image = h.evaluate({SpherePoly::from_components_unchecked(h.n, l, z)});
    const Poly comp = image.component(l);
    const Rational lambda = comp.terms().empty() ? Rational(0) : comp.terms().front().coeff / [&] {
      for (const auto& t : z.terms()) {
        if (t.exps == comp.terms().front().exps) return t.coeff;
      }
      throw std::logic_error("harmonic is not an eigenfunction");
    }();
    if (!(image == SpherePoly::from_components_unchecked(h.n, l, z.scaled(lambda)))) {
      throw std::invalid_argument(h.name + ": not diagonal on harmonics");
    }
    out.push_back(lambda);
  }
  return out;
}

InvarianceCheck functional_invariance_check(const OperatorHandle& h, const SpherePoly& u, const MobiusMap& phi,
                                            const SphereGrid& grid, int L) {
  if (h.rank != 2) throw std::invalid_argument(h.name + ": invariance check needs a rank-2 handle");
  if (grid.n != h.n || phi.dim() != h.n) throw std::invalid_argument("dimension mismatch");
  const Frac w = h.input_weights[0];
  const double rstar = -static_cast<double>(h.n) / w.to_double();
  InvarianceCheck out;

  const double energy = inner_product(u, h.evaluate({u})).value();
  out.f_original = energy / std::pow(quadrature_norm(u, rstar, grid), 2.0);

  const SphereFunction v = act(as_function(u), phi, w);
  std::vector<double> values(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) values[p] = v(grid.point(p));
  const HarmonicBasis basis(h.n, L);
  const auto coef = basis.project_values(grid, values);
  const auto spectrum = rank2_spectrum(h, L);
  double energy_v = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    energy_v += to_double(spectrum[basis.degree(j)]) * coef[j] * coef[j];
    mass += coef[j] * coef[j];
  }
  const double l2 = std::pow(grid_norm(grid, values, 2.0), 2.0);
  out.truncation_residual = std::abs(l2 - mass) / l2;
  out.f_transformed = energy_v / std::pow(grid_norm(grid, values, rstar), 2.0);
  out.relative_deviation = std::abs(out.f_transformed - out.f_original) / std::abs(out.f_original);
  return out;
}

}  // namespace conflab
