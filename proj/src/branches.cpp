#include "conflab/branches.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_fft_halfcomplex.h>
#include <gsl/gsl_fft_real.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_roots.h>

#include <cmath>
#include <functional>
#include <memory>
#include <utility>
#include <stdexcept>

#include "conflab/sphere.hpp"

namespace conflab {

namespace {

double brent(const std::function<double(double)>& f, double lo, double hi) {
  gsl_function F;
  F.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
  F.params = const_cast<std::function<double(double)>*>(&f);
  std::unique_ptr<gsl_root_fsolver, decltype(&gsl_root_fsolver_free)> s(gsl_root_fsolver_alloc(gsl_root_fsolver_brent),
                                                                         gsl_root_fsolver_free);
  if (gsl_root_fsolver_set(s.get(), &F, lo, hi) != GSL_SUCCESS) throw std::runtime_error("root not bracketed");
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    gsl_root_fsolver_iterate(s.get());
    x = gsl_root_fsolver_root(s.get());
    const double a = gsl_root_fsolver_x_lower(s.get());
    const double b = gsl_root_fsolver_x_upper(s.get());
    if (gsl_root_test_interval(a, b, 0.0, 1e-15) == GSL_SUCCESS) break;
  }
  return x;
}

// (x^q - y^q) / (x - y), stable for nearby points.
double power_difference(double x, double y, double q) {
  if (x > y) std::swap(x, y);
  const double t = (x - y) / y;
  if (t == 0.0) return q * std::pow(y, q - 1.0);
  return std::pow(y, q - 1.0) * std::expm1(q * std::log1p(t)) / t;
}

// V[lo, hi, u] = -a/2 + c (u^q)[lo, hi, u] with q = 2n/(n-2), c = (n-2)/(2n).
// For integer q the power part is the complete homogeneous sum of degree
// q - 2 (all terms positive). Otherwise, when lo is comparable to hi, it is
// the Hermite-Genocchi integral of q (q-1) u^{q-2} over the triangle by
// tensor Gauss-Legendre; near the separatrix (lo -> 0, where u^{q-2} is not
// smooth) it is the difference of first divided differences over hi - lo.
double second_divided_difference(const ReducedOde& ode, double lo, double hi, double u) {
  const int n = ode.dim();
  const double q = 2.0 * n / (n - 2.0);
  const double c = (n - 2.0) / (2.0 * n);
  double power = 0.0;
  const double qr = std::round(q);
  if (std::abs(q - qr) < 1e-12) {
    const int deg = static_cast<int>(qr) - 2;
    for (int i = 0; i <= deg; ++i) {
      for (int j = 0; i + j <= deg; ++j) power += std::pow(lo, i) * std::pow(hi, j) * std::pow(u, deg - i - j);
    }
  } else if (lo > 0.1 * hi) {
    static const gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(24);
    for (std::size_t i = 0; i < table->n; ++i) {
      double s = 0.0;
      double ws = 0.0;
      gsl_integration_glfixed_point(0.0, 1.0, i, &s, &ws, table);
      for (std::size_t j = 0; j < table->n; ++j) {
        double t = 0.0;
        double wt = 0.0;
        gsl_integration_glfixed_point(0.0, 1.0 - s, j, &t, &wt, table);
        const double x = lo + s * (hi - lo) + t * (u - lo);
        power += ws * wt * q * (q - 1.0) * std::pow(x, q - 2.0);
      }
    }
  } else {
    power = (power_difference(u, hi, q) - power_difference(u, lo, q)) / (hi - lo);
  }
  return -0.5 * ode.a() + c * power;
}

// Error handler is process-global; quadrature failures are reported by status.
struct GslErrorsOff {
  GslErrorsOff() { gsl_set_error_handler_off(); }
};
const GslErrorsOff gsl_errors_off;

}  // namespace

ReducedOde::ReducedOde(int n) : n_(n) {
  if (n < 3) throw std::invalid_argument("reduced ODE needs n >= 3");
  a_ = (n - 2.0) * (n - 2.0) / 4.0;
  p_ = (n + 2.0) / (n - 2.0);
}

double ReducedOde::force(double u) const { return a_ * u - std::pow(u, p_); }

double ReducedOde::potential(double u) const {
  return -0.5 * a_ * u * u + (n_ - 2.0) / (2.0 * n_) * std::pow(u, p_ + 1.0);
}

double ReducedOde::center_energy() const { return potential(constant_solution(n_)); }

double ReducedOde::center_period() const { return 2.0 * M_PI / std::sqrt(n_ - 2.0); }

std::pair<double, double> ReducedOde::turning_points(double E) const {
  const double e_c = center_energy();
  if (!(E > e_c && E < 0.0)) throw std::invalid_argument("energy outside the periodic window");
  const double u0 = constant_solution(n_);
  auto g = [&](double u) { return potential(u) - E; };
  double hi = 2.0 * u0;
  while (g(hi) < 0.0) hi *= 2.0;
  return {brent(g, 0.0, u0), brent(g, u0, hi)};
}

double constant_solution(int n) {
  if (n < 3) throw std::invalid_argument("constant solution needs n >= 3");
  return std::pow((n - 2.0) * (n - 2.0) / 4.0, (n - 2.0) / 4.0);
}

namespace {

using Workspace = std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)>;

double checked(int status, double result, double err) {
  // A roundoff flag with a small error estimate still meets the target accuracy.
  if (!std::isfinite(result) || (status != GSL_SUCCESS && err > 1e-9 * std::abs(result))) {
    throw std::runtime_error(std::string("period quadrature failed: ") + gsl_strerror(status));
  }
  return result;
}

// int_lo^hi f(u) (u - lo)^alpha (hi - u)^beta du.
double weighted_integral(std::function<double(double)> f, double lo, double hi, double alpha, double beta) {
  gsl_function F;
  F.function = [](double x, void* p) { return (*static_cast<std::function<double(double)>*>(p))(x); };
  F.params = &f;
  std::unique_ptr<gsl_integration_qaws_table, decltype(&gsl_integration_qaws_table_free)> table(
      gsl_integration_qaws_table_alloc(alpha, beta, 0, 0), gsl_integration_qaws_table_free);
  Workspace ws(gsl_integration_workspace_alloc(1000), gsl_integration_workspace_free);
  double result = 0.0;
  double err = 0.0;
  const int status = gsl_integration_qaws(&F, lo, hi, table.get(), 0.0, 1e-13, 1000, ws.get(), &result, &err);
  return checked(status, result, err);
}

double smooth_integral(std::function<double(double)> f, double lo, double hi) {
  gsl_function F;
  F.function = [](double x, void* p) { return (*static_cast<std::function<double(double)>*>(p))(x); };
  F.params = &f;
  Workspace ws(gsl_integration_workspace_alloc(1000), gsl_integration_workspace_free);
  double result = 0.0;
  double err = 0.0;
  const int status = gsl_integration_qag(&F, lo, hi, 0.0, 1e-13, 1000, GSL_INTEG_GAUSS61, ws.get(), &result, &err);
  return checked(status, result, err);
}

}  // namespace

double period_map(int n, double E) {
  const ReducedOde ode(n);
  const auto [lo, hi] = ode.turning_points(E);
  // Since V(lo) = V(hi), E - V(u) = (u - lo)(hi - u) V[lo, hi, u].
  auto v2 = [&](double u) { return second_divided_difference(ode, lo, hi, u); };
  if (lo > 0.1 * hi) {
    // T = 2 int (u - lo)^{-1/2} (hi - u)^{-1/2} / sqrt(2 V[lo, hi, u]) du.
    return 2.0 * weighted_integral([&](double u) { return 1.0 / std::sqrt(2.0 * v2(u)); }, lo, hi, -0.5, -0.5);
  }
  // Near the separatrix u spends a long time near lo. Split at the midpoint;
  // below it put u = lo cosh(tau), so du / sqrt(2 (E - V)) = dtau / sqrt(2 g)
  // with g = (E - V(u)) / (u^2 - lo^2) = a/2 - c (u^q - lo^q) / (u^2 - lo^2).
  const double mid = 0.5 * (lo + hi);
  const double q = 2.0 * n / (n - 2.0);
  const double c = (n - 2.0) / (2.0 * n);
  auto lower = [&](double tau) {
    const double u = lo * std::cosh(tau);
    const double g = 0.5 * ode.a() - c * power_difference(u, lo, q) / (u + lo);
    return 1.0 / std::sqrt(2.0 * g);
  };
  const double t_lower = smooth_integral(lower, 0.0, std::acosh(mid / lo));
  const double t_upper =
      weighted_integral([&](double u) { return 1.0 / std::sqrt(2.0 * (u - lo) * v2(u)); }, mid, hi, 0.0, -0.5);
  return 2.0 * (t_lower + t_upper);
}

Trajectory integrate_orbit(int n, double u_max, double length, int steps) {
  if (steps < 2 || !(length > 0.0)) throw std::invalid_argument("integrate_orbit: bad mesh");
  const ReducedOde ode(n);
  // Yoshida's sixth-order composition weights (solution A).
  const double w1 = -1.17767998417887;
  const double w2 = 0.235573213359357;
  const double w3 = 0.784513610477560;
  const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
  const double weights[7] = {w3, w2, w1, w0, w1, w2, w3};
  Trajectory tr;
  tr.step = length / steps;
  tr.u.resize(steps);
  tr.du.resize(steps);
  double u = u_max;
  double v = 0.0;
  const double e0 = ode.energy(u, v);
  for (int j = 0; j < steps; ++j) {
    tr.u[j] = u;
    tr.du[j] = v;
    tr.energy_drift = std::max(tr.energy_drift, std::abs(ode.energy(u, v) - e0));
    for (double w : weights) {
      const double h = w * tr.step;
      v += 0.5 * h * ode.force(u);
      u += h * v;
      v += 0.5 * h * ode.force(u);
    }
  }
  tr.energy_drift = std::max(tr.energy_drift, std::abs(ode.energy(u, v) - e0));
  tr.closure = std::abs(u - tr.u[0]) + std::abs(v - tr.du[0]);
  return tr;
}

namespace {

std::vector<double> spectral_second_derivative(const std::vector<double>& u, double length) {
  const std::size_t N = u.size();
  std::vector<double> data(u);
  std::unique_ptr<gsl_fft_real_wavetable, decltype(&gsl_fft_real_wavetable_free)> rw(gsl_fft_real_wavetable_alloc(N),
                                                                                      gsl_fft_real_wavetable_free);
  std::unique_ptr<gsl_fft_halfcomplex_wavetable, decltype(&gsl_fft_halfcomplex_wavetable_free)> hw(
      gsl_fft_halfcomplex_wavetable_alloc(N), gsl_fft_halfcomplex_wavetable_free);
  std::unique_ptr<gsl_fft_real_workspace, decltype(&gsl_fft_real_workspace_free)> ws(gsl_fft_real_workspace_alloc(N),
                                                                                      gsl_fft_real_workspace_free);
  gsl_fft_real_transform(data.data(), 1, N, rw.get(), ws.get());
  const double base = 2.0 * M_PI / length;
  data[0] = 0.0;
  for (std::size_t k = 1; 2 * k < N; ++k) {
    const double f = -(base * k) * (base * k);
    data[2 * k - 1] *= f;
    data[2 * k] *= f;
  }
  if (N % 2 == 0) data[N - 1] *= -(base * (N / 2)) * (base * (N / 2));
  gsl_fft_halfcomplex_inverse(data.data(), 1, N, hw.get(), ws.get());
  return data;
}

void fill_diagnostics(const ReducedOde& ode, const Trajectory& tr, BranchRecord& rec) {
  const int n = ode.dim();
  const std::size_t N = tr.u.size();
  const double rstar = 2.0 * n / (n - 2.0);
  const auto d2 = spectral_second_derivative(tr.u, rec.length);
  double kinetic = 0.0;
  double mass = 0.0;
  rec.pde_residual = 0.0;
  rec.reversal_error = 0.0;
  rec.minimum = tr.u[0];
  for (std::size_t j = 0; j < N; ++j) {
    const double u = tr.u[j];
    rec.pde_residual = std::max(rec.pde_residual, std::abs(-d2[j] + ode.a() * u - std::pow(u, ode.p())));
    rec.reversal_error = std::max(rec.reversal_error, std::abs(u - tr.u[(N - j) % N]));
    rec.minimum = std::min(rec.minimum, u);
    kinetic += tr.du[j] * tr.du[j] + ode.a() * u * u;
    mass += std::pow(u, rstar);
  }
  kinetic *= tr.step;
  mass *= tr.step;
  rec.energy_drift = tr.energy_drift;
  rec.functional = std::pow(sphere_volume(n - 1), 2.0 / n) * kinetic / std::pow(mass, 2.0 / rstar);
}

}  // namespace

PeriodScan period_scan(int n, int levels) {
  if (levels < 2) throw std::invalid_argument("period scan needs at least two levels");
  const ReducedOde ode(n);
  const double e_c = ode.center_energy();
  PeriodScan scan;
  scan.strictly_increasing = true;
  for (int j = 1; j <= levels; ++j) {
    // Equally spaced in (center, 0), excluding both ends.
    const double E = e_c * (1.0 - static_cast<double>(j) / (levels + 1));
    scan.energies.push_back(E);
    scan.periods.push_back(period_map(n, E));
    if (j > 1 && !(scan.periods[j - 1] > scan.periods[j - 2])) scan.strictly_increasing = false;
  }
  return scan;
}

double solve_period(int n, double period) {
  const ReducedOde ode(n);
  const double e_c = ode.center_energy();
  if (!(period > ode.center_period())) throw std::invalid_argument("no nonconstant orbit with this period");
  double lo = e_c * (1.0 - 1e-9);
  if (period_map(n, lo) >= period) throw std::invalid_argument("period too close to the bifurcation value");
  double hi = e_c * 1e-1;
  for (int i = 0; period_map(n, hi) <= period; ++i) {
    if (i == 20) throw std::runtime_error("period beyond the resolvable range");
    hi *= 1e-1;
  }
  return brent([&](double E) { return period_map(n, E) - period; }, lo, hi);
}

BranchRecord solve_branch(int n, double length, int m, const BranchOptions& opt) {
  if (m < 1) throw std::invalid_argument("multiplicity must be positive");
  const ReducedOde ode(n);
  BranchRecord rec;
  rec.multiplicity = m;
  rec.class_id = m;
  rec.length = length;
  rec.period = length / m;
  rec.energy_level = solve_period(n, rec.period);
  rec.amplitude = ode.turning_points(rec.energy_level).second;
  const Trajectory tr = integrate_orbit(n, rec.amplitude, length, m * opt.steps_per_period);
  fill_diagnostics(ode, tr, rec);
  return rec;
}

BranchRecord constant_branch(int n, double length, const BranchOptions& opt) {
  const ReducedOde ode(n);
  BranchRecord rec;
  rec.length = length;
  rec.period = length;
  rec.amplitude = constant_solution(n);
  rec.energy_level = ode.center_energy();
  const Trajectory tr = integrate_orbit(n, rec.amplitude, length, opt.steps_per_period);
  fill_diagnostics(ode, tr, rec);
  return rec;
}

BranchSet count_branches(int n, double length, const BranchOptions& opt) {
  if (!(length > 0.0)) throw std::invalid_argument("circle length must be positive");
  const ReducedOde ode(n);
  BranchSet set;
  set.n = n;
  set.length = length;
  set.records.push_back(constant_branch(n, length, opt));
  set.monotone_scan_passed = period_scan(n, opt.scan_levels).strictly_increasing;
  for (int m = 1; length / m > ode.center_period(); ++m) set.records.push_back(solve_branch(n, length, m, opt));
  return set;
}

CoveringReport covering_energy_check(int n, double length, int d, const BranchOptions& opt) {
  if (d < 1) throw std::invalid_argument("cover degree must be positive");
  CoveringReport rep;
  rep.d = d;
  rep.expected = std::pow(static_cast<double>(d), 2.0 / n);
  const BranchRecord base = solve_branch(n, length, 1, opt);
  rep.f_base = base.functional;
  const BranchSet cover = count_branches(n, d * length, opt);
  for (const auto& rec : cover.records) {
    if (rec.multiplicity != d) continue;
    rep.found_in_cover = std::abs(rec.amplitude - base.amplitude) < 1e-9 && std::abs(rec.period - base.period) < 1e-9;
    rep.f_cover = rec.functional;
  }
  if (!rep.found_in_cover) throw std::runtime_error("cover is missing the pulled-back branch");
  rep.ratio = rep.f_cover / rep.f_base;
  rep.relative_error = std::abs(rep.ratio - rep.expected) / rep.expected;
  return rep;
}

EnergyChain energy_chain(int n, double length, const BranchOptions& opt) {
  const BranchSet set = count_branches(n, length, opt);
  EnergyChain chain;
  for (std::size_t i = 1; i < set.records.size(); ++i) chain.values.push_back(set.records[i].functional);
  chain.values.push_back(set.records.front().functional);
  chain.strictly_increasing = true;
  for (std::size_t i = 1; i < chain.values.size(); ++i) {
    if (!(chain.values[i] > chain.values[i - 1])) chain.strictly_increasing = false;
  }
  return chain;
}

}  // namespace conflab
