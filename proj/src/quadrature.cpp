#include "conflab/quadrature.hpp"

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <stdexcept>

namespace conflab {

namespace {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes and weights for int_{-1}^{1} f(t) (1 - t^2)^alpha dt.
GaussRule gegenbauer_rule(int count, double alpha) {
  gsl_integration_fixed_workspace* w =
      gsl_integration_fixed_alloc(gsl_integration_fixed_gegenbauer, count, -1.0, 1.0, alpha, 0.0);
  if (w == nullptr) throw std::runtime_error("gsl_integration_fixed_alloc failed");
  GaussRule r;
  const double* x = gsl_integration_fixed_nodes(w);
  const double* wt = gsl_integration_fixed_weights(w);
  r.nodes.assign(x, x + count);
  r.weights.assign(wt, wt + count);
  gsl_integration_fixed_free(w);
  return r;
}

double radical_inverse(long i, int base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

int default_gauss_nodes(int n) {
  if (n <= 3) return 48;
  if (n == 4) return 24;
  return 12;
}

SphereGrid gauss_grid(int n, int nodes, int azimuth_nodes) {
  if (n < 1 || n > 5) throw std::invalid_argument("Gauss grids support 1 <= n <= 5");
  if (nodes < 1 || azimuth_nodes < 1) throw std::invalid_argument("node counts must be positive");
  std::vector<GaussRule> rules;
  for (int j = 1; j <= n - 1; ++j) rules.push_back(gegenbauer_rule(nodes, 0.5 * (n - j - 1)));

  SphereGrid g;
  g.n = n;
  g.description = "gauss nodes=" + std::to_string(nodes) + " azimuth=" + std::to_string(azimuth_nodes);
  const double dphi = 2.0 * M_PI / azimuth_nodes;
  std::size_t total = static_cast<std::size_t>(azimuth_nodes);
  for (int j = 0; j < n - 1; ++j) total *= nodes;
  g.points.resize(total * (n + 1));
  g.weights.resize(total);

  std::vector<int> idx(n - 1, 0);
  std::size_t p = 0;
  for (std::size_t c = 0; c < total / azimuth_nodes; ++c) {
    double scale = 1.0;
    double weight = dphi;
    double x[kMaxVars];
    for (int j = 0; j < n - 1; ++j) {
      double t = rules[j].nodes[idx[j]];
      x[j] = scale * t;
      scale *= std::sqrt(std::max(0.0, 1.0 - t * t));
      weight *= rules[j].weights[idx[j]];
    }
    for (int a = 0; a < azimuth_nodes; ++a) {
      double phi = dphi * a;
      double* out = g.points.data() + p * (n + 1);
      for (int j = 0; j < n - 1; ++j) out[j] = x[j];
      out[n - 1] = scale * std::cos(phi);
      out[n] = scale * std::sin(phi);
      g.weights[p] = weight;
      ++p;
    }
    for (int j = n - 2; j >= 0; --j) {
      if (++idx[j] < nodes) break;
      idx[j] = 0;
    }
  }
  return g;
}

SphereGrid qmc_grid(int n, long points) {
  if (n < 1 || n + 1 > 12) throw std::invalid_argument("unsupported sphere dimension");
  if (points < 2) throw std::invalid_argument("qmc grid needs at least two points");
  SphereGrid g;
  g.n = n;
  g.monte_carlo = true;
  g.description = "qmc halton points=" + std::to_string(points);
  g.points.resize(static_cast<std::size_t>(points) * (n + 1));
  g.weights.assign(points, sphere_volume(n) / static_cast<double>(points));
  for (long i = 0; i < points; ++i) {
    double* out = g.points.data() + i * (n + 1);
    double norm2 = 0.0;
    for (int d = 0; d <= n; ++d) {
      double u = radical_inverse(i + 1, kPrimes[d]);
      out[d] = gsl_cdf_ugaussian_Pinv(u);
      norm2 += out[d] * out[d];
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (int d = 0; d <= n; ++d) out[d] *= inv;
  }
  return g;
}

SphereGrid make_grid(int n, const QuadSpec& request) {
  QuadScheme scheme = request.scheme;
  if (scheme == QuadScheme::Auto) scheme = n <= 5 ? QuadScheme::Gauss : QuadScheme::Qmc;
  if (scheme == QuadScheme::Qmc) return qmc_grid(n, request.qmc_points);
  if (n > 5) throw std::invalid_argument("tensor Gauss grids are limited to n <= 5");
  int nodes = request.nodes > 0 ? request.nodes : default_gauss_nodes(n);
  int az = request.azimuth_nodes > 0 ? request.azimuth_nodes : 2 * nodes;
  return gauss_grid(n, nodes, az);
}

double pairwise_sum(const double* v, std::size_t count) {
  if (count <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += v[i];
    return s;
  }
  std::size_t half = count / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

double grid_integrate(const SphereGrid& grid, const std::vector<double>& values) {
  if (values.size() != grid.size()) throw std::invalid_argument("value count does not match grid");
  std::vector<double> prod(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) prod[i] = grid.weights[i] * values[i];
  return pairwise_sum(prod);
}

double grid_standard_error(const SphereGrid& grid, const std::vector<double>& values) {
  if (!grid.monte_carlo) return 0.0;
  const double m = static_cast<double>(values.size());
  double mean = pairwise_sum(values) / m;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  double var = pairwise_sum(sq) / (m - 1.0);
  return sphere_volume(grid.n) * std::sqrt(var / m);
}

std::vector<double> evaluate_on_grid(const SpherePoly& u, const SphereGrid& grid) {
  if (u.dim() != grid.n) throw std::invalid_argument("dimension mismatch");
  Poly p = u.to_poly();
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = p.evaluate(grid.point(i));
  return v;
}

double grid_norm(const SphereGrid& grid, const std::vector<double>& values, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("norm exponent must satisfy 1 <= p < inf");
  std::vector<double> powv(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) powv[i] = std::pow(std::abs(values[i]), p);
  return std::pow(grid_integrate(grid, powv), 1.0 / p);
}

double quadrature_norm(const SpherePoly& u, double p, const SphereGrid& grid) {
  return grid_norm(grid, evaluate_on_grid(u, grid), p);
}

}  // namespace conflab
