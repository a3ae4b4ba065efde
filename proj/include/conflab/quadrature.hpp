#pragma once

#include <string>
#include <vector>

#include "conflab/sphere.hpp"

namespace conflab {

enum class QuadScheme { Auto, Gauss, Qmc };

/// Quadrature configuration (`quad.scheme`, `quad.nodes`, `quad.qmc_points`).
struct QuadSpec {
  QuadScheme scheme = QuadScheme::Auto;
  /// Gauss nodes per polar angle; 0 selects the per-dimension default.
  int nodes = 0;
  /// Azimuthal trapezoid points; 0 selects 2 * nodes.
  int azimuth_nodes = 0;
  long qmc_points = 200000;
};

/// Default Gauss nodes per polar angle: 48 up to n = 3, then 24 (n = 4)
/// and 12 (n = 5) so the tensor grid stays below ~10^6 points.
int default_gauss_nodes(int n);

/// Weighted point set on S^n. Points are stored row-major with n+1 entries each.
struct SphereGrid {
  int n = 0;
  std::vector<double> points;
  std::vector<double> weights;
  bool monte_carlo = false;
  std::string description;

  std::size_t size() const { return weights.size(); }
  const double* point(std::size_t i) const { return points.data() + i * (n + 1); }
};

/// Tensor Gauss grid: Gauss-Gegenbauer in cos(theta_j) for each polar angle
/// (the weight absorbs sin^{n-j} theta_j) and the trapezoid rule in azimuth.
/// Exact for polynomials of degree < min(2 * nodes, azimuth_nodes).
SphereGrid gauss_grid(int n, int nodes, int azimuth_nodes);
/// Halton points pushed through the inverse normal CDF and normalized.
SphereGrid qmc_grid(int n, long points);
/// Builds the grid described by request; throws std::invalid_argument for a
/// Gauss grid above n = 5.
SphereGrid make_grid(int n, const QuadSpec& request);

/// Fixed-tree pairwise summation (bitwise reproducible).
double pairwise_sum(const double* v, std::size_t count);
double pairwise_sum(const std::vector<double>& v);

/// sum_i weights[i] * values[i].
double grid_integrate(const SphereGrid& grid, const std::vector<double>& values);
/// Standard error estimate for Monte Carlo style grids (0 for Gauss grids).
double grid_standard_error(const SphereGrid& grid, const std::vector<double>& values);

std::vector<double> evaluate_on_grid(const SpherePoly& u, const SphereGrid& grid);
/// (integral |values|^p)^{1/p}.
double grid_norm(const SphereGrid& grid, const std::vector<double>& values, double p);
/// L^p norm of a sphere function on the given grid.
double quadrature_norm(const SpherePoly& u, double p, const SphereGrid& grid);

}  // namespace conflab
