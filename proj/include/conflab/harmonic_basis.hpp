#pragma once

#include <vector>

#include "conflab/polynomial.hpp"
#include "conflab/quadrature.hpp"
#include "conflab/sphere.hpp"

namespace conflab {

/// Label of one real spherical harmonic on S^n: a branching chain
/// m_0 >= m_1 >= ... >= m_{n-1} >= 0 plus a cos/sin choice for the last
/// circle factor (sin requires m_{n-1} > 0). The degree is m_0.
struct HarmonicIndex {
  std::vector<int> chain;
  bool sine = false;
  int degree() const { return chain.front(); }
  friend bool operator==(const HarmonicIndex&, const HarmonicIndex&) = default;
};

/// All labels of degree <= L, ordered by degree, then chain, then cos before sin.
std::vector<HarmonicIndex> harmonic_indices(int n, int L);
/// Dimension of the degree-l harmonics on S^n.
long harmonic_dimension(int n, int l);

/// Exact (unnormalized) harmonic polynomial for a label. At chain level l the
/// factor is G_p(x^l, rho) with p = m_l - m_{l+1}, built from
///   G_0 = 1, G_1 = x, G_p = x G_{p-1} - (p-1)(p+2lam-2) r^2 / (4(lam+p-1)(lam+p-2)) G_{p-2},
/// lam = m_{l+1} + (N_l - 2)/2, r^2 = |(x^l, ..., x^n)|^2; the last factor is
/// Re or Im of (x^{n-1} + i x^n)^{m_{n-1}}.
Poly harmonic_polynomial(int n, const HarmonicIndex& idx);
/// Integral of h^2 over S^n from the closed-form Gegenbauer norms.
double harmonic_norm_squared(int n, const HarmonicIndex& idx);

/// Orthonormal (in L^2(S^n, dvol)) real harmonic basis of degree <= L.
class HarmonicBasis {
 public:
  HarmonicBasis(int n, int L);

  int dim() const { return n_; }
  int max_degree() const { return L_; }
  std::size_t size() const { return indices_.size(); }
  const HarmonicIndex& index(std::size_t j) const { return indices_[j]; }
  int degree(std::size_t j) const { return indices_[j].degree(); }
  /// 1 / ||h_j||_{L^2}.
  double scale(std::size_t j) const { return scale_[j]; }

  /// Values of all orthonormal basis functions at a unit vector x.
  void evaluate(const double* x, double* out) const;
  /// Row-major table: values[j * grid.size() + p].
  std::vector<double> tabulate(const SphereGrid& grid) const;
  /// Exact unnormalized polynomial h_j (orthonormal function is scale(j) * h_j).
  Poly polynomial(std::size_t j) const { return harmonic_polynomial(n_, indices_[j]); }

  /// Coefficients of an exact sphere polynomial (components of degree > L dropped).
  std::vector<double> project(const SpherePoly& u) const;
  /// Quadrature projection of pointwise values.
  std::vector<double> project_values(const SphereGrid& grid, const std::vector<double>& values) const;
  /// Streaming quadrature projection of a callable, without storing the table.
  template <class F>
  std::vector<double> project_function(const SphereGrid& grid, F&& f) const {
    std::vector<double> coef(size(), 0.0);
    std::vector<double> vals(size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const double* x = grid.point(p);
      const double fw = f(x) * grid.weights[p];
      evaluate(x, vals.data());
      for (std::size_t j = 0; j < size(); ++j) coef[j] += fw * vals[j];
    }
    return coef;
  }
  double evaluate_expansion(const std::vector<double>& coef, const double* x) const;

 private:
  int n_;
  int L_;
  std::vector<HarmonicIndex> indices_;
  std::vector<double> scale_;
  // Per basis function: chain differences p_l and lower orders m_{l+1}.
  std::vector<std::vector<int>> p_;
};

/// Exact Gram block over all labels of degree l: entries are averages
/// over S^n of h_a h_b.
std::vector<std::vector<Rational>> exact_gram_block(int n, int l);

}  // namespace conflab
