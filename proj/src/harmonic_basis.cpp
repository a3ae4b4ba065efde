#include "conflab/harmonic_basis.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

namespace conflab {

namespace {

// Gegenbauer parameter at chain level l for lower order m.
Rational level_lambda(int n, int l, int m) {
  Rational lam = ratio(n - 1 - l, 2);
  return lam + m;
}

Rational recurrence_coeff(int p, const Rational& lam) {
  Rational c = Rational((p - 1)) * (p + 2 * lam - 2) / (4 * (lam + p - 1) * (lam + p - 2));
  c.canonicalize();
  return c;
}

Poly partial_norm_squared(int nvars, int from) {
  Poly r(nvars);
  for (int i = from; i < nvars; ++i) {
    Multi m{};
    m[i] = 2;
    r += Poly::monomial(nvars, m);
  }
  return r;
}

Poly circle_factor(int nvars, int a, int b, int m, bool sine) {
  // Re or Im of (x^a + i x^b)^m.
  std::vector<PolyTerm> terms;
  Rational binom = 1;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) binom = binom * (m - k + 1) / k;
    bool odd = k % 2 == 1;
    if (odd != sine) continue;
    int sign_index = sine ? (k - 1) / 2 : k / 2;
    Multi e{};
    e[a] = static_cast<std::uint8_t>(m - k);
    e[b] = static_cast<std::uint8_t>(k);
    terms.push_back({e, sign_index % 2 == 0 ? binom : Rational(-binom)});
  }
  return Poly::from_terms(nvars, std::move(terms));
}

}  // namespace

long harmonic_dimension(int n, int l) {
  // C(l+n, n) - C(l+n-2, n).
  auto binom = [](long a, long b) -> long {
    if (b < 0 || a < b) return 0;
    long r = 1;
    for (long i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };
  return binom(l + n, n) - binom(l + n - 2, n);
}

std::vector<HarmonicIndex> harmonic_indices(int n, int L) {
  if (n < 1 || n + 1 > kMaxVars) throw std::invalid_argument("unsupported sphere dimension");
  std::vector<HarmonicIndex> out;
  std::vector<int> chain(n);
  std::function<void(int, int)> rec = [&](int level, int cap) {
    if (level == n) {
      out.push_back({chain, false});
      if (chain.back() > 0) out.push_back({chain, true});
      return;
    }
    for (int m = 0; m <= cap; ++m) {
      chain[level] = m;
      rec(level + 1, m);
    }
  };
  for (int d = 0; d <= L; ++d) {
    chain[0] = d;
    rec(1, d);
  }
  return out;
}

Poly harmonic_polynomial(int n, const HarmonicIndex& idx) {
  const int nv = n + 1;
  if (static_cast<int>(idx.chain.size()) != n) throw std::invalid_argument("chain length must equal n");
  Poly h = circle_factor(nv, n - 1, n, idx.chain[n - 1], idx.sine);
  for (int l = n - 2; l >= 0; --l) {
    const int p = idx.chain[l] - idx.chain[l + 1];
    const Rational lam = level_lambda(n, l, idx.chain[l + 1]);
    const Poly r2 = partial_norm_squared(nv, l);
    const Poly x = Poly::variable(nv, l);
    Poly g_prev = Poly::constant(nv, 1);
    Poly g = x;
    if (p == 0) g = g_prev;
    for (int q = 2; q <= p; ++q) {
      Poly next = x * g - (r2 * g_prev).scaled(recurrence_coeff(q, lam));
      g_prev = std::move(g);
      g = std::move(next);
    }
    h = g * h;
  }
  return h;
}

double harmonic_norm_squared(int n, const HarmonicIndex& idx) {
  const int mlast = idx.chain[n - 1];
  double logn = std::log(mlast == 0 ? 2.0 * M_PI : M_PI);
  for (int l = 0; l <= n - 2; ++l) {
    const int p = idx.chain[l] - idx.chain[l + 1];
    const double lam = 0.5 * (n - 1 - l) + idx.chain[l + 1];
    const double log_k = std::lgamma(p + 1.0) - p * std::log(2.0) - std::lgamma(lam + p) + std::lgamma(lam);
    const double log_h = std::log(M_PI) + (1.0 - 2.0 * lam) * std::log(2.0) + std::lgamma(p + 2.0 * lam) -
                         std::lgamma(p + 1.0) - std::log(p + lam) - 2.0 * std::lgamma(lam);
    logn += 2.0 * log_k + log_h;
  }
  return std::exp(logn);
}

HarmonicBasis::HarmonicBasis(int n, int L) : n_(n), L_(L), indices_(harmonic_indices(n, L)) {
  if (L < 0) throw std::invalid_argument("negative degree bound");
  scale_.reserve(indices_.size());
  p_.reserve(indices_.size());
  for (const auto& idx : indices_) {
    scale_.push_back(1.0 / std::sqrt(harmonic_norm_squared(n, idx)));
    std::vector<int> p(n - 1);
    for (int l = 0; l + 1 < n; ++l) p[l] = idx.chain[l] - idx.chain[l + 1];
    p_.push_back(std::move(p));
  }
}

void HarmonicBasis::evaluate(const double* x, double* out) const {
  const int n = n_;
  const int L = L_;
  const int stride = (L + 1) * (L + 1);
  std::vector<double> g(static_cast<std::size_t>(std::max(n - 1, 0)) * stride);
  double r2 = 0.0;
  for (int i = n; i >= 0; --i) {
    r2 += x[i] * x[i];
    const int l = i;
    if (l > n - 2) continue;
    // r2 now holds |(x^l, ..., x^n)|^2.
    const double xl = x[l];
    for (int m = 0; m <= L; ++m) {
      double* row = g.data() + l * stride + m * (L + 1);
      const double lam = 0.5 * (n - 1 - l) + m;
      row[0] = 1.0;
      if (L - m >= 1) row[1] = xl;
      for (int p = 2; p <= L - m; ++p) {
        const double c = (p - 1) * (p + 2.0 * lam - 2.0) / (4.0 * (lam + p - 1.0) * (lam + p - 2.0));
        row[p] = xl * row[p - 1] - c * r2 * row[p - 2];
      }
    }
  }
  std::vector<std::complex<double>> zpow(L + 1);
  const std::complex<double> z(x[n - 1], x[n]);
  zpow[0] = 1.0;
  for (int m = 1; m <= L; ++m) zpow[m] = zpow[m - 1] * z;
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    const auto& idx = indices_[j];
    const int mlast = idx.chain[n - 1];
    double v = idx.sine ? zpow[mlast].imag() : zpow[mlast].real();
    for (int l = 0; l + 1 < n; ++l) v *= g[l * stride + idx.chain[l + 1] * (L + 1) + p_[j][l]];
    out[j] = v * scale_[j];
  }
}

std::vector<double> HarmonicBasis::tabulate(const SphereGrid& grid) const {
  if (grid.n != n_) throw std::invalid_argument("dimension mismatch");
  const std::size_t np = grid.size();
  std::vector<double> table(size() * np);
  std::vector<double> vals(size());
  for (std::size_t p = 0; p < np; ++p) {
    evaluate(grid.point(p), vals.data());
    for (std::size_t j = 0; j < size(); ++j) table[j * np + p] = vals[j];
  }
  return table;
}

std::vector<double> HarmonicBasis::project(const SpherePoly& u) const {
  if (u.dim() != n_) throw std::invalid_argument("dimension mismatch");
  std::vector<double> coef(size(), 0.0);
  const double vol = sphere_volume(n_);
  for (std::size_t j = 0; j < size(); ++j) {
    Poly comp = u.component(degree(j));
    if (comp.is_zero()) continue;
    Rational mean = integrate_poly(n_, comp * polynomial(j)).mean;
    coef[j] = to_double(mean) * vol * scale_[j];
  }
  return coef;
}

std::vector<double> HarmonicBasis::project_values(const SphereGrid& grid, const std::vector<double>& values) const {
  if (values.size() != grid.size()) throw std::invalid_argument("value count does not match grid");
  std::size_t p = 0;
  return project_function(grid, [&](const double*) { return values[p++]; });
}

double HarmonicBasis::evaluate_expansion(const std::vector<double>& coef, const double* x) const {
  std::vector<double> vals(size());
  evaluate(x, vals.data());
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) s += coef[j] * vals[j];
  return s;
}

std::vector<std::vector<Rational>> exact_gram_block(int n, int l) {
  std::vector<Poly> polys;
  for (const auto& idx : harmonic_indices(n, l)) {
    if (idx.degree() == l) polys.push_back(harmonic_polynomial(n, idx));
  }
  std::vector<std::vector<Rational>> gram(polys.size(), std::vector<Rational>(polys.size()));
  for (std::size_t a = 0; a < polys.size(); ++a) {
    for (std::size_t b = a; b < polys.size(); ++b) {
      gram[a][b] = integrate_poly(n, polys[a] * polys[b]).mean;
      gram[b][a] = gram[a][b];
    }
  }
  return gram;
}

}  // namespace conflab
