#include "conflab/yamabe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "conflab/commutators.hpp"

namespace conflab {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::optional<int> even_integer(double p) {
  const double r = std::round(p);
  if (std::abs(p - r) > 1e-12 || static_cast<long>(r) % 2 != 0) return std::nullopt;
  return static_cast<int>(r);
}

// |x|^p, by repeated squaring when p is a small integer.
double abs_pow(double x, double p, int ip) {
  if (ip < 0) return std::pow(std::abs(x), p);
  double base = std::abs(x);
  double r = 1.0;
  for (int e = ip; e > 0; e >>= 1) {
    if (e & 1) r *= base;
    base *= base;
  }
  return r;
}

int integer_exponent(double p) {
  const double r = std::round(p);
  return std::abs(p - r) < 1e-12 && r >= 0 && r <= 64 ? static_cast<int>(r) : -1;
}

bool uniform_weights(const OperatorHandle& h) {
  return std::all_of(h.input_weights.begin(), h.input_weights.end(),
                     [&](const Frac& w) { return w == h.input_weights.front(); });
}

}  // namespace

double critical_exponent(const OperatorHandle& h) {
  if (h.n <= 2 * h.k) throw std::invalid_argument(h.name + ": critical exponent needs n > 2k");
  return static_cast<double>(h.rank * h.n) / (h.n - 2 * h.k);
}

SphereGrid grid_for_exponent(int n, int L, double p) {
  if (auto e = even_integer(p); e && n <= 5) {
    const int degree = *e * L;
    const int nodes = std::max(degree / 2 + 1, 2);
    const int az = degree + 2;
    const double count = std::pow(nodes, n - 1) * az;
    if (count <= 4e6) return gauss_grid(n, nodes, az);
  }
  return make_grid(n, QuadSpec{});
}

SpectralModel::SpectralModel(HandlePtr h, int L, double p)
    : SpectralModel(h, L, p, grid_for_exponent(h->n, L, p)) {}

SpectralModel::SpectralModel(HandlePtr h, int L, double p, SphereGrid grid)
    : h_(std::move(h)), basis_(h_->n, L), grid_(std::move(grid)), p_(p) {
  if (!h_->self_adjoint) throw std::invalid_argument(h_->name + ": the functional needs a self-adjoint handle");
  if (!(p_ > 1.0)) throw std::invalid_argument("norm exponent must exceed 1");
  table_ = basis_.tabulate(grid_);
  build_tensor();
}

void SpectralModel::build_tensor() {
  const std::size_t s = size();
  if (h_->rank == 2) {
    const auto spectrum = rank2_spectrum(*h_, basis_.max_degree());
    diag_.resize(s);
    for (std::size_t j = 0; j < s; ++j) diag_[j] = to_double(spectrum[basis_.degree(j)]);
    return;
  }
  const int r = h_->rank;
  const double total = std::pow(static_cast<double>(s), r);
  if (total > 2e7) throw std::invalid_argument(h_->name + ": Dirichlet tensor too large; lower the degree bound");
  std::vector<SpherePoly> h;
  for (std::size_t j = 0; j < s; ++j) {
    h.push_back(SpherePoly::from_components_unchecked(h_->n, basis_.degree(j), basis_.polynomial(j)));
  }
  tensor_.assign(static_cast<std::size_t>(total), 0.0);
  std::vector<std::size_t> idx(r - 1, 0);
  for (;;) {
    std::vector<SpherePoly> args;
    for (auto j : idx) args.push_back(h[j]);
    const SpherePoly image = h_->evaluate(args);
    double scale = 1.0;
    for (auto j : idx) scale *= basis_.scale(j);
    for (std::size_t j0 = 0; j0 <= idx.front(); ++j0) {
      const double value = inner_product(h[j0], image).value() * scale * basis_.scale(j0);
      std::vector<std::size_t> tuple{j0};
      tuple.insert(tuple.end(), idx.begin(), idx.end());
      do {
        std::size_t flat = 0;
        for (auto t : tuple) flat = flat * s + t;
        tensor_[flat] = value;
      } while (std::next_permutation(tuple.begin(), tuple.end()));
    }
    // Next nondecreasing index tuple.
    int pos = r - 2;
    while (pos >= 0 && idx[pos] + 1 == s) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos + 1; q < r - 1; ++q) idx[q] = idx[pos];
  }
}

std::vector<double> SpectralModel::dirichlet_gradient(const std::vector<double>& c) const {
  const std::size_t s = size();
  if (c.size() != s) throw std::invalid_argument("coefficient count mismatch");
  const int r = h_->rank;
  std::vector<double> out(s);
  if (r == 2) {
    for (std::size_t j = 0; j < s; ++j) out[j] = 2.0 * diag_[j] * c[j];
    return out;
  }
  std::vector<double> cur = tensor_;
  std::size_t len = cur.size();
  for (int level = 0; level < r - 1; ++level) {
    const std::size_t next = len / s;
    std::vector<double> red(next, 0.0);
    for (std::size_t a = 0; a < next; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < s; ++b) acc += cur[a * s + b] * c[b];
      red[a] = acc;
    }
    cur = std::move(red);
    len = next;
  }
  for (std::size_t j = 0; j < s; ++j) out[j] = r * cur[j];
  return out;
}

double SpectralModel::dirichlet(const std::vector<double>& c) const {
  const auto g = dirichlet_gradient(c);
  double acc = 0.0;
  for (std::size_t j = 0; j < size(); ++j) acc += g[j] * c[j];
  return acc / h_->rank;
}

std::vector<double> SpectralModel::values(const std::vector<double>& c) const {
  const std::size_t np = grid_.size();
  std::vector<double> v(np, 0.0);
  for (std::size_t j = 0; j < size(); ++j) {
    if (c[j] == 0.0) continue;
    const double* row = table_.data() + j * np;
    for (std::size_t p = 0; p < np; ++p) v[p] += c[j] * row[p];
  }
  return v;
}

double SpectralModel::norm_power(const std::vector<double>& values) const {
  std::vector<double> terms(values.size());
  const int ip = integer_exponent(p_);
  for (std::size_t p = 0; p < values.size(); ++p) terms[p] = abs_pow(values[p], p_, ip) * grid_.weights[p];
  return pairwise_sum(terms);
}

double SpectralModel::functional(const std::vector<double>& c) const {
  const double N = norm_power(values(c));
  if (!(N > 0.0)) throw std::invalid_argument("functional: zero-norm state");
  return dirichlet(c) / std::pow(N, h_->rank / p_);
}

std::vector<double> SpectralModel::gradient(const std::vector<double>& c) const {
  const auto v = values(c);
  const double N = norm_power(v);
  if (!(N > 0.0)) throw std::invalid_argument("gradient: zero-norm state");
  const int r = h_->rank;
  auto g = dirichlet_gradient(c);
  const double D = dirichlet(c);
  const std::size_t np = grid_.size();
  std::vector<double> weighted(np);
  const int ip = integer_exponent(p_ - 2.0);
  for (std::size_t p = 0; p < np; ++p) weighted[p] = abs_pow(v[p], p_ - 2.0, ip) * v[p] * grid_.weights[p];
  const double scale = std::pow(N, -r / p_);
  std::vector<double> terms(np);
  for (std::size_t j = 0; j < size(); ++j) {
    const double* row = table_.data() + j * np;
    for (std::size_t p = 0; p < np; ++p) terms[p] = weighted[p] * row[p];
    const double proj = pairwise_sum(terms);
    // g already carries the factor r from differentiating D.
    g[j] = scale * (g[j] - r * D / N * proj);
  }
  return g;
}

std::vector<double> SpectralModel::constant_state(double value) const {
  std::vector<double> c(size(), 0.0);
  c[0] = value / basis_.scale(0);
  return c;
}

SpherePoly SpectralModel::to_sphere_poly(const std::vector<double>& c) const {
  SpherePoly u(h_->n);
  for (std::size_t j = 0; j < size(); ++j) {
    if (c[j] == 0.0) continue;
    const Rational coeff(c[j] * basis_.scale(j));
    u += SpherePoly::from_components_unchecked(h_->n, basis_.degree(j), basis_.polynomial(j).scaled(coeff));
  }
  return u;
}

SphereFunction SpectralModel::function(const std::vector<double>& c) const {
  auto basis = std::make_shared<HarmonicBasis>(basis_);
  return [basis, c](const double* x) { return basis->evaluate_expansion(c, x); };
}

std::vector<double> perturbed_constant(const SpectralModel& model, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto c = model.constant_state(1.0);
  const double unit = c[0];
  for (std::size_t j = 1; j < c.size(); ++j) {
    // Uniform in [-1, 1) from the top 53 bits, independent of the library's distributions.
    const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    c[j] = amplitude * unit * x;
  }
  return c;
}

namespace {

bool in_cone(const SpectralModel& model, const std::vector<double>& c) {
  if (model.handle().constraints.empty()) return true;
  return cone_membership(model.handle(), model.to_sphere_poly(c)).member;
}

void normalize(const SpectralModel& model, std::vector<double>& c) {
  const double N = model.norm_power(model.values(c));
  const double f = std::pow(N, -1.0 / model.exponent());
  for (auto& x : c) x *= f;
}

}  // namespace

YamabeResult minimize(const SpectralModel& model, std::vector<double> init, const MinimizeOptions& opt) {
  if (init.size() != model.size()) throw std::invalid_argument("minimize: coefficient count mismatch");
  const OperatorHandle& h = model.handle();
  YamabeResult res;
  const bool conformal = std::abs(model.exponent() - critical_exponent(h)) < 1e-12 && uniform_weights(h);
  const Frac w = h.input_weights.front();

  std::vector<double> c = std::move(init);
  for (int tries = 0; !in_cone(model, c); ++tries) {
    if (tries == 60) throw std::runtime_error("minimize: initial state cannot be projected into the cone");
    for (std::size_t j = 1; j < c.size(); ++j) {
      if (model.basis().degree(j) > 0) c[j] *= 0.5;
    }
    ++res.cone_projections;
  }
  normalize(model, c);
  double F = model.functional(c);
  res.trace.push_back(F);

  for (int it = 0; it < opt.max_iterations; ++it) {
    if (conformal && opt.rebalance_every > 0 && it > 0 && it % opt.rebalance_every == 0) {
      const auto bal = balance(model.function(c), w, model.grid());
      auto refit = model.basis().project_function(model.grid(), act(model.function(c), bal.phi, w));
      if (in_cone(model, refit)) {
        normalize(model, refit);
        const double Fr = model.functional(refit);
        if (Fr <= F) {
          c = std::move(refit);
          F = Fr;
          ++res.rebalances_accepted;
        }
      }
    }
    const auto g = model.gradient(c);
    res.gradient_norm = norm2(g);
    if (res.gradient_norm < opt.tolerance) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    for (double step = 1.0; step > 1e-15; step *= 0.5) {
      std::vector<double> trial(c);
      for (std::size_t j = 0; j < c.size(); ++j) trial[j] -= step * g[j] / res.gradient_norm;
      const double Ft = model.functional(trial);
      if (Ft <= F - opt.armijo * step * res.gradient_norm && in_cone(model, trial)) {
        normalize(model, trial);
        c = std::move(trial);
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Near the minimum the decrease in F drops below its roundoff, so
      // Armijo cannot see it. Solve phi'(alpha) = 0 along d = -g / |g| by a
      // secant on the directional derivative instead, and accept the step
      // when it reduces the gradient norm.
      const double s = 1e-4;
      std::vector<double> probe(c);
      for (std::size_t j = 0; j < c.size(); ++j) probe[j] -= s * g[j] / res.gradient_norm;
      const auto gp = model.gradient(probe);
      double slope = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) slope -= gp[j] * g[j] / res.gradient_norm;
      const double d0 = -res.gradient_norm;
      if (slope > d0) {
        const double alpha = s * d0 / (d0 - slope);
        std::vector<double> trial(c);
        for (std::size_t j = 0; j < c.size(); ++j) trial[j] -= alpha * g[j] / res.gradient_norm;
        if (in_cone(model, trial)) {
          normalize(model, trial);
          if (norm2(model.gradient(trial)) < res.gradient_norm) {
            c = std::move(trial);
            F = model.functional(c);
            accepted = true;
            ++res.secant_steps;
          }
        }
      }
    }
    ++res.iterations;
    if (!accepted) break;
    res.trace.push_back(F);
  }
  if (!res.converged) res.gradient_norm = norm2(model.gradient(c));

  res.coefficients = c;
  res.value = F;
  res.cone_member = in_cone(model, c);
  const auto vals = model.values(c);
  res.min_value = *std::min_element(vals.begin(), vals.end());

  if (conformal) {
    const auto bal = balance(model.function(c), w, model.grid());
    res.balance_residual = bal.residual_norm;
    const SphereFunction v = act(model.function(c), bal.phi, w);
    const SphereGrid& grid = model.grid();
    std::vector<double> bv(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) bv[p] = v(grid.point(p));
    const double mean = grid_norm(grid, bv, model.exponent()) / std::pow(sphere_volume(h.n), 1.0 / model.exponent());
    const auto [lo, hi] = std::minmax_element(bv.begin(), bv.end());
    res.sup_distance = (*hi - *lo) / 2.0 / mean;
  }
  return res;
}

EigenvalueResult first_nonlinear_eigenvalue(HandlePtr h, int L, std::uint64_t seed, const MinimizeOptions& opt) {
  SpectralModel model(h, L, static_cast<double>(h->rank));
  MinimizeOptions o = opt;
  o.rebalance_every = 0;
  EigenvalueResult out;
  out.run = minimize(model, perturbed_constant(model, 0.05, seed), o);
  out.lambda = out.run.value;
  return out;
}

namespace {

// int v^2 |u|^{r*}: exact for even integer r*, otherwise by quadrature.
double weighted_moment(const SpherePoly& v, const SpherePoly& u, double rstar, const SphereGrid* grid) {
  const int n = u.dim();
  if (auto e = even_integer(rstar)) {
    const Poly vp = v.to_poly();
    return integrate_poly(n, vp * vp * u.to_poly().pow(*e)).value();
  }
  if (!grid) throw std::invalid_argument("second variation: a grid is needed for non-even r*");
  const Poly up = u.to_poly();
  const Poly vp = v.to_poly();
  std::vector<double> terms(grid->size());
  for (std::size_t p = 0; p < grid->size(); ++p) {
    const double* x = grid->point(p);
    const double a = vp.evaluate(x);
    terms[p] = a * a * std::pow(std::abs(up.evaluate(x)), rstar) * grid->weights[p];
  }
  return pairwise_sum(terms);
}

}  // namespace

std::vector<double> second_variation_probe(const OperatorHandle& h, const SpherePoly& u,
                                           const std::optional<SphereGrid>& grid) {
  if (u.is_zero()) throw std::invalid_argument("second variation: u = 0");
  const int r = h.rank;
  const int n = h.n;
  const double rstar = critical_exponent(h);
  std::optional<SphereGrid> g = grid;
  if (!g && !even_integer(rstar)) g = make_grid(n, QuadSpec{});
  const SpherePoly one = SpherePoly::constant(n, 1);
  const double norm = std::pow(weighted_moment(one, u, rstar, g ? &*g : nullptr), 1.0 / rstar);
  const double s = 1.0 / norm;
  const double energy = dirichlet(h, std::vector<SpherePoly>(r, u)).value();
  const double c = static_cast<double>((r - 1) * n + 2 * h.k) / ((r - 1) * (n - 2 * h.k));
  std::vector<double> out;
  for (int i = 0; i <= n; ++i) {
    const SpherePoly v = SpherePoly::coordinate(n, i);
    const SpherePoly uv = u * v;
    std::vector<SpherePoly> args{uv, uv};
    args.insert(args.end(), r - 2, u);
    const double first = dirichlet(h, args).value() * std::pow(s, r);
    const double moment = weighted_moment(v, u, rstar, g ? &*g : nullptr) * std::pow(s, rstar);
    out.push_back(first - c * energy * std::pow(s, r) * moment);
  }
  return out;
}

VariationSumIdentity second_variation_sum_identity(const OperatorHandle& h, const SpherePoly& u) {
  const int r = h.rank;
  const int n = h.n;
  VariationSumIdentity out{{n, 0}, {n, 0}};
  for (int i = 0; i <= n; ++i) {
    const SpherePoly xu = SpherePoly::coordinate(n, i) * u;
    std::vector<SpherePoly> args{xu, xu};
    args.insert(args.end(), r - 2, u);
    out.lhs.mean += dirichlet(h, args).mean;
  }
  const std::vector<SpherePoly> rest(r - 2, u);
  out.rhs.mean = dirichlet(h, std::vector<SpherePoly>(r, u)).mean + inner_product(u, ambient_commutator(h, u, rest)).mean;
  return out;
}

}  // namespace conflab
