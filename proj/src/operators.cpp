#include "conflab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <stdexcept>

namespace conflab {

namespace {

// Exponent vectors in n + 1 variables of total degree <= degree.
std::vector<Multi> multis_up_to(int n, int degree) {
  std::vector<Multi> out;
  Multi m{};
  while (true) {
    out.push_back(m);
    int i = 0;
    for (; i <= n; ++i) {
      ++m[i];
      if (conflab::degree(m) <= degree) break;
      m[i] = 0;
    }
    if (i > n) return out;
  }
}

Rational frac_to_q(const Frac& f) { return f.to_rational(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::vector<AmbientElement> laplacian_powers(const AmbientElement& u, int k) {
  std::vector<AmbientElement> out{u};
  for (int i = 1; i <= k; ++i) out.push_back(ambient_laplacian(out.back()));
  return out;
}

// Symmetric trilinear form from a cubic one by finite-difference polarization.
AmbientElement polarize_cubic(const std::function<AmbientElement(const AmbientElement&)>& cubic,
                              const AmbientElement& a, const AmbientElement& b, const AmbientElement& c) {
  AmbientElement s = cubic(a + b + c);
  s -= cubic(a + b);
  s -= cubic(a + c);
  s -= cubic(b + c);
  s += cubic(a);
  s += cubic(b);
  s += cubic(c);
  return s.scaled(ratio(1, 6));
}

AmbientElement sigma2_cubic(int n, const AmbientElement& u) {
  AmbientElement u2 = u * u;
  AmbientElement lu = ambient_laplacian(u);
  AmbientElement r = (u * ambient_laplacian_power(u2, 2)).scaled(ratio(-(n - 2), 16));
  r += (ambient_laplacian_power(u2 * u, 2) + (u2 * ambient_laplacian_power(lu, 1)).scaled(3))
           .scaled(ratio(n, 96));
  r += (u * lu * lu + ambient_laplacian(u2 * lu)).scaled(ratio(n - 4, 16));
  return r;
}

}  // namespace

Frac OperatorHandle::output_weight() const {
  Frac w(0);
  for (const auto& a : input_weights) w += a;
  return w - Frac(2 * k);
}

AmbientElement OperatorHandle::apply_ambient(const std::vector<AmbientElement>& extensions) const {
  if (static_cast<int>(extensions.size()) != arity()) throw std::invalid_argument(name + ": arity mismatch");
  return ambient(extensions);
}

SpherePoly OperatorHandle::evaluate(const std::vector<SpherePoly>& args) const {
  if (static_cast<int>(args.size()) != arity()) throw std::invalid_argument(name + ": arity mismatch");
  std::vector<AmbientElement> ext;
  ext.reserve(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].dim() != n) throw std::invalid_argument(name + ": dimension mismatch");
    ext.push_back(extend(args[i], input_weights[i]));
  }
  return restrict_to_sphere(ambient(ext));
}

SpherePoly OperatorHandle::evaluate_diagonal(const SpherePoly& u) const {
  return evaluate(std::vector<SpherePoly>(arity(), u));
}

Rational case_yan_coefficient(int n, int k, const Rational& w, const Rational& wprime, int a) {
  const int b = k - a;
  Rational base_a = ratio(n - 2 * k, 2) + w;
  Rational base_b = -w - wprime - ratio(n - 2 * k, 2);
  Rational c = factorial(k) / (factorial(a) * factorial(b));
  return c * pochhammer(base_a, a) * pochhammer(base_b, b);
}

AmbientElement case_yan_ambient(int n, int k, Frac w, const AmbientElement& f, const AmbientElement& u) {
  if (f.is_zero() || u.is_zero()) return AmbientElement(n);
  auto wf = f.weight();
  if (!wf) throw std::invalid_argument("case_yan: coefficient function must be homogeneous");
  const Rational wq = frac_to_q(w);
  const Rational wp = frac_to_q(*wf);
  auto lu = laplacian_powers(u, k);
  AmbientElement out(n);
  for (int a = 0; a <= k; ++a) {
    Rational c = case_yan_coefficient(n, k, wq, wp, a);
    if (sgn(c) == 0) continue;
    out += ambient_laplacian_power(f * lu[k - a], a).scaled(c);
  }
  return out;
}

Rational ovsienko_redou_coefficient(int n, int k, int a, int b, int c) {
  Rational al = ratio(n - 2 * k, 6);
  Rational r = factorial(k) / (factorial(a) * factorial(b) * factorial(c));
  r *= pochhammer(al, a + b) * pochhammer(al, a + c) * pochhammer(al, b + c);
  Rational d = pochhammer(al, k);
  return r / (d * d);
}

Rational or_prime_coefficient(int n, int k, int a, int b, int c) {
  Rational be = ratio(n - 2 * k - 2, 6);
  Rational r = factorial(k) / (factorial(a) * factorial(b) * factorial(c));
  r *= pochhammer(be + 1, a + b) * pochhammer(be, a + c) * pochhammer(be, b + c);
  Rational d = pochhammer(be + 1, k);
  return r / (be * d * d);
}

Rational or_prime_single_sum_u(int n, int k, int a, int b) {
  Rational be = ratio(n - 2 * k - 2, 6);
  Rational d = pochhammer(be + 1, k);
  Rational r = factorial(k) / (factorial(a) * factorial(b));
  r *= pochhammer(be + 1, a) * pochhammer(be, b) * pochhammer(be, b);
  return r / (be * d * d);
}

Rational or_prime_single_sum_v(int n, int k, int a, int b) {
  Rational be = ratio(n - 2 * k - 2, 6);
  Rational d = pochhammer(be + 1, k);
  Rational r = factorial(k) / (factorial(a) * factorial(b));
  r *= pochhammer(be, a) * pochhammer(be, b) * pochhammer(be + 1, b);
  return r / (be * d * d);
}

Rational gjms_eigenvalue(int n, int k, int l) {
  require(k >= 0, "gjms: k must be nonnegative");
  require(2 * k < n || (n % 2 == 0 && 2 * k <= n), "gjms: requires n > 2k, or n even with k <= n/2");
  Rational r = 1;
  for (int j = 0; j < k; ++j) r *= Rational(l * (l + n - 1)) + ratio((n - 2 * j - 2) * (n + 2 * j), 4);
  r.canonicalize();
  return r;
}

Rational q_curvature(int n, int k) {
  require(2 * k < n, "Q-curvature requires n > 2k");
  return 2 * gjms_eigenvalue(n, k, 0) / (n - 2 * k);
}

HandlePtr gjms(int n, int k) {
  require(k >= 0, "gjms: k must be nonnegative");
  require(2 * k < n || (n % 2 == 0 && 2 * k <= n), "gjms: requires n > 2k, or n even with k <= n/2");
  auto h = std::make_shared<OperatorHandle>();
  h->name = "gjms:" + std::to_string(k);
  h->rank = 2;
  h->k = k;
  h->n = n;
  h->input_weights = {Frac(-(n - 2 * k), 2)};
  h->ambient = [k](const std::vector<AmbientElement>& a) { return ambient_laplacian_power(a[0], k); };
  return h;
}

HandlePtr gjms_rank4(int n, int k) {
  require(k >= 1 && 2 * k < n, "gjms4: requires 1 <= k and 2k < n");
  auto h = std::make_shared<OperatorHandle>();
  h->name = "gjms4:" + std::to_string(k);
  h->rank = 4;
  h->k = k;
  h->n = n;
  const Frac w(-(n - 2 * k), 4);
  h->input_weights = {w, w, w};
  const Rational c = ratio((n - 2 * k) * (n - 2 * k), 32) / 3;
  h->ambient = [k, c](const std::vector<AmbientElement>& a) {
    AmbientElement r = a[0] * ambient_laplacian_power(a[1] * a[2], k);
    r += a[1] * ambient_laplacian_power(a[0] * a[2], k);
    r += a[2] * ambient_laplacian_power(a[0] * a[1], k);
    return r.scaled(c);
  };
  return h;
}

HandlePtr case_yan(int n, int k, Frac w, const AmbientElement& f) {
  require(k >= 0, "case_yan: k must be nonnegative");
  require(f.is_zero() || f.weight().has_value(), "case_yan: f must be homogeneous");
  auto h = std::make_shared<OperatorHandle>();
  h->name = "case_yan:" + std::to_string(k);
  h->rank = 2;
  h->k = k;
  h->n = n;
  h->input_weights = {w};
  h->self_adjoint = false;
  h->ambient = [n, k, w, f](const std::vector<AmbientElement>& a) { return case_yan_ambient(n, k, w, f, a[0]); };
  return h;
}

HandlePtr ovsienko_redou(int n, int k) {
  require(k >= 0 && 2 * k < n, "or: requires n > 2k");
  auto h = std::make_shared<OperatorHandle>();
  h->name = "or:" + std::to_string(k);
  h->rank = 3;
  h->k = k;
  h->n = n;
  const Frac w(-(n - 2 * k), 3);
  h->input_weights = {w, w};
  std::vector<std::vector<Rational>> coef(k + 1, std::vector<Rational>(k + 1));
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; a + b <= k; ++b) coef[a][b] = ovsienko_redou_coefficient(n, k, a, b, k - a - b);
  }
  h->ambient = [n, k, coef](const std::vector<AmbientElement>& x) {
    auto lu = laplacian_powers(x[0], k);
    auto lv = laplacian_powers(x[1], k);
    AmbientElement out(n);
    for (int a = 0; a <= k; ++a) {
      AmbientElement inner(n);
      for (int b = 0; a + b <= k; ++b) inner += (lu[b] * lv[k - a - b]).scaled(coef[a][b]);
      out += ambient_laplacian_power(inner, a);
    }
    return out;
  };
  h->constraints.push_back(identity_constraint(n, w));
  return h;
}

HandlePtr or_prime(int n, int k) {
  require(k >= 0 && n > 2 * k + 2, "or_prime: requires n > 2k + 2");
  auto h = std::make_shared<OperatorHandle>();
  h->name = "or_prime:" + std::to_string(k);
  h->rank = 3;
  h->k = k;
  h->n = n;
  h->input_weights = {Frac(-(n - 2 * k + 1), 3), Frac(-(n - 2 * k - 2), 3)};
  h->self_adjoint = false;
  std::vector<std::vector<Rational>> coef(k + 1, std::vector<Rational>(k + 1));
  for (int a = 0; a <= k; ++a) {
    for (int b = 0; a + b <= k; ++b) coef[a][b] = or_prime_coefficient(n, k, a, b, k - a - b);
  }
  h->ambient = [n, k, coef](const std::vector<AmbientElement>& x) {
    auto lu = laplacian_powers(x[0], k);
    auto lv = laplacian_powers(x[1], k);
    AmbientElement out(n);
    for (int a = 0; a <= k; ++a) {
      AmbientElement inner(n);
      for (int b = 0; a + b <= k; ++b) inner += (lu[b] * lv[k - a - b]).scaled(coef[a][b]);
      out += ambient_laplacian_power(inner, a);
    }
    return out;
  };
  return h;
}

HandlePtr sigma2_ambient(int n) {
  require(n >= 3 && n != 4, "sigma2: requires n >= 3 and n != 4");
  auto h = std::make_shared<OperatorHandle>();
  h->name = "sigma2";
  h->rank = 4;
  h->k = 2;
  h->n = n;
  const Frac w(-(n - 4), 4);
  h->input_weights = {w, w, w};
  h->ambient = [n](const std::vector<AmbientElement>& a) {
    return polarize_cubic([n](const AmbientElement& u) { return sigma2_cubic(n, u); }, a[0], a[1], a[2]);
  };
  h->constraints.push_back(sigma2_constraint(n));
  return h;
}

HandlePtr sigma2_constraint(int n) {
  require(n >= 3 && n != 4, "sigma2 constraint: requires n >= 3 and n != 4");
  auto h = std::make_shared<OperatorHandle>();
  h->name = "sigma2_constraint";
  h->rank = 3;
  h->k = 1;
  h->n = n;
  const Frac w(-(n - 4), 4);
  h->input_weights = {w, w};
  // Weight -(n-4)/4 is not the self-adjoint weight -(n-2)/3 of a rank-3 operator.
  h->self_adjoint = false;
  h->ambient = [n](const std::vector<AmbientElement>& a) {
    AmbientElement r = ambient_laplacian(a[0] * a[1]).scaled(n);
    r -= (a[0] * ambient_laplacian(a[1]) + a[1] * ambient_laplacian(a[0])).scaled(4);
    return r;
  };
  return h;
}

HandlePtr identity_constraint(int n, Frac w) {
  auto h = std::make_shared<OperatorHandle>();
  h->name = "identity";
  h->rank = 2;
  h->k = 0;
  h->n = n;
  h->input_weights = {w};
  h->ambient = [](const std::vector<AmbientElement>& a) { return a[0]; };
  return h;
}

SpherePoly sigma2_intrinsic_round(int n, const SpherePoly& u) {
  require(n >= 3 && n != 4, "sigma2: requires n >= 3 and n != 4");
  const RoundSphereData geo = RoundSphereData::make(n);
  const Rational c = ratio(n - 4, 4);
  const SpherePoly u2 = u * u;
  const SpherePoly grad2 = gradient_pairing(u, u);
  SpherePoly r = divergence_term(grad2, u).scaled(ratio(-1, 2));
  r += (u * laplacian_sphere(grad2) + divergence_term(laplacian_sphere(u2), u)).scaled(ratio(n - 4, 16));
  r += (u * laplacian_sphere(u2)).scaled(ratio(1, 2) * c * c * geo.t1_multiple);
  r += (u2 * u).scaled(c * c * c * geo.sigma2);
  return r;
}

SphereIntegral inner_product(const SpherePoly& u, const SpherePoly& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("dimension mismatch");
  SphereIntegral r{u.dim(), 0};
  for (const auto& [d, h] : u.components()) {
    Poly g = v.component(d);
    if (g.is_zero()) continue;
    r.mean += integrate_poly(u.dim(), h * g).mean;
  }
  return r;
}

SphereIntegral dirichlet(const OperatorHandle& h, const std::vector<SpherePoly>& args) {
  if (static_cast<int>(args.size()) != h.rank) throw std::invalid_argument(h.name + ": arity mismatch");
  std::vector<SpherePoly> rest(args.begin() + 1, args.end());
  return inner_product(args[0], h.evaluate(rest));
}

namespace {

SphereGrid default_cone_grid(int n) {
  if (n <= 3) return gauss_grid(n, 16, 32);
  if (n == 4) return gauss_grid(n, 10, 20);
  if (n == 5) return gauss_grid(n, 8, 16);
  return qmc_grid(n, 20000);
}

// Projected gradient descent for min of p on the unit sphere.
double refine_minimum(const Poly& p, std::vector<double> x) {
  const int nv = p.nvars();
  std::vector<Poly> grad;
  for (int i = 0; i < nv; ++i) grad.push_back(p.partial(i));
  double f = p.evaluate(x.data());
  double step = 0.1;
  for (int it = 0; it < 200 && step > 1e-14; ++it) {
    std::vector<double> g(nv);
    double dot = 0.0;
    for (int i = 0; i < nv; ++i) {
      g[i] = grad[i].evaluate(x.data());
      dot += g[i] * x[i];
    }
    for (int i = 0; i < nv; ++i) g[i] -= dot * x[i];
    std::vector<double> y(nv);
    double norm = 0.0;
    for (int i = 0; i < nv; ++i) {
      y[i] = x[i] - step * g[i];
      norm += y[i] * y[i];
    }
    norm = std::sqrt(norm);
    for (auto& v : y) v /= norm;
    double fy = p.evaluate(y.data());
    if (fy < f) {
      x = std::move(y);
      f = fy;
      step *= 1.5;
    } else {
      step *= 0.5;
    }
  }
  return f;
}

}  // namespace

ConeMembership cone_membership(const OperatorHandle& h, const SpherePoly& u, const SphereGrid& grid) {
  ConeMembership out;
  out.method = grid.description + " + projected-gradient refinement";
  out.witness_min = std::numeric_limits<double>::infinity();
  if (h.constraints.empty()) {
    out.method = "no constraints";
    return out;
  }
  for (const auto& c : h.constraints) {
    Poly p = c->evaluate_diagonal(u).to_poly();
    std::size_t best = 0;
    double fmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      double v = p.evaluate(grid.point(i));
      if (v < fmin) {
        fmin = v;
        best = i;
      }
    }
    if (p.nvars() > 0 && grid.size() > 0) {
      std::vector<double> x(grid.point(best), grid.point(best) + grid.n + 1);
      fmin = std::min(fmin, refine_minimum(p, x));
    }
    out.witness_min = std::min(out.witness_min, fmin);
  }
  out.member = out.witness_min > 0.0;
  return out;
}

ConeMembership cone_membership(const OperatorHandle& h, const SpherePoly& u) {
  return cone_membership(h, u, default_cone_grid(h.n));
}

SpherePoly random_sphere_poly(int n, int degree, std::mt19937_64& rng, int max_terms) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::vector<PolyTerm> terms;
  for (const Multi& m : multis_up_to(n, degree)) {
    if (const int c = coeff(rng); c != 0) terms.push_back({m, Rational(c)});
  }
  if (max_terms > 0) {
    std::shuffle(terms.begin(), terms.end(), rng);
    if (static_cast<int>(terms.size()) > max_terms) terms.resize(max_terms);
  }
  return SpherePoly::from_poly(n, Poly::from_terms(n + 1, std::move(terms)));
}

namespace {

std::vector<SpherePoly> monomials_up_to(int n, int degree) {
  std::vector<SpherePoly> out;
  for (const Multi& m : multis_up_to(n, degree)) out.push_back(SpherePoly::from_poly(n, Poly::monomial(n + 1, m)));
  return out;
}

}  // namespace

ExactCheck check_tangentiality(const OperatorHandle& h, int degree, std::uint64_t seed) {
  ExactCheck out;
  out.name = h.name + " tangentiality";
  std::mt19937_64 rng(seed);
  const auto basis = monomials_up_to(h.n, degree);
  const AmbientElement Q = AmbientElement::defining_function(h.n);
  for (int slot = 0; slot < h.arity(); ++slot) {
    const Frac wp = h.input_weights[slot] - Frac(2);
    for (const SpherePoly& u : basis) {
      std::vector<SpherePoly> args;
      for (int j = 0; j < h.arity(); ++j) args.push_back(j == slot ? u : random_sphere_poly(h.n, 1, rng));
      std::vector<AmbientElement> ext;
      for (int j = 0; j < h.arity(); ++j) ext.push_back(extend(args[j], h.input_weights[j]));
      const AmbientElement g = extend(random_sphere_poly(h.n, 1, rng), wp) + AmbientElement::q_power(h.n, wp * Frac(1, 2));
      const SpherePoly base = restrict_to_sphere(h.apply_ambient(ext));
      ext[slot] += Q * g;
      ++out.checked;
      if (!(restrict_to_sphere(h.apply_ambient(ext)) == base)) ++out.failures;
    }
  }
  return out;
}

ExactCheck check_self_adjointness(const OperatorHandle& h, int samples, int degree, int max_terms,
                                  std::uint64_t seed) {
  ExactCheck out;
  out.name = h.name + " self-adjointness";
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    std::vector<SpherePoly> args;
    for (int j = 0; j < h.rank; ++j) args.push_back(random_sphere_poly(h.n, degree, rng, max_terms));
    std::vector<int> perm(h.rank);
    std::iota(perm.begin(), perm.end(), 0);
    const Rational reference = dirichlet(h, args).mean;
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::vector<SpherePoly> permuted;
      for (int j : perm) permuted.push_back(args[j]);
      ++out.checked;
      if (dirichlet(h, permuted).mean != reference) ++out.failures;
    }
  }
  return out;
}

HandlePtr handle_from_selector(const std::string& selector, int n) {
  auto colon = selector.find(':');
  std::string kind = selector.substr(0, colon);
  int k = 0;
  if (colon != std::string::npos) {
    try {
      std::size_t used = 0;
      k = std::stoi(selector.substr(colon + 1), &used);
      if (used != selector.size() - colon - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed operator selector: " + selector);
    }
  }
  if (kind == "gjms" && colon != std::string::npos) return gjms(n, k);
  if (kind == "gjms4" && colon != std::string::npos) return gjms_rank4(n, k);
  if (kind == "or" && colon != std::string::npos) return ovsienko_redou(n, k);
  if (kind == "sigma2" && colon == std::string::npos) return sigma2_ambient(n);
  throw std::invalid_argument("unknown operator selector: " + selector);
}

}  // namespace conflab
