#include "conflab/commutators.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "conflab/harmonic_basis.hpp"

namespace conflab {

namespace {

double max_abs_coefficient(const SpherePoly& p) {
  double m = 0.0;
  for (const auto& [d, h] : p.components()) {
    for (const auto& t : h.terms()) m = std::max(m, std::abs(to_double(t.coeff)));
  }
  return m;
}

// First nonzero coefficient of p, scanning components in degree order.
std::optional<std::pair<int, PolyTerm>> leading_term(const SpherePoly& p) {
  for (const auto& [d, h] : p.components()) {
    if (!h.terms().empty()) return std::make_pair(d, h.terms().front());
  }
  return std::nullopt;
}

// Tracks whether lhs = lambda * base for one lambda across all samples.
class ProportionalityFit {
 public:
  void add(const SpherePoly& lhs, const SpherePoly& base) {
    if (!consistent_) return;
    auto lead = leading_term(base);
    if (!lead) {
      if (!lhs.is_zero()) consistent_ = false;
      return;
    }
    Rational ratio;
    {
      const Poly comp = lhs.component(lead->first);
      ratio = 0;
      for (const auto& t : comp.terms()) {
        if (t.exps == lead->second.exps) ratio = t.coeff / lead->second.coeff;
      }
    }
    if (!(lhs == base.scaled(ratio))) {
      consistent_ = false;
      return;
    }
    if (lambda_ && *lambda_ != ratio) {
      consistent_ = false;
      return;
    }
    lambda_ = ratio;
  }
  std::optional<Rational> value() const { return consistent_ ? lambda_ : std::nullopt; }

 private:
  bool consistent_ = true;
  std::optional<Rational> lambda_;
};

void record(CommutatorReport& rep, const SpherePoly& lhs, const SpherePoly& rhs, const std::string& label) {
  ++rep.basis_size;
  if (lhs == rhs) return;
  rep.exact_equal = false;
  rep.max_deviation = std::max(rep.max_deviation, max_abs_coefficient(lhs - rhs));
  if (rep.failures.size() < 8) rep.failures.push_back(label);
}

}  // namespace

SpherePoly ambient_commutator(const OperatorHandle& h, const SpherePoly& u, const std::vector<SpherePoly>& vs) {
  if (static_cast<int>(vs.size()) + 1 != h.arity()) throw std::invalid_argument(h.name + ": arity mismatch");
  const int n = h.n;
  std::vector<AmbientElement> args(h.arity(), AmbientElement(n));
  for (std::size_t j = 0; j < vs.size(); ++j) args[j + 1] = extend(vs[j], h.input_weights[j + 1]);
  const AmbientElement ut = extend(u, h.input_weights[0] - Frac(1));
  const AmbientElement t = AmbientElement::t_power(n, Frac(1));

  args[0] = t * ut;
  const AmbientElement d_tu = h.apply_ambient(args);
  AmbientElement total(n);
  for (int i = 0; i <= n; ++i) {
    const AmbientElement xi = AmbientElement::coordinate(n, i);
    args[0] = xi * ut;
    total += xi * t * h.apply_ambient(args);
    total -= xi * xi * d_tu;
  }
  return restrict_to_sphere(total);
}

SpherePoly direct_commutator(const OperatorHandle& h, const SpherePoly& u, const std::vector<SpherePoly>& vs) {
  if (static_cast<int>(vs.size()) + 1 != h.arity()) throw std::invalid_argument(h.name + ": arity mismatch");
  std::vector<SpherePoly> args{u};
  args.insert(args.end(), vs.begin(), vs.end());
  SpherePoly total = -h.evaluate(args);
  for (int i = 0; i <= h.n; ++i) {
    const SpherePoly xi = SpherePoly::coordinate(h.n, i);
    args[0] = xi * u;
    total += xi * h.evaluate(args);
  }
  return total;
}

std::vector<SpherePoly> monomial_inputs(int n, int degree) {
  std::vector<SpherePoly> out;
  const int nv = n + 1;
  Multi m{};
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == nv) {
      out.push_back(SpherePoly::from_poly(n, Poly::monomial(nv, m)));
      return;
    }
    for (int e = 0; e <= left; ++e) {
      m[var] = static_cast<std::uint8_t>(e);
      rec(var + 1, left - e);
    }
    m[var] = 0;
  };
  rec(0, degree);
  return out;
}

std::vector<SpherePoly> harmonic_samples(int n, int L) {
  std::vector<SpherePoly> out;
  SpherePoly mixed(n);
  for (int l = 0; l <= L; ++l) {
    HarmonicIndex zonal{std::vector<int>(n, 0), false};
    zonal.chain[0] = l;
    SpherePoly z = SpherePoly::from_components_unchecked(n, l, harmonic_polynomial(n, zonal));
    out.push_back(z);
    mixed += z;
    if (l > 0) {
      HarmonicIndex top{std::vector<int>(n, l), true};
      out.push_back(SpherePoly::from_components_unchecked(n, l, harmonic_polynomial(n, top)));
    }
  }
  out.push_back(mixed);
  return out;
}

CommutatorReport check_gjms_commutator(int n, int k, int L) {
  if (k < 1 || 2 * k >= n) throw std::invalid_argument("gjms commutator: requires 1 <= k and n > 2k");
  CommutatorReport rep;
  rep.identity = "gjms";
  rep.n = n;
  rep.k = k;
  const Rational c(k * (n + 2 * k - 2));
  rep.stated_constant = c;
  auto h = gjms(n, k);
  ProportionalityFit fit;
  for (const auto& u : harmonic_samples(n, L)) {
    const SpherePoly lhs = ambient_commutator(*h, u, {});
    SpherePoly base(n);
    for (const auto& [d, comp] : u.components()) {
      base += SpherePoly::from_components_unchecked(n, d, comp).scaled(gjms_eigenvalue(n, k - 1, d));
    }
    fit.add(lhs, base);
    record(rep, lhs, base.scaled(c), u.to_string());
  }
  rep.fitted_constant = fit.value();
  return rep;
}

CommutatorReport check_case_yan_commutator(int n, int k, Frac w, const AmbientElement& f, int degree) {
  if (k < 1) throw std::invalid_argument("case_yan commutator: requires k >= 1");
  CommutatorReport rep;
  rep.identity = "case_yan";
  rep.n = n;
  rep.k = k;
  if (f.is_zero()) {
    rep.basis_size = 0;
    return rep;
  }
  const auto wf = f.weight();
  if (!wf) throw std::invalid_argument("case_yan commutator: f must be homogeneous");
  const Rational wq = w.to_rational();
  const Rational wp = wf->to_rational();
  const Rational half = ratio(n - 2 * k, 2);
  const Rational c1 = -Rational(k) * (wp - k + 1) * (n + 2 * k - 2);
  const Rational c2 = Rational(2 * k * (k - 1)) * (half + wq + wp) * (half + wq);
  auto lhs_op = case_yan(n, k, w, f);
  auto first = case_yan(n, k - 1, w - Frac(1), f);
  HandlePtr second;
  if (k >= 2) second = case_yan(n, k - 2, w - Frac(1), ambient_laplacian(f));
  for (const auto& u : monomial_inputs(n, degree)) {
    const SpherePoly lhs = ambient_commutator(*lhs_op, u, {});
    SpherePoly rhs = first->evaluate({u}).scaled(c1);
    if (second && sgn(c2) != 0) rhs += second->evaluate({u}).scaled(c2);
    record(rep, lhs, rhs, u.to_string());
  }
  return rep;
}

CommutatorReport check_or_commutator(int n, int k, int degree) {
  if (k < 1 || 2 * k >= n) throw std::invalid_argument("or commutator: requires 1 <= k and n > 2k");
  CommutatorReport rep;
  rep.identity = "ovsienko_redou";
  rep.n = n;
  rep.k = k;
  const Rational c = ratio(k * (n + 2 * k - 2) * (n + k - 3), 3);
  rep.stated_constant = c;
  auto h = ovsienko_redou(n, k);
  auto target = or_prime(n, k - 1);
  ProportionalityFit fit;
  const auto inputs = monomial_inputs(n, degree);
  for (std::size_t a = 0; a < inputs.size(); ++a) {
    for (std::size_t b = 0; b < inputs.size(); b += 1 + a % 3) {
      const SpherePoly lhs = ambient_commutator(*h, inputs[a], {inputs[b]});
      const SpherePoly base = target->evaluate({inputs[a], inputs[b]});
      fit.add(lhs, base);
      record(rep, lhs, base.scaled(c), inputs[a].to_string() + " | " + inputs[b].to_string());
    }
  }
  rep.fitted_constant = fit.value();
  return rep;
}

SpherePoly sigma2_constraint_round(int n, const SpherePoly& v) {
  const SpherePoly v2 = v * v;
  SpherePoly r = laplacian_sphere(v2).scaled(n);
  r -= (v * laplacian_sphere(v)).scaled(8);
  r += v2.scaled(ratio(n * (n - 4) * (n - 4), 4));
  return r;
}

CommutatorReport check_sigma2_commutator(int n, int degree) {
  if (n < 5) throw std::invalid_argument("sigma2 commutator: requires n >= 5");
  CommutatorReport rep;
  rep.identity = "sigma2";
  rep.n = n;
  rep.k = 2;
  const Rational c = ratio(n - 1, 24);
  rep.stated_constant = c;
  auto h = sigma2_ambient(n);
  ProportionalityFit fit;
  const auto inputs = monomial_inputs(n, degree);
  for (std::size_t a = 0; a < inputs.size(); a += 2) {
    for (std::size_t b = 0; b < inputs.size(); ++b) {
      const SpherePoly& u = inputs[a];
      const SpherePoly& v = inputs[b];
      const SpherePoly lhs = ambient_commutator(*h, u, {v, v});
      const SpherePoly base = u * sigma2_constraint_round(n, v);
      fit.add(lhs, base);
      record(rep, lhs, base.scaled(c), u.to_string() + " | " + v.to_string());
    }
  }
  rep.fitted_constant = fit.value();
  return rep;
}

SphereIntegral frank_lieb_gap(const OperatorHandle& h, const SpherePoly& u) {
  if (h.k < 1) throw std::invalid_argument("frank_lieb_gap: requires k >= 1");
  const int r = h.rank;
  const std::vector<SpherePoly> rest(r - 2, u);
  const SphereIntegral energy = inner_product(u, h.evaluate_diagonal(u));
  const SphereIntegral comm = inner_product(u, ambient_commutator(h, u, rest));
  const Rational factor = ratio((r - 1) * (h.n - 2 * h.k), 2 * r * h.k);
  return {h.n, energy.mean - factor * comm.mean};
}

}  // namespace conflab
