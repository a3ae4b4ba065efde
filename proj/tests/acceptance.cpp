// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conflab/ambient.hpp"
#include "conflab/branches.hpp"
#include "conflab/commutators.hpp"
#include "conflab/conformal.hpp"
#include "conflab/operators.hpp"
#include "conflab/yamabe.hpp"

using namespace conflab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool gjms_exists(int n, int k) { return 2 * k < n || (n % 2 == 0 && 2 * k <= n); }

void sl2_identity(Outcome& o) {
  const auto t0 = Clock::now();
  long checked = 0;
  for (int n = 3; n <= 8; ++n) {
    for (const Sl2Report& r : check_sl2_range(5, n, 6)) {
      checked += r.checked;
      o.require(r.passed(), "n=" + std::to_string(n) + " k=" + std::to_string(r.k));
    }
  }
  const double t = seconds_since(t0);
  o.require(t <= 60.0, "runtime");
  o.detail << checked << " monomial checks, " << t << " s";
}

void gjms_dual(Outcome& o) {
  const auto t0 = Clock::now();
  int rows = 0;
  for (int n = 3; n <= 8; ++n) {
    for (int k = 1; k <= 3; ++k) {
      if (!gjms_exists(n, k)) continue;
      const auto ambient = rank2_spectrum(*gjms(n, k), 6);
      for (int l = 0; l <= 6; ++l, ++rows) {
        o.require(ambient[l] == gjms_eigenvalue(n, k, l),
                  "n=" + std::to_string(n) + " k=" + std::to_string(k) + " l=" + std::to_string(l));
      }
    }
    o.require(rank2_spectrum(*gjms(n, 1), 0)[0] == ratio(n * (n - 2), 4), "L2(1) n=" + std::to_string(n));
  }
  o.require(rank2_spectrum(*gjms(5, 2), 0)[0] == ratio(105, 16), "L4(1) at n=5");
  const double t = seconds_since(t0);
  o.require(t <= 120.0, "runtime");
  o.detail << rows << " eigenvalues exact, " << t << " s";
}

std::vector<HandlePtr> all_handles() {
  std::vector<HandlePtr> hs = {gjms(3, 1),
                               gjms(5, 1),
                               gjms(5, 2),
                               gjms(6, 3),
                               gjms_rank4(5, 1),
                               case_yan(5, 2, Frac(-1, 3), AmbientElement::t_power(5, Frac(-2))),
                               case_yan(5, 1, Frac(-1, 3), AmbientElement::coordinate(5, 0)),
                               ovsienko_redou(5, 1),
                               ovsienko_redou(5, 2),
                               or_prime(7, 1),
                               sigma2_ambient(5),
                               sigma2_constraint(5),
                               identity_constraint(5, Frac(-1, 4))};
  return hs;
}

void tangentiality(Outcome& o) {
  long checked = 0;
  for (const auto& h : all_handles()) {
    const ExactCheck c = check_tangentiality(*h, 3);
    checked += c.checked;
    o.require(c.passed(), h->name + " n=" + std::to_string(h->n));
  }
  o.detail << checked << " exact comparisons over " << all_handles().size() << " handles";
}

void self_adjointness(Outcome& o) {
  struct Case {
    HandlePtr h;
    int degree;
    int max_terms;
  };
  const std::vector<Case> cases = {{gjms(5, 1), 3, 0},
                                   {gjms(5, 2), 3, 0},
                                   {gjms_rank4(5, 1), 2, 4},
                                   {ovsienko_redou(5, 1), 2, 0},
                                   {ovsienko_redou(7, 2), 2, 0},
                                   {sigma2_ambient(5), 2, 4}};
  long checked = 0;
  for (const auto& c : cases) {
    const ExactCheck r = check_self_adjointness(*c.h, 50, c.degree, c.max_terms, 7);
    checked += r.checked;
    o.require(r.passed() && r.checked >= 50, c.h->name + " n=" + std::to_string(c.h->n));
  }
  o.detail << checked << " permutation comparisons on 50 tuples per handle";
}

void commutators(Outcome& o) {
  int identities = 0;
  for (int n = 3; n <= 8; ++n) {
    for (int k = 1; k <= 3 && 2 * k < n; ++k, ++identities) {
      const auto r = check_gjms_commutator(n, k, 4);
      o.require(r.exact_equal && r.stated_constant == Rational(k * (n + 2 * k - 2)),
                "gjms n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
  }
  for (int k = 1; k <= 3; ++k) {
    const std::vector<AmbientElement> fs = {AmbientElement::constant(5, 1), AmbientElement::t_power(5, Frac(-2)),
                                            AmbientElement::coordinate(5, 0)};
    for (const auto& f : fs) {
      o.require(check_case_yan_commutator(5, k, Frac(-1, 3), f, 2).exact_equal, "case-yan k=" + std::to_string(k));
      ++identities;
    }
  }
  for (const auto& [n, k] : {std::pair{3, 1}, std::pair{5, 1}, std::pair{5, 2}, std::pair{7, 1}, std::pair{7, 2}}) {
    const auto r = check_or_commutator(n, k, 2);
    o.require(r.exact_equal && r.stated_constant == ratio(k * (n + 2 * k - 2) * (n + k - 3), 3),
              "or n=" + std::to_string(n) + " k=" + std::to_string(k));
    ++identities;
  }
  for (int n = 5; n <= 7; ++n, ++identities) {
    const auto r = check_sigma2_commutator(n, 1);
    o.require(r.exact_equal, "sigma2 n=" + std::to_string(n));
    const SpherePoly v = SpherePoly::constant(n, 1) + SpherePoly::coordinate(n, 1);
    const SpherePoly formula = laplacian_sphere(v * v).scaled(Rational(n)) - (v * laplacian_sphere(v)).scaled(Rational(8)) +
                               (v * v).scaled(ratio(n * (n - 4) * (n - 4), 4));
    o.require(sigma2_constraint(n)->evaluate({v, v}) == formula, "constraint n=" + std::to_string(n));
  }
  o.detail << identities << " identities exact";
}

void frank_lieb(Outcome& o) {
  int gjms_samples = 0;
  for (const auto& [n, k] : {std::pair{3, 1}, std::pair{5, 1}, std::pair{5, 2}, std::pair{7, 2}, std::pair{7, 3}}) {
    const auto h = gjms(n, k);
    for (const SpherePoly& u : harmonic_samples(n, 4)) {
      const SpherePoly lower = k == 1 ? u : gjms(n, k - 1)->evaluate({u});
      const Rational gap = frank_lieb_gap(*h, u).mean;
      o.require(gap == inner_product(u, laplacian_sphere(lower)).mean && gap >= 0,
                "gjms n=" + std::to_string(n) + " k=" + std::to_string(k));
      ++gjms_samples;
    }
    o.require(frank_lieb_gap(*h, SpherePoly::constant(n, 1)).mean == 0, "gjms constant");
  }
  std::vector<HandlePtr> cone_handles = {ovsienko_redou(5, 1), ovsienko_redou(5, 2), sigma2_ambient(5),
                                         sigma2_ambient(6), sigma2_ambient(7)};
  double worst = INFINITY;
  std::mt19937_64 rng(2024);
  for (const auto& h : cone_handles) {
    o.require(frank_lieb_gap(*h, SpherePoly::constant(h->n, 1)).mean == 0, h->name + " constant");
    for (int s = 0; s < 200; ++s) {
      const SpherePoly dir = random_sphere_poly(h->n, 2, rng, 4);
      Rational eps = ratio(1, 20);
      SpherePoly u = SpherePoly::constant(h->n, 1) + dir.scaled(eps);
      while (!cone_membership(*h, u).member) {
        eps /= 2;
        u = SpherePoly::constant(h->n, 1) + dir.scaled(eps);
      }
      const double gap = to_double(frank_lieb_gap(*h, u).mean) * sphere_volume(h->n);
      worst = std::min(worst, gap);
      o.require(gap >= -1e-12, h->name + " n=" + std::to_string(h->n) + " sample " + std::to_string(s));
    }
  }
  o.detail << gjms_samples << " GJMS gaps exact and >= 0; min cone gap " << worst << " over 1000 samples";
}

void minimization(Outcome& o) {
  struct Case {
    int n, k, L;
    double expected;
  };
  const std::vector<Case> cases = {{3, 1, 6, 0.75 * std::pow(2 * M_PI * M_PI, 2.0 / 3)},
                                   {5, 2, 2, 105.0 / 16 * std::pow(M_PI * M_PI * M_PI, 4.0 / 5)}};
  for (const auto& c : cases) {
    const auto t0 = Clock::now();
    const auto h = gjms(c.n, c.k);
    const double p = critical_exponent(*h);
    const SpectralModel m(h, c.L, p, grid_for_exponent(c.n, c.L, p));
    const YamabeResult r = minimize(m, perturbed_constant(m, 0.05, 42));
    const double t = seconds_since(t0);
    const double rel = std::abs(r.value - c.expected) / c.expected;
    const std::string tag = "(" + std::to_string(c.n) + "," + std::to_string(c.k) + ")";
    o.require(r.converged, tag + " converged");
    o.require(r.sup_distance <= 1e-4, tag + " sup-distance");
    o.require(rel <= 1e-6, tag + " Y");
    o.require(t <= 300.0, tag + " runtime");
    o.detail << tag << " Y=" << r.value << " rel=" << rel << " sup=" << r.sup_distance << " " << t << " s; ";
  }
}

void invariance(Outcome& o) {
  const auto h = gjms(3, 1);
  const SphereGrid grid = gauss_grid(3, 48, 96);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int s = 0; s < 6; ++s) {
    const SpherePoly u = SpherePoly::constant(3, 3) + random_sphere_poly(3, 3, rng, 6).scaled(ratio(1, 10));
    for (double rapidity : {0.1, 0.3, 0.5}) {
      const std::vector<double> dir = {g(rng), g(rng), g(rng), g(rng)};
      const InvarianceCheck r = functional_invariance_check(*h, u, MobiusMap::boost(3, dir, rapidity), grid, 12);
      worst = std::max(worst, r.relative_deviation);
      o.require(r.relative_deviation <= 1e-6, "sample " + std::to_string(s));
    }
  }
  o.detail << "max relative deviation " << worst << " over 18 boosts";
}

void branches(Outcome& o) {
  const auto t0 = Clock::now();
  const int expected[] = {0, 1, 2};
  const double lengths[] = {3.0, 7.0, 13.0};
  for (int i = 0; i < 3; ++i) {
    const BranchSet s = count_branches(3, lengths[i]);
    o.require(s.nonconstant_classes() == expected[i] && s.monotone_scan_passed, "count at L=" + std::to_string(lengths[i]));
    for (const auto& b : s.records) o.require(b.pde_residual < 1e-8, "residual");
    o.detail << "L=" << lengths[i] << ": " << s.nonconstant_classes() << "; ";
  }
  double worst = 0.0;
  for (int n = 3; n <= 5; ++n) {
    for (int d = 2; d <= 5; ++d) {
      const CoveringReport r = covering_energy_check(n, 7.0, d);
      worst = std::max(worst, r.relative_error);
      o.require(r.found_in_cover && r.relative_error <= 1e-6,
                "covering n=" + std::to_string(n) + " d=" + std::to_string(d));
    }
  }
  const EnergyChain c = energy_chain(3, 35.0);
  o.require(c.strictly_increasing, "energy chain");
  const double t = seconds_since(t0);
  o.require(t <= 60.0, "runtime");
  o.detail << "covering max rel " << worst << ", chain of " << c.values.size() << ", " << t << " s";
}

void sign_lemma(Outcome& o) {
  struct Case {
    HandlePtr h;
    int L;
  };
  const std::vector<Case> cases = {{gjms(3, 1), 2}, {gjms(5, 1), 2}, {gjms(5, 2), 2}, {sigma2_ambient(5), 1}};
  for (const auto& c : cases) {
    const EigenvalueResult e = first_nonlinear_eigenvalue(c.h, c.L);
    const double p = critical_exponent(*c.h);
    const SpectralModel m(c.h, c.L, p, grid_for_exponent(c.h->n, c.L, p));
    const YamabeResult y = minimize(m, perturbed_constant(m, 0.05, 42));
    const std::string tag = c.h->name + " n=" + std::to_string(c.h->n);
    o.require(e.lambda > 0 && e.run.converged, tag + " lambda");
    o.require(y.value > 0 && y.converged, tag + " Y");
    o.detail << tag << ": lambda=" << e.lambda << " Y=" << y.value << "; ";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"sl(2) identity", sl2_identity},
      {"GJMS ambient spectrum vs factorization", gjms_dual},
      {"tangentiality", tangentiality},
      {"formal self-adjointness", self_adjointness},
      {"commutator identities", commutators},
      {"Frank-Lieb gap", frank_lieb},
      {"sphere minimization", minimization},
      {"conformal invariance", invariance},
      {"branch counts", branches},
      {"sign of lambda and Y", sign_lemma},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s (%.1f s) %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
