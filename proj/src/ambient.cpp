#include "conflab/ambient.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace conflab {

namespace {

bool key_less(const AmbientTerm& a, const AmbientTerm& b) {
  if (a.tpow != b.tpow) return a.tpow < b.tpow;
  if (a.qpow != b.qpow) return a.qpow < b.qpow;
  return a.x < b.x;
}

bool same_key(const AmbientTerm& a, const AmbientTerm& b) {
  return a.tpow == b.tpow && a.qpow == b.qpow && a.x == b.x;
}

// All exponent vectors d over the first m variables with |d| = total,
// paired with the multinomial coefficient total! / prod d_i!.
void multinomials(int m, int total, std::vector<std::pair<Multi, Rational>>& out) {
  Multi cur{};
  std::function<void(int, int, Rational)> rec = [&](int i, int left, Rational coef) {
    if (i == m - 1) {
      cur[i] = static_cast<std::uint8_t>(left);
      out.emplace_back(cur, coef / factorial(left));
      cur[i] = 0;
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[i] = static_cast<std::uint8_t>(e);
      rec(i + 1, left - e, coef / factorial(e));
    }
    cur[i] = 0;
  };
  rec(0, total, factorial(total));
}

// Rewrites (x^n)^e with e >= 2 as x^{e mod 2} (q - s)^{e div 2},
// s = sum_{i<n} (x^i)^2.
void reduce_last_variable(int n, std::vector<AmbientTerm>& terms) {
  bool any = false;
  for (const auto& t : terms) {
    if (t.x[n] >= 2) {
      any = true;
      break;
    }
  }
  if (!any) return;
  std::vector<AmbientTerm> out;
  out.reserve(terms.size());
  for (auto& t : terms) {
    if (t.x[n] < 2) {
      out.push_back(std::move(t));
      continue;
    }
    int e = t.x[n];
    int j = e / 2;
    Multi base = t.x;
    base[n] = static_cast<std::uint8_t>(e % 2);
    for (int a = 0; a <= j; ++a) {
      Rational binom = factorial(j) / (factorial(a) * factorial(j - a));
      if (a % 2 == 1) binom = -binom;
      std::vector<std::pair<Multi, Rational>> expansions;
      if (a == 0) {
        expansions.emplace_back(Multi{}, Rational(1));
      } else {
        multinomials(n, a, expansions);
      }
      for (const auto& [d, mc] : expansions) {
        AmbientTerm r;
        r.tpow = t.tpow;
        r.qpow = t.qpow + Frac(j - a);
        r.x = base;
        for (int i = 0; i < n; ++i) r.x[i] = static_cast<std::uint8_t>(r.x[i] + 2 * d[i]);
        r.coeff = t.coeff * binom * mc;
        out.push_back(std::move(r));
      }
    }
  }
  terms = std::move(out);
}

void merge_sorted(std::vector<AmbientTerm>& terms) {
  std::sort(terms.begin(), terms.end(), key_less);
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    while (j < terms.size() && same_key(terms[j], terms[i])) {
      terms[i].coeff += terms[j].coeff;
      ++j;
    }
    if (sgn(terms[i].coeff) != 0) {
      if (out != i) terms[out] = std::move(terms[i]);
      ++out;
    }
    i = j;
  }
  terms.resize(out);
}

void check_dim(int n) {
  if (n < 1 || n + 1 > kMaxVars) throw std::invalid_argument("unsupported sphere dimension");
}

}  // namespace

AmbientElement::AmbientElement(int n) : n_(n) { check_dim(n); }

AmbientElement AmbientElement::from_terms(int n, std::vector<AmbientTerm> terms) {
  AmbientElement a(n);
  reduce_last_variable(n, terms);
  merge_sorted(terms);
  a.terms_ = std::move(terms);
  return a;
}

AmbientElement AmbientElement::constant(int n, const Rational& c) {
  return monomial(n, Frac(0), Frac(0), Multi{}, c);
}

AmbientElement AmbientElement::monomial(int n, Frac tpow, Frac qpow, const Multi& x, const Rational& c) {
  return from_terms(n, {AmbientTerm{tpow, qpow, x, c}});
}

AmbientElement AmbientElement::t_power(int n, Frac a, const Rational& c) {
  return monomial(n, a, Frac(0), Multi{}, c);
}

AmbientElement AmbientElement::q_power(int n, Frac b, const Rational& c) {
  return monomial(n, Frac(0), b, Multi{}, c);
}

AmbientElement AmbientElement::coordinate(int n, int i) {
  return monomial(n, Frac(0), Frac(0), unit_multi(i), 1);
}

AmbientElement AmbientElement::defining_function(int n) {
  return q_power(n, Frac(1)) - t_power(n, Frac(2));
}

AmbientElement AmbientElement::from_poly(int n, const Poly& p, Frac a) {
  if (p.nvars() != n + 1) throw std::invalid_argument("polynomial has wrong variable count");
  std::vector<AmbientTerm> terms;
  terms.reserve(p.terms().size());
  for (const auto& t : p.terms()) terms.push_back({a, Frac(0), t.exps, t.coeff});
  return from_terms(n, std::move(terms));
}

Frac term_weight(const AmbientTerm& t) {
  return t.tpow + t.qpow * Frac(2) + Frac(degree(t.x));
}

std::optional<Frac> AmbientElement::weight() const {
  if (terms_.empty()) return std::nullopt;
  Frac w = term_weight(terms_.front());
  for (const auto& t : terms_) {
    if (term_weight(t) != w) return std::nullopt;
  }
  return w;
}

AmbientElement& AmbientElement::operator+=(const AmbientElement& o) {
  if (o.n_ != n_) throw std::invalid_argument("dimension mismatch");
  std::vector<AmbientTerm> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && key_less(*a, *b))) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || key_less(*b, *a)) {
      merged.push_back(*b++);
    } else {
      Rational c = a->coeff + b->coeff;
      if (sgn(c) != 0) merged.push_back({a->tpow, a->qpow, a->x, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

AmbientElement& AmbientElement::operator-=(const AmbientElement& o) { return *this += o.scaled(-1); }

AmbientElement AmbientElement::scaled(const Rational& c) const {
  AmbientElement r(n_);
  if (sgn(c) == 0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

AmbientElement operator*(const AmbientElement& a, const AmbientElement& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("dimension mismatch");
  std::vector<AmbientTerm> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      AmbientTerm r;
      r.tpow = s.tpow + t.tpow;
      r.qpow = s.qpow + t.qpow;
      for (int i = 0; i < kMaxVars; ++i) r.x[i] = static_cast<std::uint8_t>(s.x[i] + t.x[i]);
      r.coeff = s.coeff * t.coeff;
      out.push_back(std::move(r));
    }
  }
  return AmbientElement::from_terms(a.n_, std::move(out));
}

bool operator==(const AmbientElement& a, const AmbientElement& b) {
  if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!same_key(a.terms_[i], b.terms_[i]) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

AmbientElement AmbientElement::d_t() const {
  std::vector<AmbientTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (t.tpow.is_zero()) continue;
    out.push_back({t.tpow - Frac(1), t.qpow, t.x, t.coeff * t.tpow.to_rational()});
  }
  return from_terms(n_, std::move(out));
}

AmbientElement AmbientElement::d_x(int i) const {
  std::vector<AmbientTerm> out;
  out.reserve(2 * terms_.size());
  for (const auto& t : terms_) {
    if (!t.qpow.is_zero()) {
      AmbientTerm r{t.tpow, t.qpow - Frac(1), t.x, t.coeff * 2 * t.qpow.to_rational()};
      r.x[i] += 1;
      out.push_back(std::move(r));
    }
    if (t.x[i] > 0) {
      AmbientTerm r{t.tpow, t.qpow, t.x, t.coeff * static_cast<long>(t.x[i])};
      r.x[i] -= 1;
      out.push_back(std::move(r));
    }
  }
  return from_terms(n_, std::move(out));
}

std::string AmbientElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    out << conflab::to_string(t.coeff);
    if (!t.tpow.is_zero()) out << " * t^" << conflab::to_string(t.tpow);
    if (!t.qpow.is_zero()) out << " * q^" << conflab::to_string(t.qpow);
    for (int i = 0; i <= n_; ++i) {
      if (t.x[i] > 0) out << " * x" << i << "^" << static_cast<int>(t.x[i]);
    }
    first = false;
  }
  return out.str();
}

AmbientElement ambient_laplacian(const AmbientElement& a) {
  // On a canonical term c t^a q^b x^g:
  //   d_t^2 gives a(a-1) t^{a-2} q^b x^g,
  //   the spatial Laplacian gives q^b Lap(x^g) + 2b(n - 1 + 2b + 2|g|) q^{b-1} x^g.
  const int n = a.dim();
  std::vector<AmbientTerm> out;
  out.reserve(a.terms().size() * (n + 3));
  for (const auto& t : a.terms()) {
    Rational alpha = t.tpow.to_rational();
    Rational ct = alpha * (alpha - 1);
    if (sgn(ct) != 0) out.push_back({t.tpow - Frac(2), t.qpow, t.x, t.coeff * ct});
    if (!t.qpow.is_zero()) {
      Rational beta = t.qpow.to_rational();
      Rational cq = 2 * beta * (n - 1 + 2 * beta + 2 * degree(t.x));
      if (sgn(cq) != 0) out.push_back({t.tpow, t.qpow - Frac(1), t.x, -t.coeff * cq});
    }
    for (int i = 0; i <= n; ++i) {
      int e = t.x[i];
      if (e < 2) continue;
      AmbientTerm r{t.tpow, t.qpow, t.x, -t.coeff * static_cast<long>(e * (e - 1))};
      r.x[i] -= 2;
      out.push_back(std::move(r));
    }
  }
  return AmbientElement::from_terms(n, std::move(out));
}

AmbientElement ambient_laplacian_power(const AmbientElement& a, int k) {
  AmbientElement r = a;
  for (int i = 0; i < k; ++i) r = ambient_laplacian(r);
  return r;
}

AmbientElement ambient_laplacian_by_derivatives(const AmbientElement& a) {
  AmbientElement r = a.d_t().d_t();
  for (int i = 0; i <= a.dim(); ++i) r -= a.d_x(i).d_x(i);
  return r;
}

AmbientElement euler(const AmbientElement& a) {
  std::vector<AmbientTerm> out;
  out.reserve(a.terms().size());
  for (const auto& t : a.terms()) {
    Rational w = term_weight(t).to_rational();
    if (sgn(w) != 0) out.push_back({t.tpow, t.qpow, t.x, t.coeff * w});
  }
  return AmbientElement::from_terms(a.dim(), std::move(out));
}

std::pair<AmbientElement, AmbientElement> sl2_sides(const AmbientElement& a, int k) {
  const int n = a.dim();
  AmbientElement q = AmbientElement::defining_function(n);
  AmbientElement lhs = ambient_laplacian_power(q * a, k) - q * ambient_laplacian_power(a, k);
  AmbientElement inner = euler(a).scaled(2) + a.scaled(n + 4 - 2 * k);
  AmbientElement rhs = ambient_laplacian_power(inner, k - 1).scaled(-2 * k);
  return {lhs, rhs};
}

std::vector<AmbientElement> sl2_basis(int n, int basis_degree) {
  check_dim(n);
  const std::vector<Frac> powers = {Frac(0), Frac(1, 3), Frac(-1, 3), Frac(1, 2), Frac(-1, 2), Frac(1), Frac(-1)};
  std::vector<Multi> monos;
  Multi cur{};
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n + 1) {
      monos.push_back(cur);
      return;
    }
    int cap = (i == n) ? std::min(left, 1) : left;
    for (int e = 0; e <= cap; ++e) {
      cur[i] = static_cast<std::uint8_t>(e);
      rec(i + 1, left - e);
    }
    cur[i] = 0;
  };
  rec(0, basis_degree);
  std::vector<AmbientElement> basis;
  basis.reserve(powers.size() * powers.size() * monos.size());
  for (const auto& a : powers) {
    for (const auto& b : powers) {
      for (const auto& m : monos) basis.push_back(AmbientElement::monomial(n, a, b, m));
    }
  }
  return basis;
}

namespace {

// Small-coefficient mirror of the exact path, used by the sl(2) sweep. Every
// Frac operation is overflow-checked; on overflow the caller falls back to the
// GMP path for that monomial.
struct FastTerm {
  Frac tpow;
  Frac qpow;
  Multi x{};
  Frac coeff;
};

using FastPoly = std::vector<FastTerm>;

bool fast_key_less(const FastTerm& a, const FastTerm& b) {
  if (a.tpow != b.tpow) return a.tpow < b.tpow;
  if (a.qpow != b.qpow) return a.qpow < b.qpow;
  return a.x < b.x;
}

void fast_merge(FastPoly& terms) {
  std::sort(terms.begin(), terms.end(), fast_key_less);
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].tpow == terms[i].tpow && terms[j].qpow == terms[i].qpow &&
           terms[j].x == terms[i].x) {
      terms[i].coeff += terms[j].coeff;
      ++j;
    }
    if (!terms[i].coeff.is_zero()) terms[out++] = terms[i];
    i = j;
  }
  terms.resize(out);
}

FastPoly fast_laplacian(const FastPoly& a, int n) {
  FastPoly out;
  out.reserve(a.size() * (n + 3));
  for (const auto& t : a) {
    Frac ct = t.tpow * (t.tpow - Frac(1));
    if (!ct.is_zero()) out.push_back({t.tpow - Frac(2), t.qpow, t.x, t.coeff * ct});
    if (!t.qpow.is_zero()) {
      Frac cq = Frac(2) * t.qpow * (Frac(n - 1 + 2 * degree(t.x)) + Frac(2) * t.qpow);
      if (!cq.is_zero()) out.push_back({t.tpow, t.qpow - Frac(1), t.x, -(t.coeff * cq)});
    }
    for (int i = 0; i <= n; ++i) {
      int e = t.x[i];
      if (e < 2) continue;
      FastTerm r{t.tpow, t.qpow, t.x, -(t.coeff * Frac(e * (e - 1)))};
      r.x[i] -= 2;
      out.push_back(r);
    }
  }
  fast_merge(out);
  return out;
}

// Multiplication by Q = q - t^2; keeps the reduced form of the x-part.
FastPoly fast_times_q(const FastPoly& a) {
  FastPoly out;
  out.reserve(2 * a.size());
  for (const auto& t : a) {
    out.push_back({t.tpow, t.qpow + Frac(1), t.x, t.coeff});
    out.push_back({t.tpow + Frac(2), t.qpow, t.x, -t.coeff});
  }
  fast_merge(out);
  return out;
}

FastPoly fast_combine(const FastPoly& a, Frac ca, const FastPoly& b, Frac cb) {
  FastPoly out;
  out.reserve(a.size() + b.size());
  for (const auto& t : a) out.push_back({t.tpow, t.qpow, t.x, t.coeff * ca});
  for (const auto& t : b) out.push_back({t.tpow, t.qpow, t.x, t.coeff * cb});
  fast_merge(out);
  return out;
}

FastPoly fast_euler(const FastPoly& a) {
  FastPoly out;
  for (const auto& t : a) out.push_back({t.tpow, t.qpow, t.x, t.coeff * (t.tpow + Frac(2) * t.qpow + Frac(degree(t.x)))});
  fast_merge(out);
  return out;
}

bool fast_equal(const FastPoly& a, const FastPoly& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].tpow != b[i].tpow || a[i].qpow != b[i].qpow || a[i].x != b[i].x || a[i].coeff != b[i].coeff) {
      return false;
    }
  }
  return true;
}

// Verdict per k = 1..kmax for a single canonical basis monomial.
std::vector<bool> sl2_verdicts_fast(const AmbientTerm& m, int n, int kmax) {
  FastPoly lm{{m.tpow, m.qpow, m.x, Frac::from_rational(m.coeff)}};
  FastPoly lq = fast_times_q(lm);
  FastPoly lx = fast_euler(lm);
  std::vector<bool> ok(kmax);
  for (int k = 1; k <= kmax; ++k) {
    FastPoly prev_m = lm;
    FastPoly prev_x = lx;
    lq = fast_laplacian(lq, n);
    lm = fast_laplacian(lm, n);
    lx = fast_laplacian(lx, n);
    FastPoly lhs = fast_combine(lq, Frac(1), fast_times_q(lm), Frac(-1));
    FastPoly rhs = fast_combine(prev_x, Frac(-4 * k), prev_m, Frac(-2 * k * (n + 4 - 2 * k)));
    ok[k - 1] = fast_equal(lhs, rhs);
  }
  return ok;
}

std::vector<bool> sl2_verdicts_exact(const AmbientElement& m, int kmax) {
  const int n = m.dim();
  const AmbientElement q = AmbientElement::defining_function(n);
  AmbientElement lq = q * m;
  AmbientElement lm = m;
  AmbientElement lx = euler(m);
  std::vector<bool> ok(kmax);
  for (int k = 1; k <= kmax; ++k) {
    AmbientElement prev_m = lm;
    AmbientElement prev_x = lx;
    lq = ambient_laplacian(lq);
    lm = ambient_laplacian(lm);
    lx = ambient_laplacian(lx);
    AmbientElement lhs = lq - q * lm;
    AmbientElement rhs = (prev_x.scaled(2) + prev_m.scaled(n + 4 - 2 * k)).scaled(-2 * k);
    ok[k - 1] = (lhs == rhs);
  }
  return ok;
}

}  // namespace

std::vector<Sl2Report> check_sl2_range(int kmax, int n, int basis_degree, bool exact_only) {
  std::vector<Sl2Report> reports(kmax);
  for (int k = 1; k <= kmax; ++k) reports[k - 1] = Sl2Report{k, n, basis_degree, 0, 0, {}};
  for (const auto& m : sl2_basis(n, basis_degree)) {
    std::vector<bool> ok;
    if (!exact_only) {
      try {
        ok = sl2_verdicts_fast(m.terms().front(), n, kmax);
      } catch (const std::overflow_error&) {
        ok.clear();
      }
    }
    if (ok.empty()) ok = sl2_verdicts_exact(m, kmax);
    for (int k = 1; k <= kmax; ++k) {
      auto& rep = reports[k - 1];
      ++rep.checked;
      if (!ok[k - 1]) {
        ++rep.failures;
        if (rep.failed_monomials.size() < 10) rep.failed_monomials.push_back(m.to_string());
      }
    }
  }
  return reports;
}

Sl2Report check_sl2(int k, int n, int basis_degree) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  return check_sl2_range(k, n, basis_degree).back();
}

bool laplacian_sign_self_test() {
  for (int n : {1, 3, 4}) {
    for (const auto& m : sl2_basis(n, 1)) {
      auto [lhs, rhs] = sl2_sides(m, 1);
      if (!(lhs == rhs)) return false;
    }
  }
  return true;
}

}  // namespace conflab
