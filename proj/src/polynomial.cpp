#include "conflab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace conflab {

int degree(const Multi& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

Multi unit_multi(int i) {
  Multi m{};
  m[i] = 1;
  return m;
}

std::string multi_to_string(const Multi& m, int nvars) {
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < nvars; ++i) {
    if (m[i] == 0) continue;
    if (!first) out << " * ";
    out << "x" << i;
    if (m[i] > 1) out << "^" << static_cast<int>(m[i]);
    first = false;
  }
  return first ? "1" : out.str();
}

void canonicalize_terms(std::vector<PolyTerm>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const PolyTerm& a, const PolyTerm& b) { return a.exps < b.exps; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].exps == terms[i].exps) {
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

Poly::Poly(int nvars) : nvars_(nvars) {
  if (nvars < 1 || nvars > kMaxVars) throw std::invalid_argument("unsupported number of variables");
}

Poly Poly::constant(int nvars, const Rational& c) { return monomial(nvars, Multi{}, c); }

Poly Poly::variable(int nvars, int i) { return monomial(nvars, unit_multi(i), 1); }

Poly Poly::monomial(int nvars, const Multi& exps, const Rational& c) {
  Poly p(nvars);
  if (sgn(c) != 0) p.terms_.push_back({exps, c});
  return p;
}

Poly Poly::norm_squared(int nvars) {
  Poly p(nvars);
  for (int i = 0; i < nvars; ++i) {
    Multi m{};
    m[i] = 2;
    p.terms_.push_back({m, 1});
  }
  canonicalize_terms(p.terms_);
  return p;
}

Poly Poly::from_terms(int nvars, std::vector<PolyTerm> terms) {
  Poly p(nvars);
  canonicalize_terms(terms);
  p.terms_ = std::move(terms);
  return p;
}

int Poly::max_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, degree(t.exps));
  return d;
}

bool Poly::is_homogeneous() const {
  if (terms_.empty()) return true;
  int d = degree(terms_.front().exps);
  for (const auto& t : terms_) {
    if (degree(t.exps) != d) return false;
  }
  return true;
}

Poly Poly::homogeneous_part(int d) const {
  Poly p(nvars_);
  for (const auto& t : terms_) {
    if (degree(t.exps) == d) p.terms_.push_back(t);
  }
  return p;
}

Poly Poly::partial(int i) const {
  std::vector<PolyTerm> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (t.exps[i] == 0) continue;
    PolyTerm r{t.exps, t.coeff * static_cast<long>(t.exps[i])};
    r.exps[i] -= 1;
    out.push_back(std::move(r));
  }
  return from_terms(nvars_, std::move(out));
}

Poly Poly::laplacian() const {
  std::vector<PolyTerm> out;
  for (const auto& t : terms_) {
    for (int i = 0; i < nvars_; ++i) {
      int e = t.exps[i];
      if (e < 2) continue;
      PolyTerm r{t.exps, t.coeff * static_cast<long>(e * (e - 1))};
      r.exps[i] -= 2;
      out.push_back(std::move(r));
    }
  }
  return from_terms(nvars_, std::move(out));
}

Poly Poly::scaled(const Rational& c) const {
  Poly p(nvars_);
  if (sgn(c) == 0) return p;
  p.terms_ = terms_;
  for (auto& t : p.terms_) t.coeff *= c;
  return p;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("variable count mismatch");
  std::vector<PolyTerm> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->exps < b->exps)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->exps < a->exps) {
      merged.push_back(*b++);
    } else {
      Rational c = a->coeff + b->coeff;
      if (sgn(c) != 0) merged.push_back({a->exps, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += o.scaled(-1); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("variable count mismatch");
  std::vector<PolyTerm> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      PolyTerm r;
      for (int i = 0; i < kMaxVars; ++i) r.exps[i] = static_cast<std::uint8_t>(s.exps[i] + t.exps[i]);
      r.coeff = s.coeff * t.coeff;
      out.push_back(std::move(r));
    }
  }
  return Poly::from_terms(a.nvars_, std::move(out));
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exps != b.terms_[i].exps || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

Poly Poly::pow(int k) const {
  Poly r = constant(nvars_, 1);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

double Poly::evaluate(const double* x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff.get_d();
    for (int i = 0; i < nvars_; ++i) {
      for (int e = 0; e < t.exps[i]; ++e) v *= x[i];
    }
    s += v;
  }
  return s;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) out << " + ";
    out << conflab::to_string(t.coeff) << " * " << multi_to_string(t.exps, nvars_);
    first = false;
  }
  return out.str();
}

}  // namespace conflab
