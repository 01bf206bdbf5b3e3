#include "ahg/poly.hpp"

#include <numeric>
#include <sstream>

namespace ahg {

Poly Poly::constant(std::size_t nvars, const GaussianRational& c) {
  Poly p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t j) {
  Poly p(nvars);
  Monomial m(nvars, 0);
  m[j] = 1;
  p.add_term(m, GaussianRational(1));
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
}

GaussianRational Poly::constant_term() const {
  auto it = terms_.find(Monomial(nvars_, 0));
  return it == terms_.end() ? GaussianRational() : it->second;
}

int Poly::degree(std::size_t j) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[j]);
  return d;
}

int Poly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, std::accumulate(m.begin(), m.end(), 0));
  return d;
}

void Poly::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Poly& Poly::operator+=(const Poly& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out(std::max(a.nvars_, b.nvars_));
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Poly::Monomial m(out.nvars_, 0);
      for (std::size_t j = 0; j < ma.size(); ++j) m[j] += ma[j];
      for (std::size_t j = 0; j < mb.size(); ++j) m[j] += mb[j];
      out.add_term(m, ca * cb);
    }
  return out;
}

Poly Poly::operator-() const { return scaled(GaussianRational(-1)); }

Poly Poly::scaled(const GaussianRational& c) const {
  Poly out(nvars_);
  if (c.is_zero()) return out;
  for (const auto& [m, v] : terms_) out.terms_.emplace(m, v * c);
  return out;
}

Poly Poly::pow(unsigned n) const {
  Poly out = constant(nvars_, GaussianRational(1));
  for (unsigned k = 0; k < n; ++k) out = out * *this;
  return out;
}

GaussianRational Poly::eval(const std::vector<GaussianRational>& point) const {
  GaussianRational sum;
  for (const auto& [m, c] : terms_) {
    GaussianRational t = c;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] != 0) t *= point[j].pow(m[j]);
    sum += t;
  }
  return sum;
}

Poly Poly::substitute(const std::map<std::size_t, GaussianRational>& values) const {
  Poly out(nvars_);
  for (const auto& [m, c] : terms_) {
    GaussianRational t = c;
    Monomial rest = m;
    for (const auto& [j, v] : values) {
      if (rest[j] != 0) t *= v.pow(rest[j]);
      rest[j] = 0;
    }
    out.add_term(rest, t);
  }
  return out;
}

Poly Poly::shift(const std::vector<Rational>& s) const {
  std::vector<Poly> shifted_vars;
  for (std::size_t j = 0; j < nvars_; ++j)
    shifted_vars.push_back(variable(nvars_, j) + constant(nvars_, GaussianRational(s[j])));
  Poly out(nvars_);
  for (const auto& [m, c] : terms_) {
    Poly t = constant(nvars_, c);
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] != 0) t = t * (sgn(s[j]) == 0 ? variable(nvars_, j).pow(m[j]) : shifted_vars[j].pow(m[j]));
    out += t;
  }
  return out;
}

std::string Poly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string coef = c.to_string();
    bool needs_paren = !c.is_real() && sgn(c.re()) != 0;
    if (!first) os << " + ";
    first = false;
    bool unit = true;
    for (int e : m) unit = unit && e == 0;
    if (needs_paren) coef = "(" + coef + ")";
    if (unit) {
      os << coef;
      continue;
    }
    if (!c.is_one()) os << coef << "*";
    bool first_factor = true;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m[j] == 0) continue;
      if (!first_factor) os << "*";
      first_factor = false;
      os << names.at(j);
      if (m[j] > 1) os << "^" << m[j];
    }
  }
  return os.str();
}

}  // namespace ahg
