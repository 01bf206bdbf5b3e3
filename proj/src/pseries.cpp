#include "ahg/pseries.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ahg {

namespace {

using Component = std::vector<std::pair<Exponent, GaussianRational>>;

constexpr long kMaxOrder = 1L << 20;

Exponent sum_exponents(const Exponent& a, const Exponent& b) {
  Exponent out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] + b[j];
  return out;
}

long lcm_long(long a, long b) { return std::lcm(a, b); }

long ceil_div(long num, long den) {
  // den > 0
  if (num >= 0) return (num + den - 1) / den;
  return -((-num) / den);
}

std::vector<Component> grade(const PuiseuxSeries& a) {
  if (a.order() > kMaxOrder) throw std::length_error("series order too large for graded arithmetic");
  std::vector<Component> comp(static_cast<std::size_t>(std::max(a.order(), 0L)));
  for (const auto& [e, c] : a.terms()) comp[static_cast<std::size_t>(a.weight(e))].emplace_back(e, c);
  return comp;
}

/// out += factor · (x * y) restricted to the monomials produced.
void accumulate(PuiseuxSeries::TermMap& out, const Component& x, const Component& y, long factor) {
  for (const auto& [ex, cx] : x) {
    for (const auto& [ey, cy] : y) {
      GaussianRational p = cx * cy;
      if (factor != 1) p *= GaussianRational(factor);
      auto [it, inserted] = out.try_emplace(sum_exponents(ex, ey), std::move(p));
      if (!inserted) it->second += p;
    }
  }
}

Component to_component(PuiseuxSeries::TermMap&& m, const GaussianRational& scale_by) {
  Component out;
  out.reserve(m.size());
  for (auto& [e, c] : m) {
    if (c.is_zero()) continue;
    out.emplace_back(e, c * scale_by);
  }
  return out;
}

PuiseuxSeries from_components(const ExponentGrid& grid, std::vector<Rational> offset, long order,
                              const std::vector<Component>& comp) {
  PuiseuxSeries out(grid, std::move(offset), order);
  for (const auto& c : comp)
    for (const auto& [e, v] : c) out.set_term(e, v);
  return out;
}

void require_same_grid(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("series have different numbers of variables");
}

std::vector<int> common_ram(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = static_cast<int>(lcm_long(a[j], b[j]));
  return out;
}

std::vector<std::pair<long, const Exponent*>> weighted_order(const PuiseuxSeries& a) {
  std::vector<std::pair<long, const Exponent*>> out;
  out.reserve(a.terms().size());
  for (const auto& [e, c] : a.terms()) out.emplace_back(a.weight(e), &e);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return *x.second < *y.second;
  });
  return out;
}

}  // namespace

ExponentGrid::ExponentGrid(std::vector<int> ram_) : ram(std::move(ram_)) {
  for (int k : ram)
    if (k < 1) throw std::invalid_argument("ramification indices must be positive");
}

long ExponentGrid::lcm() const {
  long l = 1;
  for (int k : ram) l = lcm_long(l, k);
  return l;
}

long ExponentGrid::weight(const Exponent& e) const {
  long big = lcm();
  long w = 0;
  for (std::size_t j = 0; j < e.size(); ++j) w += static_cast<long>(e[j]) * (big / ram[j]);
  return w;
}

PuiseuxSeries::PuiseuxSeries(ExponentGrid grid, long order)
    : grid_(std::move(grid)), offset_(grid_.nvars(), Rational(0)), order_(order) {}

PuiseuxSeries::PuiseuxSeries(ExponentGrid grid, std::vector<Rational> offset, long order)
    : grid_(std::move(grid)), offset_(std::move(offset)), order_(order) {
  if (offset_.size() != grid_.nvars()) throw std::invalid_argument("offset size does not match grid");
}

PuiseuxSeries PuiseuxSeries::constant(const ExponentGrid& grid, const GaussianRational& c, long order) {
  PuiseuxSeries s(grid, order);
  s.add_term(Exponent(grid.nvars(), 0), c);
  return s;
}

PuiseuxSeries PuiseuxSeries::monomial(const ExponentGrid& grid, const Exponent& e, const GaussianRational& c,
                                      long order) {
  PuiseuxSeries s(grid, order);
  s.add_term(e, c);
  return s;
}

PuiseuxSeries PuiseuxSeries::variable(const ExponentGrid& grid, std::size_t j, long order) {
  Exponent e(grid.nvars(), 0);
  e[j] = grid.ram[j];
  return monomial(grid, e, GaussianRational(1), order);
}

GaussianRational PuiseuxSeries::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? GaussianRational(0) : it->second;
}

void PuiseuxSeries::add_term(const Exponent& e, const GaussianRational& c) {
  if (c.is_zero() || weight(e) >= order_) return;
  for (int v : e)
    if (v < 0) throw std::invalid_argument("negative relative exponent in series term");
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void PuiseuxSeries::set_term(const Exponent& e, GaussianRational c) {
  if (weight(e) >= order_) return;
  if (c.is_zero()) {
    terms_.erase(e);
    return;
  }
  terms_[e] = std::move(c);
}

std::vector<Rational> PuiseuxSeries::absolute_exponent(const Exponent& e) const {
  std::vector<Rational> out(offset_);
  for (std::size_t j = 0; j < e.size(); ++j) out[j] += Rational(e[j], grid_.ram[j]);
  for (auto& q : out) q.canonicalize();
  return out;
}

long PuiseuxSeries::valuation() const {
  long v = order_;
  for (const auto& [e, c] : terms_) v = std::min(v, weight(e));
  return v;
}

GaussianRational PuiseuxSeries::constant_term() const { return coeff(Exponent(nvars(), 0)); }

PuiseuxSeries PuiseuxSeries::truncated(long order) const {
  PuiseuxSeries out(grid_, offset_, std::min(order, order_));
  for (const auto& [e, c] : terms_)
    if (weight(e) < out.order_) out.terms_.emplace(e, c);
  return out;
}

PuiseuxSeries PuiseuxSeries::regrid(const std::vector<int>& ram) const {
  if (ram.size() != nvars()) throw std::invalid_argument("regrid: wrong number of variables");
  if (ram == grid_.ram) return *this;
  ExponentGrid g(ram);
  long old_k = grid_.lcm(), new_k = g.lcm();
  PuiseuxSeries out(g, offset_, ceil_div(order_ * new_k, old_k));
  for (const auto& [e, c] : terms_) {
    Exponent ne(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
      long scaled = static_cast<long>(e[j]) * ram[j];
      if (scaled % grid_.ram[j] != 0)
        throw std::domain_error("regrid: exponent not representable on the coarser grid");
      ne[j] = static_cast<int>(scaled / grid_.ram[j]);
    }
    out.terms_.emplace(std::move(ne), c);
  }
  return out;
}

PuiseuxSeries PuiseuxSeries::with_offset(const std::vector<Rational>& new_offset) const {
  if (new_offset.size() != nvars()) throw std::invalid_argument("with_offset: wrong number of variables");
  Exponent shift(nvars(), 0);
  for (std::size_t j = 0; j < nvars(); ++j) {
    Rational s = (offset_[j] - new_offset[j]) * grid_.ram[j];
    s.canonicalize();
    if (sgn(s) < 0 || !is_integer(s))
      throw std::domain_error("with_offset: offset shift not a non-negative grid multiple");
    shift[j] = static_cast<int>(s.get_num().get_si());
  }
  PuiseuxSeries out(grid_, new_offset, order_ + grid_.weight(shift));
  for (const auto& [e, c] : terms_) out.terms_.emplace(sum_exponents(e, shift), c);
  return out;
}

PuiseuxSeries PuiseuxSeries::shifted(const std::vector<Rational>& delta) const {
  PuiseuxSeries out(*this);
  for (std::size_t j = 0; j < nvars(); ++j) {
    out.offset_[j] += delta[j];
    out.offset_[j].canonicalize();
  }
  return out;
}

PuiseuxSeries PuiseuxSeries::operator-() const {
  PuiseuxSeries out(*this);
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

PuiseuxSeries& PuiseuxSeries::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

std::string format_exponent(const std::vector<Rational>& exponent, const std::vector<std::string>& names) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < exponent.size(); ++j) {
    if (sgn(exponent[j]) == 0) continue;
    if (!first) os << "*";
    first = false;
    os << (j < names.size() ? names[j] : "z" + std::to_string(j + 1));
    if (exponent[j] != 1) {
      if (is_integer(exponent[j]) && sgn(exponent[j]) > 0)
        os << "^" << exponent[j].get_str();
      else
        os << "^(" << exponent[j].get_str() << ")";
    }
  }
  return first ? "1" : os.str();
}

std::string PuiseuxSeries::to_string(const std::vector<std::string>& names) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, e] : weighted_order(*this)) {
    const GaussianRational& c = terms_.at(*e);
    std::string mono = format_exponent(absolute_exponent(*e), names);
    // Real negative coefficients fold into the separator: "1 - y", not "1 + -1*y".
    bool negative = c.is_real() && sgn(c.re()) < 0;
    GaussianRational shown = negative ? -c : c;
    std::string coef = shown.to_string();
    if (!shown.is_real()) coef = "(" + coef + ")";
    if (first) os << (negative ? "-" : "");
    else os << (negative ? " - " : " + ");
    first = false;
    if (mono == "1")
      os << coef;
    else if (shown.is_one())
      os << mono;
    else
      os << coef << "*" << mono;
  }
  if (first) os << "0";
  Rational deg(order_, grid_.lcm());
  deg.canonicalize();
  os << " + O(deg " << deg.get_str() << ")";
  return os.str();
}

std::pair<PuiseuxSeries, PuiseuxSeries> align(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  require_same_grid(a, b);
  std::vector<int> ram = common_ram(a.grid().ram, b.grid().ram);
  std::vector<Rational> offset(a.nvars());
  for (std::size_t j = 0; j < a.nvars(); ++j) {
    offset[j] = std::min(a.offset()[j], b.offset()[j]);
    Rational da = a.offset()[j] - offset[j], db = b.offset()[j] - offset[j];
    da.canonicalize();
    db.canonicalize();
    long den = lcm_long(da.get_den().get_si(), db.get_den().get_si());
    ram[j] = static_cast<int>(lcm_long(ram[j], den));
  }
  return {a.regrid(ram).with_offset(offset), b.regrid(ram).with_offset(offset)};
}

PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  auto [x, y] = align(a, b);
  long order = std::min(x.order(), y.order());
  PuiseuxSeries out(x.grid(), x.offset(), order);
  for (const auto& [e, c] : x.terms()) out.add_term(e, c);
  for (const auto& [e, c] : y.terms()) out.add_term(e, c);
  return out;
}

PuiseuxSeries sub(const PuiseuxSeries& a, const PuiseuxSeries& b) { return add(a, -b); }

PuiseuxSeries scale(const PuiseuxSeries& a, const GaussianRational& c) {
  PuiseuxSeries out(a);
  out *= c;
  return out;
}

PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  require_same_grid(a, b);
  std::vector<int> ram = common_ram(a.grid().ram, b.grid().ram);
  PuiseuxSeries x = a.regrid(ram), y = b.regrid(ram);
  long order = std::min(x.order(), y.order());
  std::vector<Rational> offset(x.nvars());
  for (std::size_t j = 0; j < x.nvars(); ++j) {
    offset[j] = x.offset()[j] + y.offset()[j];
    offset[j].canonicalize();
  }
  auto ya = weighted_order(y);
  PuiseuxSeries::TermMap acc;
  for (const auto& [ex, cx] : x.terms()) {
    long wx = x.weight(ex);
    if (wx >= order) continue;
    for (const auto& [wy, ey] : ya) {
      if (wx + wy >= order) break;
      GaussianRational p = cx * y.terms().at(*ey);
      auto [it, inserted] = acc.try_emplace(sum_exponents(ex, *ey), std::move(p));
      if (!inserted) it->second += p;
    }
  }
  PuiseuxSeries out(x.grid(), std::move(offset), order);
  for (auto& [e, c] : acc)
    if (!c.is_zero()) out.set_term(e, std::move(c));
  return out;
}

PuiseuxSeries pow_int(const PuiseuxSeries& a, long n) {
  if (n < 0) return pow_int(invert(a), -n);
  PuiseuxSeries result = PuiseuxSeries::constant(a.grid(), GaussianRational(1), a.order());
  PuiseuxSeries base = a;
  bool have = false;
  while (n > 0) {
    if (n & 1) {
      result = have ? mul(result, base) : base;
      have = true;
    }
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return result;
}

PuiseuxSeries invert(const PuiseuxSeries& a, bool factor_monomial) {
  if (a.is_zero()) throw NonUnit("cannot invert the zero series");
  GaussianRational c = a.constant_term();
  if (c.is_zero()) {
    if (!factor_monomial) throw NonUnit("series has zero constant term");
    Exponent emin = a.terms().begin()->first;
    for (const auto& [e, v] : a.terms())
      for (std::size_t j = 0; j < e.size(); ++j) emin[j] = std::min(emin[j], e[j]);
    if (a.coeff(emin).is_zero()) throw NonUnit("no monomial divides the series with unit cofactor");
    std::vector<Rational> m(a.nvars());
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = Rational(emin[j], a.grid().ram[j]);
    std::vector<Rational> neg(m);
    for (auto& q : neg) q = -q;
    return invert(monomial_div(a, m, DivisionMode::Strict), false).shifted(neg);
  }
  auto comp = grade(a);
  GaussianRational cinv = c.inverse();
  std::vector<Component> out(comp.size());
  if (!out.empty()) out[0] = {{Exponent(a.nvars(), 0), cinv}};
  for (std::size_t w = 1; w < comp.size(); ++w) {
    PuiseuxSeries::TermMap acc;
    for (std::size_t k = 1; k <= w; ++k) accumulate(acc, comp[k], out[w - k], 1);
    out[w] = to_component(std::move(acc), -cinv);
  }
  std::vector<Rational> offset(a.offset());
  for (auto& q : offset) q = -q;
  return from_components(a.grid(), std::move(offset), a.order(), out);
}

PuiseuxSeries log_unit(const PuiseuxSeries& a) {
  for (const auto& q : a.offset())
    if (sgn(q) != 0) throw std::domain_error("log_unit requires zero offset");
  if (!a.constant_term().is_one()) throw NonUnit("log_unit requires constant term 1");
  auto comp = grade(a);
  std::vector<Component> out(comp.size());
  for (std::size_t w = 1; w < comp.size(); ++w) {
    PuiseuxSeries::TermMap acc;
    for (std::size_t k = 1; k < w; ++k) accumulate(acc, out[k], comp[w - k], static_cast<long>(k));
    // L_w = A_w − (1/w) Σ k L_k A_{w−k}
    Component lw = to_component(std::move(acc), GaussianRational(Rational(-1, static_cast<long>(w))));
    PuiseuxSeries::TermMap merged;
    for (auto& [e, c] : lw) merged.emplace(e, c);
    for (const auto& [e, c] : comp[w]) {
      auto [it, inserted] = merged.try_emplace(e, c);
      if (!inserted) it->second += c;
    }
    out[w] = to_component(std::move(merged), GaussianRational(1));
  }
  return from_components(a.grid(), a.offset(), a.order(), out);
}

PuiseuxSeries exp_series(const PuiseuxSeries& a) {
  for (const auto& q : a.offset())
    if (sgn(q) != 0) throw std::domain_error("exp_series requires zero offset");
  if (!a.constant_term().is_zero()) throw std::domain_error("exp_series requires zero constant term");
  auto comp = grade(a);
  std::vector<Component> out(comp.size());
  if (!out.empty()) out[0] = {{Exponent(a.nvars(), 0), GaussianRational(1)}};
  for (std::size_t w = 1; w < comp.size(); ++w) {
    PuiseuxSeries::TermMap acc;
    for (std::size_t k = 1; k <= w; ++k) accumulate(acc, comp[k], out[w - k], static_cast<long>(k));
    out[w] = to_component(std::move(acc), GaussianRational(Rational(1, static_cast<long>(w))));
  }
  return from_components(a.grid(), a.offset(), a.order(), out);
}

PuiseuxSeries pow_rational(const PuiseuxSeries& a, const Rational& alpha, Branch branch) {
  Rational al = alpha;
  al.canonicalize();
  bool half = al.get_den() == 2;
  if (branch == Branch::Negative && !half)
    throw std::invalid_argument("branch selection only applies to half-integer exponents");
  if (is_integer(al) && sgn(al) >= 0) return pow_int(a, al.get_num().get_si());
  if (a.is_zero()) throw NonUnit("rational power of the zero series");
  GaussianRational c = a.constant_term();
  if (c.is_zero()) throw NonUnit("rational power of a series with zero constant term");

  GaussianRational cpow;
  if (is_integer(al)) {
    cpow = c.pow(al.get_num().get_si());
  } else if (c.is_one()) {
    cpow = GaussianRational(1);
  } else if (half) {
    auto root = c.sqrt();
    if (!root) throw NonRepresentableConstantPower("constant " + c.to_string() + " has no exact square root");
    cpow = root->pow(al.get_num().get_si());
  } else {
    throw NonRepresentableConstantPower("constant " + c.to_string() + "^" + al.get_str() +
                                        " is not a Gaussian rational");
  }
  if (branch == Branch::Negative) cpow = -cpow;

  PuiseuxSeries unit(a.grid(), a.order());
  GaussianRational cinv = c.inverse();
  for (const auto& [e, v] : a.terms()) unit.set_term(e, v * cinv);
  PuiseuxSeries log_a = log_unit(unit);
  log_a *= GaussianRational(al);
  PuiseuxSeries result = exp_series(log_a);
  result *= cpow;
  std::vector<Rational> offset(a.offset());
  for (auto& q : offset) {
    q *= al;
    q.canonicalize();
  }
  return result.shifted(offset);
}

PuiseuxSeries theta(const PuiseuxSeries& a, std::size_t j) {
  if (j >= a.nvars()) throw std::out_of_range("theta: variable index out of range");
  PuiseuxSeries out(a.grid(), a.offset(), a.order());
  for (const auto& [e, c] : a.terms()) {
    Rational q = a.offset()[j] + Rational(e[j], a.grid().ram[j]);
    q.canonicalize();
    if (sgn(q) == 0) continue;
    out.set_term(e, c * GaussianRational(q));
  }
  return out;
}

namespace {

std::pair<PuiseuxSeries, Exponent> grid_monomial(const PuiseuxSeries& a, const std::vector<Rational>& m) {
  if (m.size() != a.nvars()) throw std::invalid_argument("monomial has wrong number of variables");
  std::vector<int> ram = a.grid().ram;
  for (std::size_t j = 0; j < m.size(); ++j) {
    Rational q = m[j];
    q.canonicalize();
    ram[j] = static_cast<int>(lcm_long(ram[j], q.get_den().get_si()));
  }
  PuiseuxSeries x = a.regrid(ram);
  Exponent me(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    Rational q = m[j] * ram[j];
    q.canonicalize();
    me[j] = static_cast<int>(q.get_num().get_si());
  }
  return {std::move(x), std::move(me)};
}

}  // namespace

std::optional<std::vector<Rational>> first_non_divisible(const PuiseuxSeries& a, const std::vector<Rational>& m) {
  auto [x, me] = grid_monomial(a, m);
  for (const auto& [w, e] : weighted_order(x)) {
    for (std::size_t j = 0; j < me.size(); ++j)
      if ((*e)[j] < me[j]) return x.absolute_exponent(*e);
  }
  return std::nullopt;
}

PuiseuxSeries monomial_div(const PuiseuxSeries& a, const std::vector<Rational>& m, DivisionMode mode) {
  if (mode == DivisionMode::Shift) {
    std::vector<Rational> neg(m);
    for (auto& q : neg) q = -q;
    return a.shifted(neg);
  }
  auto [x, me] = grid_monomial(a, m);
  if (auto bad = first_non_divisible(a, m)) {
    GaussianRational c;
    for (const auto& [e, v] : x.terms())
      if (x.absolute_exponent(e) == *bad) c = v;
    throw NotDivisible("series not divisible by " + format_exponent(m) + ": offending monomial " +
                           format_exponent(*bad),
                       *bad, c);
  }
  for (int v : me)
    if (v < 0) throw std::invalid_argument("strict division by a monomial with negative exponent");
  PuiseuxSeries out(x.grid(), x.offset(), x.order() - x.grid().weight(me));
  for (const auto& [e, c] : x.terms()) {
    Exponent ne(e);
    for (std::size_t j = 0; j < ne.size(); ++j) ne[j] -= me[j];
    out.set_term(ne, c);
  }
  return out;
}

PuiseuxSeries negate_variable(const PuiseuxSeries& a, std::size_t j) {
  PuiseuxSeries out(a.grid(), a.offset(), a.order());
  static const GaussianRational phases[4] = {GaussianRational(1), GaussianRational::i(), GaussianRational(-1),
                                             -GaussianRational::i()};
  for (const auto& [e, c] : a.terms()) {
    long twice = 2L * e[j];
    if (twice % a.grid().ram[j] != 0)
      throw std::domain_error("negate_variable: exponent outside the half-integer lattice");
    long q = ((twice / a.grid().ram[j]) % 4 + 4) % 4;
    out.set_term(e, c * phases[q]);
  }
  return out;
}

PuiseuxSeries restrict_zero(const PuiseuxSeries& a, std::size_t j) {
  if (sgn(a.offset()[j]) != 0 && !a.is_zero()) throw std::domain_error("restrict_zero: nonzero offset");
  PuiseuxSeries out(a.grid(), a.offset(), a.order());
  for (const auto& [e, c] : a.terms())
    if (e[j] == 0) out.set_term(e, c);
  return out;
}

std::optional<MismatchCertificate> first_difference(const PuiseuxSeries& expected, const PuiseuxSeries& actual) {
  auto [x, y] = align(expected, actual);
  long order = std::min(x.order(), y.order());
  std::vector<std::pair<long, Exponent>> keys;
  for (const auto& [e, c] : x.terms())
    if (x.weight(e) < order) keys.emplace_back(x.weight(e), e);
  for (const auto& [e, c] : y.terms())
    if (y.weight(e) < order && !x.terms().count(e)) keys.emplace_back(y.weight(e), e);
  std::sort(keys.begin(), keys.end());
  for (const auto& [w, e] : keys) {
    GaussianRational cx = x.coeff(e), cy = y.coeff(e);
    if (cx != cy) return MismatchCertificate{x.absolute_exponent(e), cx, cy, {}};
  }
  return std::nullopt;
}

}  // namespace ahg
