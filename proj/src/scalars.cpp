#include "ahg/scalars.hpp"

#include <cctype>
#include <string>

namespace ahg {

namespace {

std::string strip(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s = strip(text);
  if (s.empty()) throw ParseError("empty rational literal");
  if (s.front() == '+') s.erase(0, 1);
  auto valid = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-') throw ParseError("malformed rational literal '" + s + "'");
  Integer d(den);
  if (d == 0) throw ParseError("zero denominator in '" + s + "'");
  Rational q(Integer(num), d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  const Integer& n = q.get_num();
  const Integer& d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  Integer sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  Rational out(sn, sd);
  out.canonicalize();
  return out;
}

GaussianRational GaussianRational::parse(std::string_view text) {
  std::string s = strip(text);
  if (s.empty()) throw ParseError("empty Gaussian rational literal");
  // Split at the last top-level sign that is not the leading one.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if (s[k] == '+' || s[k] == '-') {
      split = k;
      break;
    }
  }
  auto imag_part = [](std::string part) -> std::optional<Rational> {
    if (part.empty() || part.back() != 'i') return std::nullopt;
    part.pop_back();
    if (!part.empty() && part.back() == '*') part.pop_back();
    if (part.empty() || part == "+") return Rational(1);
    if (part == "-") return Rational(-1);
    return parse_rational(part);
  };
  if (split == std::string::npos) {
    if (auto im = imag_part(s)) return {Rational(0), *im};
    return GaussianRational(parse_rational(s));
  }
  std::string head = s.substr(0, split);
  std::string tail = s.substr(split);
  auto im = imag_part(tail);
  if (!im) {
    // No imaginary unit: the whole thing must be a single rational like "-1/2".
    return GaussianRational(parse_rational(s));
  }
  return {parse_rational(head), *im};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0) im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0) im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero Gaussian rational");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    if (sgn(im_) != 0) im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

void GaussianRational::add_product(const GaussianRational& a, const GaussianRational& b) {
  if (sgn(a.im_) == 0 && sgn(b.im_) == 0) {
    mpq_class t = a.re_ * b.re_;
    re_ += t;
    return;
  }
  *this += a * b;
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero Gaussian rational");
  Rational n = norm();
  return {re_ / n, -im_ / n};
}

GaussianRational GaussianRational::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  GaussianRational result(1), base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

std::optional<GaussianRational> GaussianRational::sqrt() const {
  if (is_zero()) return GaussianRational(0);
  if (is_real()) {
    if (sgn(re_) > 0) {
      auto s = exact_sqrt(re_);
      if (!s) return std::nullopt;
      return GaussianRational(*s);
    }
    auto s = exact_sqrt(-re_);
    if (!s) return std::nullopt;
    return GaussianRational(Rational(0), *s);
  }
  // x² − y² = a, 2xy = b, x² = (a + |z|)/2.
  auto modulus = exact_sqrt(norm());
  if (!modulus) return std::nullopt;
  Rational x2 = (re_ + *modulus) / 2;
  auto x = exact_sqrt(x2);
  if (!x || sgn(*x) == 0) return std::nullopt;
  Rational y = im_ / (2 * *x);
  return GaussianRational(*x, y);
}

std::string GaussianRational::to_string() const {
  if (is_real()) return re_.get_str();
  std::string imag;
  if (im_ == 1)
    imag = "i";
  else if (im_ == -1)
    imag = "-i";
  else
    imag = im_.get_str() + "*i";
  if (sgn(re_) == 0) return imag;
  if (sgn(im_) > 0) return re_.get_str() + "+" + imag;
  return re_.get_str() + imag;
}

Rational invgamma_ratio(const Rational& gamma, long l) {
  if (is_integer(gamma) && sgn(gamma) < 0)
    throw DegenerateBase("Γ-series base entry " + gamma.get_str() + " is a negative integer");
  Rational out(1);
  if (l >= 0) {
    for (long j = 1; j <= l; ++j) out *= gamma + j;
    return 1 / out;
  }
  for (long j = 0; j < -l; ++j) {
    Rational factor = gamma - j;
    if (sgn(factor) == 0) return Rational(0);
    out *= factor;
  }
  return out;
}

Rational pochhammer(const Rational& a, long n) {
  Rational out(1);
  for (long j = 0; j < n; ++j) out *= a + j;
  return out;
}

}  // namespace ahg
