#include <algorithm>
#include <sstream>

#include "ahg/family.hpp"

namespace ahg {

namespace {

// Built-in families other than the FC series, in the family file format.
const char* const kBuiltin = R"FAMILIES(
family Gauss-1
title Gauss 2F1(r,-r;1/2;z), sum of conjugate powers
variables z
grid 2
config
  1 0 0 1
  0 1 0 1
  0 0 1 -1
end
h 1 1 1
lattice
  -1 -1 1 1
end
beta -r, r, -1/2
basis 1 2 3
basis 1 2 4
coefficients 1, 0
horn theta(z)*(theta(z) - 1/2) - z*(theta(z) + r)*(theta(z) - r)
c = sqrt(1 - z)
phi = ((c + i*sqrt(z))^(2*r) + (c - i*sqrt(z))^(2*r))/2
power-form no
order 24

family Gauss-2
title Gauss 2F1(r,r+1/2;1/2;z), sum of powers
variables z
grid 2
config
  1 0 0 1
  0 1 0 1
  0 0 1 -1
end
h 1 1 1
lattice
  -1 -1 1 1
end
beta -r, -r - 1/2, -1/2
basis 1 2 3
basis 1 2 4
coefficients 1, 0
horn theta(z)*(theta(z) - 1/2) - z*(theta(z) + r)*(theta(z) + r + 1/2)
phi = ((1 + sqrt(z))^(-2*r) + (1 - sqrt(z))^(-2*r))/2
power-form no
order 24

family Gauss-3
title Gauss 2F1(r,r+1/2;2r;z), power form f^r g
variables z
grid 2
config
  1 0 0 1
  0 1 0 1
  0 0 1 -1
end
h 1 1 1
lattice
  -1 -1 1 1
end
beta -r, -r - 1/2, 2*r - 1
basis 1 2 3
basis 1 2 4
coefficients 1, 0
horn theta(z)*(theta(z) + 2*r - 1) - z*(theta(z) + r)*(theta(z) + r + 1/2)
s = sqrt(1 - z)
f = ((1 + s)/2)^(-2)
g = ((1 + s)/2)/s
phi = f^r*g
order 24

family G3
title Horn G3(r,1-r|x,y), cubic algebraic root
variables x y
grid 1 1
signs -1 -1
config
  1 0 -1 2
  1 1 1 1
end
h 0 1
lattice
  1 -2 1 0
  -2 1 0 1
end
beta -r, -1
basis 1 2
basis 2 3
basis 1 4
coefficients 1, 0, 0
horn theta(x)*(-theta(x) + 2*theta(y) + r) - x*(2*theta(x) - theta(y) - r + 1)*(2*theta(x) - theta(y) - r + 2)
horn theta(y)*(2*theta(x) - theta(y) + 1 - r) - y*(-theta(x) + 2*theta(y) + r)*(-theta(x) + 2*theta(y) + r + 1)
horn-rank 4
extra x^((r - 2)/3)*y^((-r - 1)/3)
f = algroot(y*F^3 + F^2 - F - x, 1)
g = -3*y^2*f^2 - 2*y*f + 4*y + 1
Delta = 1 + 4*x + 4*y + 18*x*y - 27*x^2*y^2
phi = f^r*sqrt(g/Delta)
curve y*F^3 + F^2 - F - x
discriminant Delta
variant table4-plus-x
  title Horn G3 with the cubic's constant term of opposite sign
  f = algroot(y*F^3 + F^2 - F + x, 1)
  curve y*F^3 + F^2 - F + x
  expect fail
end

family H4-1
title Horn H4(r,-r;1/2,1/2)
variables x y
grid 2 2
config
  1 0 0 0 2 1
  0 1 0 0 0 1
  0 0 1 0 -1 0
  0 0 0 1 0 -1
end
h 1 1 1 1
lattice
  -2 0 1 0 1 0
  -1 -1 0 1 0 1
end
beta -r, r, -1/2, -1/2
basis 1 2 3 4
basis 1 2 3 6
basis 1 2 4 5
basis 1 2 5 6
coefficients 1, -2*i*r, 2*r, -2*i*r*(2*r + 1)
horn theta(x)*(theta(x) - 1/2) - x*(2*theta(x) + theta(y) + r)*(2*theta(x) + theta(y) + r + 1)
horn theta(y)*(theta(y) - 1/2) - y*(2*theta(x) + theta(y) + r)*(theta(y) - r)
d = 1 - 2*sqrt(x)
n = d - 2*y
f = (n + 2*i*sqrt(y, s1)*sqrt(d - y))/d^2
phi = f^r
relation (f*d^2 - n)^2 - 4*y*(y - d)
variant as-printed
  title Horn H4(r,-r;1/2,1/2) with +2y in the numerator of f
  n = d + 2*y
  expect fail
end

family H4-2
title Horn H4(r,r+1/2;1/2,1/2)
variables x y
grid 2 2
config
  1 0 0 0 2 1
  0 1 0 0 0 1
  0 0 1 0 -1 0
  0 0 0 1 0 -1
end
h 1 1 1 1
lattice
  -2 0 1 0 1 0
  -1 -1 0 1 0 1
end
beta -r, -r - 1/2, -1/2, -1/2
basis 1 2 3 4
basis 1 2 3 6
basis 1 2 4 5
basis 1 2 5 6
coefficients 1, -2*r, 2*r, -2*r*(2*r + 1)
horn theta(x)*(theta(x) - 1/2) - x*(2*theta(x) + theta(y) + r)*(2*theta(x) + theta(y) + r + 1)
horn theta(y)*(theta(y) - 1/2) - y*(2*theta(x) + theta(y) + r)*(theta(y) + r + 1/2)
f = (sqrt(1 - 2*sqrt(x), s1) + sqrt(y))^(-2)
phi = f^r

family H4-3
title Horn H4(r,r+1/2;1/2,2r)
variables x y
grid 2 2
config
  1 0 0 0 2 1
  0 1 0 0 0 1
  0 0 1 0 -1 0
  0 0 0 1 0 -1
end
h 1 1 1 1
lattice
  -2 0 1 0 1 0
  -1 -1 0 1 0 1
end
beta -r, -r - 1/2, -1/2, 2*r - 1
basis 1 2 3 4
basis 1 2 3 6
basis 1 2 4 5
basis 1 2 5 6
coefficients 1, 0, 2*r, 0
horn theta(x)*(theta(x) - 1/2) - x*(2*theta(x) + theta(y) + r)*(2*theta(x) + theta(y) + r + 1)
horn theta(y)*(theta(y) + 2*r - 1) - y*(2*theta(x) + theta(y) + r)*(theta(y) + r + 1/2)
h = sqrt((2*sqrt(x) - 1)*(2*sqrt(x) + y - 1), s1)
f = (-16*sqrt(x) - 4*y + 8 - 4*h)/y^2
g = 1/2 + (1 - 2*sqrt(x))/(2*h)
phi = f^r*g
expect open

family H5
title Horn H5, quartic algebraic root with a double root at the origin
variables x y
grid 1 2
signs -1 1
config
  1 0 0 2 1
  0 1 0 -1 1
  0 0 1 0 -1
end
h 1 1 1
lattice
  -2 1 0 1 0
  -1 -1 1 0 1
end
beta -r, r, -1/2
basis 1 2 3
basis 1 2 5
basis 1 3 4
basis 1 4 5
coefficients 1, 2*i*r, 0, 0
horn theta(x)*(-theta(x) + theta(y) - r) - x*(2*theta(x) + theta(y) + r)*(2*theta(x) + theta(y) + r + 1)
horn theta(y)*(theta(y) - 1/2) - y*(2*theta(x) + theta(y) + r)*(-theta(x) + theta(y) - r)
f = algroot(x^2*F^4 + 2*x*F^3 + (1 - 2*x)*F^2 + (4*y - 2)*F + 1, 1, ram(1, 2), s1)
phi = f^r
curve x^2*F^4 + 2*x*F^3 + (1 - 2*x)*F^2 + (4*y - 2)*F + 1
)FAMILIES";

std::vector<std::string> fc_variables(std::size_t n) {
  if (n == 2) return {"x", "y"};
  std::vector<std::string> v;
  for (std::size_t j = 1; j <= n; ++j) v.push_back("z" + std::to_string(j));
  return v;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

std::vector<FamilySpec> parse_builtin() { return parse_families(kBuiltin, "<builtin>"); }

}  // namespace

std::string fc_family_text(int k, std::size_t n) {
  if (k < 1 || k > 3) throw UnknownFamily("FC families are numbered 1 to 3");
  if (n < 2 || n > 8) throw UnknownFamily("FC families are available for 2 <= n <= 8");
  auto vars = fc_variables(n);
  std::size_t cols = 2 * n + 2, rows = n + 2;
  std::ostringstream out;
  const char* params[] = {"", "r,-r;1/2,...,1/2", "r,r+1/2;1/2,...,1/2", "r,r+1/2;1/2,...,1/2,2r"};
  out << "family FC-" << k << "\n";
  out << "title " << (n == 2 ? "Appell F4(" : "Lauricella FC(") << params[k] << ") in " << n << " variables\n";
  out << "variables " << join(vars, " ") << "\n";
  out << "grid";
  for (std::size_t j = 0; j < n; ++j) out << " 2";
  out << "\nconfig\n";
  for (std::size_t j = 0; j < rows; ++j) {
    out << " ";
    for (std::size_t i = 0; i < cols; ++i) {
      long v = 0;
      if (i < rows) v = i == j ? 1 : 0;
      else if (j < 2) v = 1;
      else v = (i - rows == j - 2) ? -1 : 0;
      out << " " << v;
    }
    out << "\n";
  }
  out << "end\nh";
  for (std::size_t j = 0; j < rows; ++j) out << " 1";
  out << "\nlattice\n";
  for (std::size_t m = 0; m < n; ++m) {
    out << " ";
    for (std::size_t i = 0; i < cols; ++i) {
      long v = i < 2 ? -1 : (i == m + 2 || i == rows + m) ? 1 : 0;
      out << " " << v;
    }
    out << "\n";
  }
  out << "end\n";
  std::vector<std::string> beta;
  if (k == 1) beta = {"-r", "r"};
  else beta = {"-r", "-r - 1/2"};
  for (std::size_t j = 0; j < n; ++j) beta.push_back(k == 3 && j + 1 == n ? "2*r - 1" : "-1/2");
  out << "beta " << join(beta, ", ") << "\n";

  std::vector<std::vector<std::size_t>> simplices;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> s{1, 2};
    for (std::size_t j = 0; j < n; ++j) s.push_back((mask >> j) & 1 ? rows + j + 1 : j + 3);
    std::sort(s.begin(), s.end());
    simplices.push_back(s);
  }
  std::sort(simplices.begin(), simplices.end());
  for (const auto& s : simplices) {
    out << "basis";
    for (auto c : s) out << " " << c;
    out << "\n";
  }

  std::vector<std::string> roots;
  for (std::size_t j = 0; j < n; ++j) roots.push_back("sqrt(" + vars[j] + (k == 1 && j == 0 ? ", e1)" : ")"));
  if (n == 2) {
    const char* coeffs[] = {"", "1, 2*i*r, -2*i*r, 4*r^2", "1, 2*r, 2*r, 2*r*(2*r + 1)", "1, 0, 2*r, 0"};
    out << "coefficients " << coeffs[k] << "\n";
    std::string tx = "theta(x)", ty = "theta(y)", sum = "(theta(x) + theta(y) + r)";
    std::string second = k == 1 ? "(theta(x) + theta(y) - r)" : "(theta(x) + theta(y) + r + 1/2)";
    out << "horn " << tx << "*(" << tx << " - 1/2) - x*" << sum << "*" << second << "\n";
    out << "horn " << ty << "*(" << ty << (k == 3 ? " + 2*r - 1" : " - 1/2") << ") - y*" << sum << "*" << second
        << "\n";
  } else {
    out << "order 8\n";
  }
  if (k == 1) {
    out << "u = " << join(roots, " + ") << "\n";
    out << "h = 1 - 2*u^2\n";
    out << "f = h + 2*i*u*sqrt(1 - u^2, s1)\n";
    out << "phi = f^r\n";
    out << "relation (f - h)^2 - (h^2 - 1)\n";
  } else if (k == 2) {
    out << "f = (" << join(roots, " + ") << " - 1)^(-2)\n";
    out << "phi = f^r\n";
  } else {
    std::vector<std::string> head(roots.begin(), roots.end() - 1);
    const std::string& zn = vars.back();
    out << "h = " << join(head, " + ") << " - 1\n";
    out << "s = sqrt(h^2 - " << zn << ", s1)\n";
    out << "f = (8*h^2 - 4*" << zn << " + 8*h*s)/" << zn << "^2\n";
    out << "g = 1/2 - h/(2*s)\n";
    out << "phi = f^r*g\n";
  }
  return out.str();
}

const std::vector<FamilySpec>& registry() {
  static const std::vector<FamilySpec> families = registry_with_fc(2);
  return families;
}

std::vector<FamilySpec> registry_with_fc(std::size_t n) {
  static const std::vector<FamilySpec> builtin = parse_builtin();
  std::vector<FamilySpec> out;
  for (const auto& f : builtin)
    if (f.name.rfind("Gauss", 0) == 0) out.push_back(f);
  for (int k = 1; k <= 3; ++k) out.push_back(parse_families(fc_family_text(k, n), "<builtin FC>").front());
  for (const auto& f : builtin)
    if (f.name.rfind("Gauss", 0) != 0) out.push_back(f);
  return out;
}

std::vector<std::string> family_names() {
  std::vector<std::string> out;
  for (const auto& f : registry()) out.push_back(f.name);
  return out;
}

FamilySpec find_family(const std::string& name, std::size_t n) {
  std::string base = name, variant;
  if (auto slash = name.find('/'); slash != std::string::npos) {
    base = name.substr(0, slash);
    variant = name.substr(slash + 1);
  }
  if (base.size() == 4 && base.rfind("F4-", 0) == 0) {
    if (n != 2) throw UnknownFamily("F4 families have two variables; use FC-k for other n");
    base = "FC-" + base.substr(3);
  }
  std::optional<FamilySpec> found;
  if (base.rfind("FC-", 0) == 0 && base.size() == 4 && base[3] >= '1' && base[3] <= '3') {
    found = n == 2 ? registry()[3 + (base[3] - '1')]
                   : parse_families(fc_family_text(base[3] - '0', n), "<builtin FC>").front();
  } else {
    for (const auto& f : registry())
      if (f.name == base) found = f;
  }
  if (!found) throw UnknownFamily("unknown family '" + name + "' (known: " + join(family_names(), ", ") + ", F4-1..3)");
  if (!variant.empty()) return apply_variant(*found, variant);
  return *found;
}

}  // namespace ahg
