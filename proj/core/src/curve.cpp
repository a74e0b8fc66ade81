#include "cllab/curve.hpp"

#include <cmath>
#include <complex>

#include "cllab/error.hpp"

namespace cllab {

std::string to_string(Model m) {
  switch (m) {
    case Model::Split:
      return "split";
    case Model::Inert:
      return "inert";
    case Model::Ramified:
      return "ramified";
  }
  return "?";
}

Model parse_model(const std::string& s) {
  if (s == "split") return Model::Split;
  if (s == "inert") return Model::Inert;
  if (s == "ramified") return Model::Ramified;
  throw Error("unknown model '" + s + "' (expected split, inert or ramified)");
}

namespace {

std::string poly_string(const Poly& f) {
  if (f.empty()) return "0";
  std::string out;
  for (int i = deg(f); i >= 0; --i) {
    const auto c = f[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!out.empty()) out += " + ";
    if (c != 1 || i == 0) out += std::to_string(c);
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

}  // namespace

Curve Curve::make(std::uint32_t q, Poly f, Model model) {
  const PrimeField k(q);
  for (auto& c : f) c %= q;
  trim(f);
  const int d = deg(f);
  if (d < 1) throw Error("Curve: f must have degree >= 1");
  const bool even = d % 2 == 0;
  if ((model == Model::Ramified) == even) {
    throw Error("Curve: degree " + std::to_string(d) + " does not fit the " + cllab::to_string(model) + " model");
  }
  const std::uint32_t lead = model == Model::Inert ? k.nonresidue() : 1;
  if (f.back() != lead) throw Error("Curve: leading coefficient must be " + std::to_string(lead));
  if (!is_squarefree(k, f)) throw Error("Curve: f is not squarefree");
  Curve c;
  c.q = q;
  c.f = std::move(f);
  c.model = model;
  c.genus = even ? (d - 2) / 2 : (d - 1) / 2;
  return c;
}

std::string Curve::to_string() const {
  return "y^2 = " + poly_string(f) + " over F_" + std::to_string(q) + " (" + cllab::to_string(model) + ")";
}

std::uint64_t count_curves(std::uint32_t q, int deg_f) {
  if (deg_f < 1) return 0;
  std::uint64_t n = 1;
  for (int i = 0; i < deg_f - 1; ++i) n *= q;
  return deg_f == 1 ? q : n * q - n;
}

std::vector<Curve> enumerate_curves(std::uint32_t q, int deg_f, Model model) {
  if (deg_f < 1) throw Error("enumerate_curves: degree must be >= 1");
  if ((model == Model::Ramified) == (deg_f % 2 == 0)) {
    throw Error("enumerate_curves: degree " + std::to_string(deg_f) + " does not fit the " + to_string(model) +
                " model");
  }
  const PrimeField k(q);
  const std::uint32_t lead = model == Model::Inert ? k.nonresidue() : 1;
  std::uint64_t count = 1;
  for (int i = 0; i < deg_f; ++i) count *= q;
  std::vector<Curve> out;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f = poly_from_index(idx, q);
    f.resize(static_cast<std::size_t>(deg_f) + 1, 0);
    f.back() = lead;
    if (!is_squarefree(k, f)) continue;
    Curve c;
    c.q = q;
    c.f = std::move(f);
    c.model = model;
    c.genus = deg_f % 2 == 0 ? (deg_f - 2) / 2 : (deg_f - 1) / 2;
    out.push_back(std::move(c));
  }
  return out;
}

// ------------------------------------------------------------------ places

std::string Place::to_string() const {
  switch (kind) {
    case Kind::AffineSplit:
      return "(" + poly_string(u) + ", y=" + poly_string(v) + ")";
    case Kind::AffineInert:
      return "(" + poly_string(u) + ", inert)";
    case Kind::AffineRamified:
      return "(" + poly_string(u) + ", y=0)";
    case Kind::InfSplit:
      return "inf" + std::to_string(branch);
    case Kind::InfInert:
      return "inf(inert)";
    case Kind::InfRamified:
      return "inf";
  }
  return "?";
}

Divisor Divisor::of(const Place& p, int n) {
  Divisor d;
  d.add(p, n);
  return d;
}

int Divisor::degree() const {
  int s = 0;
  for (const auto& [p, n] : terms_) s += n * p.degree;
  return s;
}

int Divisor::coefficient(const Place& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? 0 : it->second;
}

bool Divisor::is_effective() const {
  for (const auto& [p, n] : terms_) {
    if (n < 0) return false;
  }
  return true;
}

Divisor& Divisor::add(const Place& p, int n) {
  if (n == 0) return *this;
  auto [it, fresh] = terms_.try_emplace(p, n);
  if (!fresh) {
    it->second += n;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

Divisor Divisor::operator+(const Divisor& o) const {
  Divisor r = *this;
  for (const auto& [p, n] : o.terms_) r.add(p, n);
  return r;
}

Divisor Divisor::operator-(const Divisor& o) const { return *this + (-o); }

Divisor Divisor::operator-() const { return *this * -1; }

Divisor Divisor::operator*(int n) const {
  Divisor r;
  if (n == 0) return r;
  for (const auto& [p, m] : terms_) r.terms_.emplace(p, m * n);
  return r;
}

std::string Divisor::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [p, n] : terms_) {
    if (!out.empty()) out += n < 0 ? " - " : " + ";
    else if (n < 0) out += "-";
    const int a = std::abs(n);
    if (a != 1) out += std::to_string(a) + "*";
    out += p.to_string();
  }
  return out;
}

std::vector<Place> infinite_places(const Curve& c) {
  Place p;
  switch (c.model) {
    case Model::Split:
      p.kind = Place::Kind::InfSplit;
      p.branch = 1;
      p.degree = 1;
      {
        Place p2 = p;
        p2.branch = 2;
        return {p, p2};
      }
    case Model::Inert:
      p.kind = Place::Kind::InfInert;
      p.degree = 2;
      return {p};
    case Model::Ramified:
      p.kind = Place::Kind::InfRamified;
      p.degree = 1;
      return {p};
  }
  return {};
}

std::vector<Place> places_over(const Curve& c, const Poly& u) {
  const PrimeField k(c.q);
  const Poly r = mod(k, c.f, u);
  Place p;
  p.u = u;
  if (r.empty()) {
    p.kind = Place::Kind::AffineRamified;
    p.degree = deg(u);
    return {p};
  }
  if (!is_square_mod_irreducible(k, r, u)) {
    p.kind = Place::Kind::AffineInert;
    p.degree = 2 * deg(u);
    return {p};
  }
  p.kind = Place::Kind::AffineSplit;
  p.degree = deg(u);
  p.v = sqrt_mod_irreducible(k, r, u);  // least index of the pair
  Place p2 = p;
  p2.v = neg(k, p.v);
  return {p, p2};
}

std::vector<Place> places_up_to_degree(const Curve& c, int max_degree) {
  std::vector<std::vector<Place>> by_degree(static_cast<std::size_t>(std::max(max_degree, 0)) + 1);
  for (int d = 1; d <= max_degree; ++d) {
    for (const auto& u : monic_irreducibles(c.q, d)) {
      for (auto& p : places_over(c, u)) {
        if (p.degree <= max_degree) by_degree[static_cast<std::size_t>(p.degree)].push_back(std::move(p));
      }
    }
  }
  std::vector<Place> out;
  for (auto& level : by_degree) {
    for (auto& p : level) out.push_back(std::move(p));
  }
  for (auto& p : infinite_places(c)) {
    if (p.degree <= max_degree) out.push_back(p);
  }
  return out;
}

// ------------------------------------------------------------ point counts

namespace {

std::int64_t infinite_points(const Curve& c, int i) {
  switch (c.model) {
    case Model::Split:
      return 2;
    case Model::Inert:
      return i % 2 == 0 ? 2 : 0;
    case Model::Ramified:
      return 1;
  }
  return 0;
}

}  // namespace

std::int64_t point_count(const Curve& c, int i) {
  if (i < 1) throw Error("point_count: i must be >= 1");
  std::int64_t affine = 0;
  if (i == 1) {
    const PrimeField k(c.q);
    for (std::uint32_t x = 0; x < c.q; ++x) {
      const std::uint32_t y2 = eval(k, c.f, x);
      affine += y2 == 0 ? 1 : (k.is_square(y2) ? 2 : 0);
    }
  } else {
    const auto field = ExtensionField::get(c.q, i);
    const auto size = static_cast<std::uint32_t>(field->size());
    std::int64_t chi_sum = 0;
    for (std::uint32_t x = 0; x < size; ++x) {
      std::uint32_t acc = 0;
      for (std::size_t j = c.f.size(); j-- > 0;) acc = field->add_scalar(field->mul(acc, x), c.f[j]);
      chi_sum += field->chi(acc);
    }
    affine = static_cast<std::int64_t>(size) + chi_sum;
  }
  return affine + infinite_points(c, i);
}

std::int64_t point_count_from_places(const Curve& c, int i) {
  if (i < 1) throw Error("point_count_from_places: i must be >= 1");
  std::int64_t total = infinite_points(c, i);
  for (int d = 1; d <= i; ++d) {
    for (const auto& u : monic_irreducibles(c.q, d)) {
      for (const auto& p : places_over(c, u)) {
        if (i % p.degree == 0) total += p.degree;
      }
    }
  }
  return total;
}

// ------------------------------------------------------------ L-polynomial

std::int64_t LPolynomial::at_one() const {
  std::int64_t s = 0;
  for (auto a : coeffs) s += a;
  return s;
}

bool LPolynomial::functional_equation_ok(std::uint32_t q) const {
  const int two_g = static_cast<int>(coeffs.size()) - 1;
  if (two_g < 0 || two_g % 2 != 0 || coeffs[0] != 1) return false;
  const int g = two_g / 2;
  for (int i = 0; i <= g; ++i) {
    std::int64_t qp = 1;
    for (int j = 0; j < g - i; ++j) qp *= q;
    if (coeffs[static_cast<std::size_t>(two_g - i)] != qp * coeffs[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

bool LPolynomial::weil_bounds_ok(std::uint32_t q) const {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n <= 0) return true;
  // Durand-Kerner on the monic polynomial T^n L(1/T) / a_0 whose roots are the alpha_j.
  using C = std::complex<double>;
  std::vector<C> mon(static_cast<std::size_t>(n) + 1);  // mon[k] = coefficient of z^k
  for (int k = 0; k <= n; ++k) mon[static_cast<std::size_t>(k)] = static_cast<double>(coeffs[static_cast<std::size_t>(n - k)]);
  auto evalp = [&](C z) {
    C r = 0;
    for (int k = n; k >= 0; --k) r = r * z + mon[static_cast<std::size_t>(k)];
    return r;
  };
  std::vector<C> roots(static_cast<std::size_t>(n));
  const C seed(0.4, 0.9);
  for (int k = 0; k < n; ++k) roots[static_cast<std::size_t>(k)] = std::pow(seed, k) * std::sqrt(double(q));
  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0;
    for (int k = 0; k < n; ++k) {
      C denom = 1;
      for (int j = 0; j < n; ++j) {
        if (j != k) denom *= roots[static_cast<std::size_t>(k)] - roots[static_cast<std::size_t>(j)];
      }
      const C delta = evalp(roots[static_cast<std::size_t>(k)]) / denom;
      roots[static_cast<std::size_t>(k)] -= delta;
      change = std::max(change, std::abs(delta));
    }
    if (change < 1e-13) break;
  }
  const double target = std::sqrt(double(q));
  for (const auto& r : roots) {
    if (std::abs(std::abs(r) - target) > 1e-5 * target) return false;
  }
  return true;
}

LPolynomial l_polynomial_from_counts(std::uint32_t q, int genus, const std::vector<std::int64_t>& counts) {
  if (static_cast<int>(counts.size()) < genus) throw Error("l_polynomial: need point counts N_1..N_g");
  std::vector<std::int64_t> s(static_cast<std::size_t>(genus) + 1, 0);
  std::int64_t qi = 1;
  for (int i = 1; i <= genus; ++i) {
    qi *= q;
    s[static_cast<std::size_t>(i)] = qi + 1 - counts[static_cast<std::size_t>(i - 1)];
  }
  LPolynomial L;
  L.coeffs.assign(static_cast<std::size_t>(2 * genus) + 1, 0);
  L.coeffs[0] = 1;
  for (int k = 1; k <= genus; ++k) {
    std::int64_t acc = 0;
    for (int i = 1; i <= k; ++i) acc += s[static_cast<std::size_t>(i)] * L.coeffs[static_cast<std::size_t>(k - i)];
    if (acc % k != 0) throw InvariantViolation("l_polynomial: Newton identity not integral");
    L.coeffs[static_cast<std::size_t>(k)] = -acc / k;
  }
  for (int i = 0; i < genus; ++i) {
    std::int64_t qp = 1;
    for (int j = 0; j < genus - i; ++j) qp *= q;
    L.coeffs[static_cast<std::size_t>(2 * genus - i)] = qp * L.coeffs[static_cast<std::size_t>(i)];
  }
  return L;
}

LPolynomial l_polynomial(const Curve& c) {
  std::vector<std::int64_t> counts;
  for (int i = 1; i <= c.genus; ++i) counts.push_back(point_count(c, i));
  return l_polynomial_from_counts(c.q, c.genus, counts);
}

}  // namespace cllab
