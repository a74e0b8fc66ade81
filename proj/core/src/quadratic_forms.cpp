#include "cllab/quadratic_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cllab/abelian_groups.hpp"
#include "cllab/error.hpp"
#include "cllab/smith.hpp"

namespace cllab {

namespace {

using i128 = __int128;

std::int64_t isqrt(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::int64_t floor_mod(i128 x, std::int64_t m) {
  i128 r = x % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

// g = gcd(|a|, |b|) >= 0 with x a + y b = g
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const std::int64_t q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

bool is_squarefree(std::int64_t n) {
  n = std::abs(n);
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

Form reduce_definite(Form f) {
  auto normalize = [](Form& g) {
    const std::int64_t d = g.discriminant();
    if (-g.a < g.b && g.b <= g.a) return;
    std::int64_t r = floor_mod(g.b, 2 * g.a);
    if (r > g.a) r -= 2 * g.a;
    g.b = r;
    g.c = (r * r - d) / (4 * g.a);
  };
  normalize(f);
  while (f.a > f.c) {
    f = Form{f.c, -f.b, f.a};
    normalize(f);
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

bool is_reduced_indefinite(const Form& f, std::int64_t s) {
  const std::int64_t a2 = 2 * std::abs(f.a);
  return f.b > 0 && f.b <= s && s - f.b < a2 && a2 <= s + f.b;
}

}  // namespace

std::string Form::to_string() const {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

bool is_fundamental_discriminant(std::int64_t d) {
  if (d == 0 || d == 1) return false;
  const std::int64_t m4 = floor_mod(d, 4);
  if (m4 == 1) return is_squarefree(d);
  if (m4 != 0) return false;
  const std::int64_t e = d / 4;
  const std::int64_t e4 = floor_mod(e, 4);
  return (e4 == 2 || e4 == 3) && is_squarefree(e);
}

int kronecker(std::int64_t d, std::int64_t n) {
  if (n <= 0) throw Error("kronecker: n must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    const std::int64_t m8 = floor_mod(d, 8);
    if (m8 % 2 == 0) return 0;
    if (m8 == 3 || m8 == 5) result = -result;
  }
  // Jacobi symbol (d/n) for odd n
  std::int64_t a = floor_mod(d, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

Form principal_form(std::int64_t d) {
  const std::int64_t b = floor_mod(d, 2);
  const Form f{1, b, (b * b - d) / 4};
  return d < 0 ? f : canonical(f);
}

Form rho(const Form& f) {
  const std::int64_t d = f.discriminant();
  const std::int64_t s = isqrt(d);
  const std::int64_t c = std::abs(f.c);
  const std::int64_t lower = c > s ? -c + 1 : s - 2 * c + 1;
  const std::int64_t r = lower + floor_mod(i128(-f.b) - lower, 2 * c);
  return Form{f.c, r, static_cast<std::int64_t>((i128(r) * r - d) / (4 * i128(f.c)))};
}

Form reduce(Form f) {
  const std::int64_t d = f.discriminant();
  if (d < 0) {
    if (f.a < 0) throw Error("reduce: negative definite form " + f.to_string());
    return reduce_definite(f);
  }
  const std::int64_t s = isqrt(d);
  if (s * s == d) throw Error("reduce: square discriminant");
  for (int guard = 0; !is_reduced_indefinite(f, s); ++guard) {
    if (guard > 100000) throw InvariantViolation("reduce: no reduced form reached from " + f.to_string());
    f = rho(f);
  }
  return f;
}

std::vector<Form> cycle(const Form& f) {
  std::vector<Form> out{f};
  for (Form g = rho(f); g != f; g = rho(g)) {
    out.push_back(g);
    if (out.size() > 10'000'000) throw InvariantViolation("cycle: runaway cycle");
  }
  return out;
}

Form canonical(const Form& f) {
  if (f.discriminant() < 0) return reduce_definite(f);
  const Form r = reduce(f);
  Form best = r;
  for (Form g = rho(r); g != r; g = rho(g)) best = std::min(best, g);
  return best;
}

Form compose(const Form& f, const Form& g) {
  const std::int64_t d = f.discriminant();
  if (g.discriminant() != d) throw Error("compose: discriminants differ");
  const std::int64_t s = (f.b + g.b) / 2;
  std::int64_t u1, v1, x, w;
  const std::int64_t g1 = ext_gcd(f.a, g.a, u1, v1);
  const std::int64_t e = ext_gcd(g1, s, x, w);
  const i128 v = i128(x) * v1;
  const i128 a3 = i128(f.a / e) * (g.a / e);
  const std::int64_t m = static_cast<std::int64_t>(2 * (a3 < 0 ? -a3 : a3));
  const i128 t = (floor_mod(v * (s - g.b) - i128(w) * g.c, m) * i128(g.a / e)) % m;
  const std::int64_t b3 = floor_mod(i128(g.b) + 2 * t, m);
  const i128 num = i128(b3) * b3 - d;
  if (num % (4 * a3) != 0) throw InvariantViolation("compose: non-integral result");
  return Form{static_cast<std::int64_t>(a3), b3, static_cast<std::int64_t>(num / (4 * a3))};
}

Form inverse(const Form& f) { return canonical(Form{f.a, -f.b, f.c}); }

Form multiply(const Form& f, const Form& g) { return canonical(compose(f, g)); }

Form power(const Form& f, std::uint64_t n) {
  Form result = principal_form(f.discriminant());
  Form base = canonical(f);
  while (n > 0) {
    if (n & 1) result = multiply(result, base);
    n >>= 1;
    if (n) base = multiply(base, base);
  }
  return result;
}

std::vector<Form> reduced_forms(std::int64_t d) {
  std::vector<Form> out;
  if (d < 0) {
    for (std::int64_t b = floor_mod(d, 2); 3 * b * b <= -d; b += 2) {
      const std::int64_t n = (b * b - d) / 4;
      for (std::int64_t a = std::max<std::int64_t>(b, 1); a * a <= n; ++a) {
        if (n % a != 0) continue;
        const std::int64_t c = n / a;
        if (std::gcd(std::gcd(a, b), c) != 1) continue;
        out.push_back(Form{a, b, c});
        if (b > 0 && b < a && a < c) out.push_back(Form{a, -b, c});
      }
    }
  } else {
    const std::int64_t s = isqrt(d);
    for (std::int64_t b = floor_mod(d, 2) == 1 ? 1 : 2; b <= s; b += 2) {
      const std::int64_t n = (d - b * b) / 4;
      for (std::int64_t t = std::max<std::int64_t>((s - b) / 2 + 1, 1); 2 * t <= s + b; ++t) {
        if (n % t != 0 || 2 * t <= s - b) continue;
        for (std::int64_t a : {t, -t}) {
          const std::int64_t c = -n / a;
          if (std::gcd(std::gcd(t, b), std::abs(c)) == 1) out.push_back(Form{a, b, c});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t count_form_classes(std::int64_t d) {
  const auto forms = reduced_forms(d);
  if (d < 0) return static_cast<std::int64_t>(forms.size());
  std::unordered_map<Form, bool, FormHash> seen;
  std::int64_t classes = 0;
  for (const auto& f : forms) {
    if (seen.count(f)) continue;
    ++classes;
    for (const auto& g : cycle(f)) seen[g] = true;
  }
  return classes;
}

std::optional<Form> prime_form(std::int64_t d, std::int64_t p) {
  if (kronecker(d, p) == -1) return std::nullopt;
  const std::int64_t m = 4 * p;
  for (std::int64_t b = 0; b < 2 * p; ++b) {
    if (floor_mod(i128(b) * b - d, m) == 0) return Form{p, b, (b * b - d) / m};
  }
  return std::nullopt;
}

// ----------------------------------------------------------------- ClassGroup

ClassGroup::ClassGroup(std::int64_t d, const Options& opts) : d_(d) {
  if (!is_fundamental_discriminant(d)) throw Error("class group: " + std::to_string(d) + " is not fundamental");
  if (std::abs(d) > opts.max_abs_discriminant) {
    throw CapExceeded("class group: |D| = " + std::to_string(std::abs(d)) + " exceeds the budget " +
                      std::to_string(opts.max_abs_discriminant));
  }
  const Form one = principal_form(d);
  elements_.push_back(one);
  exponents_.push_back({});
  index_.emplace(one, 0);

  // d < 0: every class has a reduced form with a <= sqrt(|d|/3), a product of prime
  // forms of primes dividing a. d > 0: Minkowski bound sqrt(d)/2 for the wide group.
  const std::int64_t bound = d < 0 ? isqrt(-d / 3) : isqrt(d / 4);
  std::vector<std::vector<std::int64_t>> relations;
  for (std::int64_t p = 2; p <= bound; ++p) {
    if (opts.known_order && form_group_order() >= *opts.known_order) break;
    if (!is_prime(p)) continue;
    const auto pf = prime_form(d, p);
    if (!pf) continue;
    const Form gen = canonical(*pf);
    if (index_.count(gen)) continue;
    std::int64_t k = 1;
    Form x = gen;
    while (!index_.count(x)) {
      x = multiply(x, gen);
      ++k;
    }
    const auto& back = exponents_[index_.at(x)];
    std::vector<std::int64_t> row(generators_.size() + 1, 0);
    for (std::size_t j = 0; j < back.size(); ++j) row[j] = -back[j];
    row.back() = k;
    for (auto& r : relations) r.push_back(0);
    relations.push_back(row);
    for (auto& e : exponents_) e.push_back(0);

    const std::size_t old = elements_.size();
    Form step = gen;
    for (std::int64_t j = 1; j < k; ++j) {
      for (std::size_t i = 0; i < old; ++i) {
        const Form y = multiply(elements_[i], step);
        auto e = exponents_[i];
        e.back() = j;
        index_.emplace(y, elements_.size());
        elements_.push_back(y);
        exponents_.push_back(std::move(e));
      }
      step = multiply(step, gen);
    }
    generators_.push_back(gen);
  }

  const std::size_t r = generators_.size();
  if (r > 0) {
    IntMatrix rel(r, r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) rel(i, j) = relations[i][j];
    }
    const SmithResult snf = smith_normal_form(rel);
    transform_.assign(r, std::vector<std::int64_t>(r, 0));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) transform_[i][j] = snf.column_transform(i, j);
    }
    full_diagonal_ = snf.diagonal;
  }
  std::int64_t prod = 1;
  for (std::size_t c = 0; c < full_diagonal_.size(); ++c) {
    std::int64_t n = full_diagonal_[c];
    prod *= n;
    if (d > 0) {
      while (n % 2 == 0) n /= 2;
    }
    if (n > 1) {
      exposed_columns_.push_back(c);
      invariants_.push_back(n);
    }
  }
  if (prod != form_group_order()) throw InvariantViolation("class group: Smith form order differs from table size");
}

std::int64_t ClassGroup::order() const {
  std::int64_t h = 1;
  for (auto x : invariants_) h *= x;
  return h;
}

std::vector<std::int64_t> ClassGroup::coordinates(const Form& f) const {
  if (f.discriminant() != d_) throw Error("class group: form " + f.to_string() + " has the wrong discriminant");
  auto it = index_.find(canonical(f));
  if (it == index_.end()) throw InvariantViolation("class group: class of " + f.to_string() + " not generated");
  const auto& e = exponents_[it->second];
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < exposed_columns_.size(); ++k) {
    const std::size_t col = exposed_columns_[k];
    i128 x = 0;
    for (std::size_t i = 0; i < e.size(); ++i) x += i128(e[i]) * transform_[i][col];
    out.push_back(floor_mod(x, invariants_[k]));
  }
  return out;
}

Form split_prime_delta_form(std::int64_t d, std::int64_t p) {
  if (!is_prime(p) || kronecker(d, p) != 1) {
    throw Error(std::to_string(p) + " does not split in Q(sqrt " + std::to_string(d) + ")");
  }
  return power(*prime_form(d, p), 2);
}

std::vector<std::int64_t> split_prime_delta(const ClassGroup& cl, std::int64_t p) {
  return cl.coordinates(split_prime_delta_form(cl.discriminant(), p));
}

}  // namespace cllab
