#include "cllab/prime_field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>

#include "cllab/abelian_groups.hpp"
#include "cllab/error.hpp"

namespace cllab {

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (!is_odd_prime(q) || q > 65521) throw Error("PrimeField: q must be an odd prime below 2^16");
  inv_.assign(q, 0);
  for (std::uint32_t a = 1; a < q; ++a) inv_[a] = pow(a, q - 2);
  square_.assign(q, false);
  sqrt_.assign(q, -1);
  for (std::uint32_t r = 0; r < q; ++r) {
    const std::uint32_t s = mul(r, r);
    square_[s] = true;
    if (sqrt_[s] < 0) sqrt_[s] = r;
  }
  for (std::uint32_t a = 2; a < q; ++a) {
    if (!square_[a]) {
      nonresidue_ = a;
      break;
    }
  }
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a % q_ == 0) throw Error("PrimeField: inverse of zero");
  return inv_[a % q_];
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint64_t r = 1, b = a % q_;
  while (e) {
    if (e & 1) r = r * b % q_;
    b = b * b % q_;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

std::int64_t PrimeField::sqrt(std::uint32_t a) const { return sqrt_[a % q_]; }

// ------------------------------------------------------------------ basics

int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_const(std::uint32_t c) { return c == 0 ? Poly{} : Poly{c}; }

Poly poly_x_minus(const PrimeField& k, std::uint32_t r) { return Poly{k.neg(r % k.q()), 1}; }

Poly poly_monomial(std::uint32_t c, int degree) {
  if (c == 0) return {};
  Poly p(static_cast<std::size_t>(degree) + 1, 0);
  p.back() = c;
  return p;
}

Poly add(const PrimeField& k, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = k.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  trim(r);
  return r;
}

Poly sub(const PrimeField& k, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = k.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  }
  trim(r);
  return r;
}

Poly neg(const PrimeField& k, const Poly& a) {
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = k.neg(a[i]);
  return r;
}

Poly scale(const PrimeField& k, const Poly& a, std::uint32_t c) {
  if (c % k.q() == 0) return {};
  Poly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = k.mul(a[i], c);
  return r;
}

Poly mul(const PrimeField& k, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  const std::uint64_t q = k.q();
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += std::uint64_t(a[i]) * b[j];
    if ((i & 255) == 255) {
      for (auto& x : acc) x %= q;
    }
  }
  Poly r(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<std::uint32_t>(acc[i] % q);
  trim(r);
  return r;
}

std::pair<Poly, Poly> divmod(const PrimeField& k, const Poly& a, const Poly& b) {
  if (b.empty()) throw Error("poly divmod: division by zero");
  if (a.size() < b.size()) return {{}, a};
  Poly r = a;
  Poly quo(a.size() - b.size() + 1, 0);
  const std::uint32_t lead_inv = k.inv(b.back());
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const std::uint32_t c = k.mul(r[i], lead_inv);
    quo[i - (b.size() - 1)] = c;
    if (c == 0) continue;
    const std::size_t shift = i - (b.size() - 1);
    for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] = k.sub(r[shift + j], k.mul(c, b[j]));
  }
  r.resize(b.size() - 1);
  trim(r);
  trim(quo);
  return {quo, r};
}

Poly mod(const PrimeField& k, const Poly& a, const Poly& b) {
  if (a.size() < b.size()) return a;
  return divmod(k, a, b).second;
}

Poly div_exact(const PrimeField& k, const Poly& a, const Poly& b) {
  auto [quo, r] = divmod(k, a, b);
  if (!r.empty()) throw Error("div_exact: nonzero remainder");
  return quo;
}

Poly mulmod(const PrimeField& k, const Poly& a, const Poly& b, const Poly& m) { return mod(k, mul(k, a, b), m); }

Poly powmod(const PrimeField& k, Poly base, std::uint64_t e, const Poly& m) {
  Poly r = mod(k, Poly{1}, m);
  base = mod(k, base, m);
  while (e) {
    if (e & 1) r = mulmod(k, r, base, m);
    e >>= 1;
    if (e) base = mulmod(k, base, base, m);
  }
  return r;
}

Poly pow(const PrimeField& k, const Poly& a, int e) {
  Poly r{1};
  for (int i = 0; i < e; ++i) r = mul(k, r, a);
  return r;
}

Poly monic(const PrimeField& k, const Poly& a) {
  if (a.empty()) return a;
  return scale(k, a, k.inv(a.back()));
}

Poly gcd(const PrimeField& k, Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = mod(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(k, a);
}

Poly invmod(const PrimeField& k, const Poly& a, const Poly& m) {
  // extended Euclid tracking the coefficient of a
  Poly r0 = m, r1 = mod(k, a, m);
  Poly s0{}, s1{1};
  while (!r1.empty()) {
    auto [quo, rem] = divmod(k, r0, r1);
    Poly s2 = sub(k, s0, mul(k, quo, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (deg(r0) != 0) throw Error("invmod: not invertible");
  return mod(k, scale(k, s0, k.inv(r0[0])), m);
}

Poly derivative(const PrimeField& k, const Poly& a) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = k.mul(a[i], static_cast<std::uint32_t>(i % k.q()));
  trim(r);
  return r;
}

std::uint32_t eval(const PrimeField& k, const Poly& a, std::uint32_t x) {
  std::uint32_t r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = k.add(k.mul(r, x), a[i]);
  return r;
}

int valuation(const PrimeField& k, Poly a, const Poly& u) {
  if (a.empty()) throw Error("valuation of zero");
  int v = 0;
  while (true) {
    auto [quo, r] = divmod(k, a, u);
    if (!r.empty()) return v;
    a = std::move(quo);
    ++v;
  }
}

bool is_squarefree(const PrimeField& k, const Poly& a) {
  if (a.empty()) return false;
  return deg(gcd(k, a, derivative(k, a))) == 0;
}

bool is_irreducible(const PrimeField& k, const Poly& a) {
  const int n = deg(a);
  if (n < 1) return false;
  if (n == 1) return true;
  const Poly f = monic(k, a);
  const Poly x{0, 1};
  Poly h = x;
  for (int d = 1; 2 * d <= n; ++d) {
    h = powmod(k, h, k.q(), f);
    if (deg(gcd(k, f, sub(k, h, x))) > 0) return false;
  }
  return true;
}

// ------------------------------------------------------------ factoring

namespace {

// Square-free decomposition in characteristic q: list of (square-free factor, multiplicity).
std::vector<std::pair<Poly, int>> squarefree_decomposition(const PrimeField& k, const Poly& f) {
  std::vector<std::pair<Poly, int>> out;
  Poly c = gcd(k, f, derivative(k, f));
  Poly w = div_exact(k, f, c);
  int i = 1;
  while (deg(w) > 0) {
    Poly y = gcd(k, w, c);
    Poly fac = div_exact(k, w, y);
    if (deg(fac) > 0) out.push_back({fac, i});
    w = y;
    c = div_exact(k, c, y);
    ++i;
  }
  if (deg(c) > 0) {
    // c is a polynomial in x^q: take the q-th root (coefficients are fixed by Frobenius).
    Poly root;
    for (std::size_t j = 0; j < c.size(); j += k.q()) root.push_back(c[j]);
    trim(root);
    for (auto& [g, m] : squarefree_decomposition(k, root)) out.push_back({g, m * static_cast<int>(k.q())});
  }
  return out;
}

void equal_degree_split(const PrimeField& k, const Poly& f, int d, std::mt19937_64& rng,
                        std::vector<Poly>& out) {
  if (deg(f) == d) {
    out.push_back(f);
    return;
  }
  const int n = deg(f);
  while (true) {
    Poly a(static_cast<std::size_t>(n));
    for (auto& c : a) c = static_cast<std::uint32_t>(rng() % k.q());
    trim(a);
    if (deg(a) < 1) continue;
    // a^((q^d - 1)/2) = (a^(1 + q + ... + q^(d-1)))^((q-1)/2)
    Poly t = a, s = a;
    for (int i = 1; i < d; ++i) {
      t = powmod(k, t, k.q(), f);
      s = mulmod(k, s, t, f);
    }
    s = powmod(k, s, (k.q() - 1) / 2, f);
    Poly g = gcd(k, f, sub(k, s, Poly{1}));
    if (deg(g) > 0 && deg(g) < n) {
      equal_degree_split(k, g, d, rng, out);
      equal_degree_split(k, div_exact(k, f, g), d, rng, out);
      return;
    }
  }
}

std::vector<Poly> factor_squarefree(const PrimeField& k, Poly f) {
  std::vector<Poly> out;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ poly_index(f, k.q()));
  const Poly x{0, 1};
  Poly h = x;
  for (int d = 1; 2 * d <= deg(f); ++d) {
    h = powmod(k, h, k.q(), f);
    Poly g = gcd(k, f, sub(k, h, x));
    if (deg(g) > 0) {
      equal_degree_split(k, g, d, rng, out);
      f = div_exact(k, f, g);
      h = mod(k, h, f);
    }
  }
  if (deg(f) > 0) out.push_back(monic(k, f));
  return out;
}

bool poly_less(const Poly& a, const Poly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

}  // namespace

std::vector<std::pair<Poly, int>> factor(const PrimeField& k, const Poly& a) {
  if (a.empty()) throw Error("factor: zero polynomial");
  std::map<Poly, int, decltype(&poly_less)> acc(&poly_less);
  for (auto& [g, m] : squarefree_decomposition(k, monic(k, a))) {
    for (auto& irr : factor_squarefree(k, g)) acc[irr] += m;
  }
  return {acc.begin(), acc.end()};
}

std::uint64_t poly_index(const Poly& a, std::uint32_t q) {
  std::uint64_t idx = 0;
  for (std::size_t i = a.size(); i-- > 0;) idx = idx * q + a[i];
  return idx;
}

Poly poly_from_index(std::uint64_t index, std::uint32_t q) {
  Poly p;
  while (index) {
    p.push_back(static_cast<std::uint32_t>(index % q));
    index /= q;
  }
  return p;
}

const std::vector<Poly>& monic_irreducibles(std::uint32_t q, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, int>, std::vector<Poly>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find({q, degree});
  if (it != cache.end()) return it->second;
  const PrimeField k(q);
  std::vector<Poly> out;
  std::uint64_t count = 1;
  for (int i = 0; i < degree; ++i) count *= q;
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly p = poly_from_index(idx, q);
    p.resize(static_cast<std::size_t>(degree) + 1, 0);
    p.back() = 1;
    if (is_irreducible(k, p)) out.push_back(std::move(p));
  }
  return cache.emplace(std::make_pair(q, degree), std::move(out)).first->second;
}

// --------------------------------------------------- square roots mod u

namespace {

std::uint64_t field_size(const PrimeField& k, const Poly& u) {
  std::uint64_t s = 1;
  for (int i = 0; i < deg(u); ++i) {
    if (s > (std::uint64_t(1) << 56) / k.q()) throw Error("residue field too large");
    s *= k.q();
  }
  return s;
}

}  // namespace

bool is_square_mod_irreducible(const PrimeField& k, const Poly& a, const Poly& u) {
  const Poly r = mod(k, a, u);
  if (r.empty()) return true;
  return powmod(k, r, (field_size(k, u) - 1) / 2, u) == Poly{1};
}

Poly sqrt_mod_irreducible(const PrimeField& k, const Poly& a, const Poly& u) {
  const Poly r = mod(k, a, u);
  if (r.empty()) return {};
  const std::uint64_t qq = field_size(k, u);
  if (powmod(k, r, (qq - 1) / 2, u) != Poly{1}) throw Error("sqrt_mod_irreducible: not a square");
  // Tonelli-Shanks in F_q[x]/(u)
  std::uint64_t t = qq - 1;
  int s = 0;
  while (t % 2 == 0) t /= 2, ++s;
  Poly z;
  for (std::uint64_t idx = 2;; ++idx) {
    z = poly_from_index(idx, k.q());
    if (deg(z) >= deg(u)) throw Error("sqrt_mod_irreducible: no nonresidue found");
    if (powmod(k, z, (qq - 1) / 2, u) != Poly{1}) break;
  }
  Poly c = powmod(k, z, t, u);
  Poly x = powmod(k, r, (t + 1) / 2, u);
  Poly b = powmod(k, r, t, u);
  int m = s;
  const Poly one{1};
  while (b != one) {
    int i = 0;
    Poly bb = b;
    while (bb != one) {
      bb = mulmod(k, bb, bb, u);
      ++i;
    }
    Poly g = c;
    for (int j = 0; j < m - i - 1; ++j) g = mulmod(k, g, g, u);
    x = mulmod(k, x, g, u);
    c = mulmod(k, g, g, u);
    b = mulmod(k, b, c, u);
    m = i;
  }
  Poly other = neg(k, x);
  return poly_index(other, k.q()) < poly_index(x, k.q()) ? other : x;
}

// -------------------------------------------------------- extension fields

ExtensionField::ExtensionField(std::uint32_t q, int degree) : q_(q), degree_(degree) {
  if (degree < 1) throw Error("ExtensionField: degree must be >= 1");
  size_ = 1;
  for (int i = 0; i < degree; ++i) {
    size_ *= q;
    if (size_ > kMaxSize) throw Error("ExtensionField: q^i exceeds the enumeration budget");
  }
  const PrimeField k(q);
  modulus_ = monic_irreducibles(q, degree).front();
  exp_.assign(size_ - 1, 0);
  log_.assign(size_, 0);
  for (std::uint64_t cand = 1; cand < size_; ++cand) {
    const Poly g = poly_from_index(cand, q);
    Poly cur{1};
    std::uint64_t order = 0;
    bool primitive = true;
    for (std::uint64_t j = 0; j < size_ - 1; ++j) {
      const auto idx = static_cast<std::uint32_t>(poly_index(cur, q));
      if (j > 0 && idx == 1) {
        primitive = false;
        break;
      }
      exp_[j] = idx;
      cur = mulmod(k, cur, g, modulus_);
      order = j + 1;
    }
    if (primitive && order == size_ - 1 && poly_index(cur, q) == 1) break;
  }
  for (std::uint64_t j = 0; j < size_ - 1; ++j) log_[exp_[j]] = static_cast<std::uint32_t>(j);
}

std::shared_ptr<const ExtensionField> ExtensionField::get(std::uint32_t q, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, int>, std::shared_ptr<const ExtensionField>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({q, degree});
    if (it != cache.end()) return it->second;
  }
  auto field = std::make_shared<const ExtensionField>(q, degree);
  std::lock_guard lock(mutex);
  return cache.emplace(std::make_pair(q, degree), field).first->second;
}

}  // namespace cllab
