#include "cllab/riemann_roch.hpp"

#include <algorithm>

#include "cllab/error.hpp"

namespace cllab {

namespace {

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
int ceil_div(int a, int b) { return -floor_div(-a, b); }

int ramification(const Place& p) {
  return p.kind == Place::Kind::AffineRamified || p.kind == Place::Kind::InfRamified ? 2 : 1;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> null_space(const PrimeField& k,
                                                   std::vector<std::vector<std::uint32_t>> rows,
                                                   std::size_t n) {
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    const std::uint32_t inv = k.inv(rows[rank][col]);
    for (std::size_t j = col; j < n; ++j) rows[rank][j] = k.mul(rows[rank][j], inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      const std::uint32_t factor = rows[i][col];
      for (std::size_t j = col; j < n; ++j) rows[i][j] = k.sub(rows[i][j], k.mul(factor, rows[rank][j]));
    }
    pivot_cols.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<std::uint32_t>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint32_t> v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = k.neg(rows[r][free]);
    basis.push_back(std::move(v));
  }
  return basis;
}

FunctionField::FunctionField(Curve c) : curve_(std::move(c)), k_(curve_.q) {}

const std::vector<Place>& FunctionField::places_over(const Poly& u) const {
  auto it = places_.find(u);
  if (it != places_.end()) return it->second;
  return places_.emplace(u, cllab::places_over(curve_, u)).first->second;
}

const Poly& FunctionField::u_power(const Poly& u, int r) const {
  auto key = std::make_pair(u, r);
  auto it = u_powers_.find(key);
  if (it != u_powers_.end()) return it->second;
  return u_powers_.emplace(key, pow(k_, u, r)).first->second;
}

Poly FunctionField::split_lift(const Place& p, int r) const {
  if (p.kind != Place::Kind::AffineSplit) throw Error("split_lift: not a split affine place");
  auto it = lifts_.find(p);
  if (it == lifts_.end()) it = lifts_.emplace(p, std::make_pair(1, p.v)).first;
  auto& [have, v] = it->second;
  while (have < r) {
    // Newton step V <- V - (V^2 - f) / (2V) modulo u^(2 have)
    const int next = 2 * have;
    const Poly& m = u_power(p.u, next);
    const Poly err = mod(k_, sub(k_, mul(k_, v, v), curve_.f), m);
    const Poly inv = invmod(k_, scale(k_, v, 2), m);
    v = mod(k_, sub(k_, v, mul(k_, err, inv)), m);
    have = next;
  }
  return mod(k_, v, u_power(p.u, r));
}

const std::vector<std::uint32_t>& FunctionField::sqrt_series(int length) const {
  if (static_cast<int>(series_.size()) >= length) return series_;
  const int d = deg(curve_.f);
  auto coef = [&](int j) -> std::uint32_t {  // coefficient of z^j in z^d f(1/z)
    return j <= d ? curve_.f[static_cast<std::size_t>(d - j)] : 0;
  };
  const std::uint32_t half = k_.inv(2);
  series_.assign(1, 1);
  for (int j = 1; j < length; ++j) {
    std::uint32_t s = coef(j);
    for (int i = 1; i < j; ++i) s = k_.sub(s, k_.mul(series_[static_cast<std::size_t>(i)], series_[static_cast<std::size_t>(j - i)]));
    series_.push_back(k_.mul(s, half));
  }
  return series_;
}

std::vector<Function> FunctionField::riemann_roch_space(const Divisor& d) const {
  const int g = curve_.genus;

  // Affine part: g = w h must be integral, with v_P(g) >= r_P at the places over each u.
  std::map<Poly, std::map<Place, int>> by_u;
  for (const auto& [p, c] : d.terms()) {
    if (p.is_affine()) by_u[p.u][p] = c;
  }
  Poly w{1};
  std::vector<std::pair<Place, int>> conditions;
  for (const auto& [u, coeffs] : by_u) {
    const auto& over = places_over(u);
    int ku = 0;
    for (const auto& p : over) {
      auto it = coeffs.find(p);
      const int c = it == coeffs.end() ? 0 : it->second;
      ku = std::max(ku, ceil_div(c, ramification(p)));
    }
    for (const auto& p : over) {
      auto it = coeffs.find(p);
      const int c = it == coeffs.end() ? 0 : it->second;
      const int r = ramification(p) * ku - c;
      if (r > 0) conditions.push_back({p, r});
    }
    if (ku > 0) w = mul(k_, w, u_power(u, ku));
  }
  const int dw = deg(w);

  // Infinity: bounds on deg a and deg b, plus branch conditions for the split model.
  int amax = -1, bmax = -1;
  std::vector<std::pair<int, int>> branch_bounds;  // (sigma, M_i)
  int mmax = 0;
  const auto inf = infinite_places(curve_);
  switch (curve_.model) {
    case Model::Split: {
      const int m1 = d.coefficient(inf[0]) + dw;
      const int m2 = d.coefficient(inf[1]) + dw;
      mmax = std::max(m1, m2);
      amax = mmax;
      bmax = mmax - g - 1;
      branch_bounds = {{1, m1}, {-1, m2}};
      break;
    }
    case Model::Inert: {
      const int m = d.coefficient(inf[0]) + dw;
      amax = m;
      bmax = m - g - 1;
      break;
    }
    case Model::Ramified: {
      const int m = d.coefficient(inf[0]) + 2 * dw;
      amax = floor_div(m, 2);
      bmax = floor_div(m - 2 * g - 1, 2);
      break;
    }
  }
  const std::size_t na = amax >= 0 ? static_cast<std::size_t>(amax) + 1 : 0;
  const std::size_t nb = bmax >= 0 ? static_cast<std::size_t>(bmax) + 1 : 0;
  const std::size_t n = na + nb;
  if (n == 0) return {};

  std::vector<std::vector<std::uint32_t>> rows;
  // Rows for: sum_i a_i (x^i pa mod m) + sum_j b_j (x^j pb mod m) == 0 mod m.
  auto congruence = [&](const Poly& m, const Poly* pa, const Poly* pb) {
    const std::size_t dm = static_cast<std::size_t>(deg(m));
    std::vector<std::vector<std::uint32_t>> block(dm, std::vector<std::uint32_t>(n, 0));
    auto fill = [&](const Poly& start, std::size_t count, std::size_t offset) {
      Poly cur = mod(k_, start, m);
      for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < cur.size(); ++j) block[j][offset + i] = cur[j];
        cur = mod(k_, mul(k_, cur, Poly{0, 1}), m);
      }
    };
    if (pa) fill(*pa, na, 0);
    if (pb) fill(*pb, nb, na);
    for (auto& row : block) rows.push_back(std::move(row));
  };
  const Poly one{1};
  for (const auto& [p, r] : conditions) {
    switch (p.kind) {
      case Place::Kind::AffineRamified: {
        const int ra = ceil_div(r, 2), rb = ceil_div(r - 1, 2);
        if (ra > 0 && na > 0) congruence(u_power(p.u, ra), &one, nullptr);
        if (rb > 0 && nb > 0) congruence(u_power(p.u, rb), nullptr, &one);
        break;
      }
      case Place::Kind::AffineInert:
        if (na > 0) congruence(u_power(p.u, r), &one, nullptr);
        if (nb > 0) congruence(u_power(p.u, r), nullptr, &one);
        break;
      case Place::Kind::AffineSplit: {
        const Poly v = split_lift(p, r);
        congruence(u_power(p.u, r), &one, &v);
        break;
      }
      default:
        break;
    }
  }
  if (curve_.model == Model::Split) {
    // At branch sigma, a + b y = sum_t z^{-t} (a_t + sigma sum_j b_j S_{j+g+1-t}); kill t > M_i.
    int tmin = mmax;
    for (const auto& [sigma, mi] : branch_bounds) tmin = std::min(tmin, mi + 1);
    const auto& s = sqrt_series(std::max(0, bmax + g + 2 - tmin));
    for (const auto& [sigma, mi] : branch_bounds) {
      // t < 0 are the coefficients of positive powers of z (forced zeros at the branch)
      for (int t = mi + 1; t <= mmax; ++t) {
        std::vector<std::uint32_t> row(n, 0);
        if (t >= 0 && t <= amax) row[static_cast<std::size_t>(t)] = 1;
        for (int j = 0; j <= bmax; ++j) {
          const int idx = j + g + 1 - t;
          if (idx < 0) continue;
          const std::uint32_t c = sigma > 0 ? s[static_cast<std::size_t>(idx)] : k_.neg(s[static_cast<std::size_t>(idx)]);
          row[na + static_cast<std::size_t>(j)] = c;
        }
        rows.push_back(std::move(row));
      }
    }
  }

  std::vector<Function> basis;
  for (auto& vec : null_space(k_, std::move(rows), n)) {
    Function h;
    h.a.assign(vec.begin(), vec.begin() + static_cast<std::ptrdiff_t>(na));
    h.b.assign(vec.begin() + static_cast<std::ptrdiff_t>(na), vec.end());
    trim(h.a);
    trim(h.b);
    h.w = w;
    basis.push_back(std::move(h));
  }
  return basis;
}

Divisor FunctionField::divisor_of_polynomial(const Poly& w) const {
  Divisor d;
  if (deg(w) < 0) throw Error("divisor of zero");
  for (const auto& [u, m] : factor(k_, w)) {
    for (const auto& p : places_over(u)) d.add(p, ramification(p) * m);
  }
  const int dw = deg(w);
  for (const auto& p : infinite_places(curve_)) d.add(p, -ramification(p) * dw);
  return d;
}

Divisor FunctionField::divisor_of_integral(const Poly& a, const Poly& b) const {
  const int g = curve_.genus;
  const Poly norm = sub(k_, mul(k_, a, a), mul(k_, mul(k_, b, b), curve_.f));
  if (norm.empty()) throw Error("divisor of zero");
  Divisor d;
  for (const auto& [u, n] : factor(k_, norm)) {
    const auto& over = places_over(u);
    const Place& p = over.front();
    switch (p.kind) {
      case Place::Kind::AffineRamified:
        d.add(p, n);
        break;
      case Place::Kind::AffineInert:
        if (n % 2 != 0) throw InvariantViolation("odd norm valuation at an inert place");
        d.add(p, n / 2);
        break;
      case Place::Kind::AffineSplit: {
        const Poly v = split_lift(p, n);
        const Poly t = mod(k_, add(k_, a, mul(k_, b, v)), u_power(u, n));
        const int val = t.empty() ? n : std::min(n, valuation(k_, t, u));
        d.add(over[0], val);
        d.add(over[1], n - val);
        break;
      }
      default:
        break;
    }
  }
  const int da = deg(a), db = deg(b), dn = deg(norm);
  auto pole = [&](int shift_b, int scale_a, int scale_b) {  // min over the nonzero parts
    if (a.empty()) return -scale_b * db - shift_b;
    if (b.empty()) return -scale_a * da;
    return std::min(-scale_a * da, -scale_b * db - shift_b);
  };
  const auto inf = infinite_places(curve_);
  switch (curve_.model) {
    case Model::Split: {
      int v1 = pole(g + 1, 1, 1), v2 = v1;
      if (!a.empty() && !b.empty() && da == db + g + 1) {
        const std::uint32_t la = a.back(), lb = b.back();
        if (k_.add(la, lb) == 0) {
          v2 = -da;
          v1 = -dn - v2;
        } else if (k_.sub(la, lb) == 0) {
          v1 = -da;
          v2 = -dn - v1;
        }
      }
      d.add(inf[0], v1);
      d.add(inf[1], v2);
      break;
    }
    case Model::Inert:
      d.add(inf[0], pole(g + 1, 1, 1));
      break;
    case Model::Ramified:
      d.add(inf[0], pole(2 * g + 1, 2, 2));
      break;
  }
  if (d.degree() != 0) throw InvariantViolation("divisor of a function has nonzero degree: " + d.to_string());
  return d;
}

Divisor FunctionField::divisor_of(const Function& h) const {
  if (h.is_zero()) throw Error("divisor of the zero function");
  return divisor_of_integral(h.a, h.b) - divisor_of_polynomial(h.w);
}

bool FunctionField::is_principal(const Divisor& e) const {
  if (e.degree() != 0) return false;
  return dimension(-e) == 1;
}

}  // namespace cllab
