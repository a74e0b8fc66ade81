#include "cllab/smith.hpp"

#include <algorithm>
#include <utility>

#include "cllab/error.hpp"

namespace cllab {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

namespace {

using Wide = __int128;

constexpr Wide kEntryLimit = Wide(1) << 62;

Wide wabs(Wide x) { return x < 0 ? -x : x; }

void check_range(Wide x) {
  if (x >= kEntryLimit || x <= -kEntryLimit) {
    throw Error("smith_normal_form: intermediate entry overflow");
  }
}

class Workspace {
 public:
  Workspace(const IntMatrix& m)
      : rows_(m.rows), cols_(m.cols), a_(m.data.begin(), m.data.end()), v_(cols_ * cols_, 0) {
    for (std::size_t i = 0; i < cols_; ++i) v_[i * cols_ + i] = 1;
  }

  Wide& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(at(i, j), at(k, j));
  }

  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, j), at(i, k));
    for (std::size_t i = 0; i < cols_; ++i) std::swap(v_[i * cols_ + j], v_[i * cols_ + k]);
  }

  // row_i -= q * row_k
  void row_sub(std::size_t i, std::size_t k, Wide q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) {
      at(i, j) -= q * at(k, j);
      check_range(at(i, j));
    }
  }

  // col_j -= q * col_k
  void col_sub(std::size_t j, std::size_t k, Wide q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) {
      at(i, j) -= q * at(i, k);
      check_range(at(i, j));
    }
    for (std::size_t i = 0; i < cols_; ++i) {
      Wide& x = v_[i * cols_ + j];
      x -= q * v_[i * cols_ + k];
      check_range(x);
    }
  }

  void negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) at(i, j) = -at(i, j);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<Wide>& v() const { return v_; }

 private:
  std::size_t rows_, cols_;
  std::vector<Wide> a_;
  std::vector<Wide> v_;
};

}  // namespace

SmithResult smith_normal_form(const IntMatrix& relations) {
  Workspace w(relations);
  const std::size_t m = w.rows(), n = w.cols();
  SmithResult out;
  out.diagonal.assign(n, 0);

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    // Smallest nonzero entry of the trailing block becomes the pivot.
    std::size_t pi = m, pj = n;
    Wide best = 0;
    for (std::size_t i = t; i < m; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        Wide x = wabs(w.at(i, j));
        if (x != 0 && (best == 0 || x < best)) {
          best = x;
          pi = i;
          pj = j;
        }
      }
    }
    if (best == 0) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);

    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (w.at(i, t) != 0) {
          w.row_sub(i, t, w.at(i, t) / w.at(t, t));
          if (w.at(i, t) != 0) clean = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (w.at(t, j) != 0) {
          w.col_sub(j, t, w.at(t, j) / w.at(t, t));
          if (w.at(t, j) != 0) clean = false;
        }
      }
      if (!clean) {
        std::size_t bi = t, bj = t;
        Wide b = wabs(w.at(t, t));
        for (std::size_t i = t + 1; i < m; ++i) {
          Wide x = wabs(w.at(i, t));
          if (x != 0 && x < b) b = x, bi = i, bj = t;
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          Wide x = wabs(w.at(t, j));
          if (x != 0 && x < b) b = x, bi = t, bj = j;
        }
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        continue;
      }
      // Pivot must divide the whole trailing block.
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (w.at(i, j) % w.at(t, t) != 0) {
            w.row_sub(t, i, -1);
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    if (w.at(t, t) < 0) w.negate_row(t);
    out.diagonal[t] = static_cast<std::int64_t>(w.at(t, t));
  }

  out.column_transform = IntMatrix(n, n);
  for (std::size_t i = 0; i < n * n; ++i) {
    out.column_transform.data[i] = static_cast<std::int64_t>(w.v()[i]);
  }
  return out;
}

std::vector<std::int64_t> invariant_factors(const IntMatrix& relations) {
  auto snf = smith_normal_form(relations);
  std::vector<std::int64_t> out;
  for (auto d : snf.diagonal) {
    if (d == 0) throw Error("invariant_factors: quotient group is infinite");
    if (d > 1) out.push_back(d);
  }
  return out;
}

namespace {

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t mod) {
  Wide r0 = mod, r1 = a % mod, s0 = 0, s1 = 1;
  while (r1 != 0) {
    Wide q = r0 / r1;
    Wide r2 = r0 - q * r1;
    Wide s2 = s0 - q * s1;
    r0 = r1, r1 = r2, s0 = s1, s1 = s2;
  }
  if (r0 != 1) throw Error("inverse_mod: not a unit");
  Wide s = s0 % Wide(mod);
  if (s < 0) s += mod;
  return static_cast<std::uint64_t>(s);
}

}  // namespace

std::vector<int> local_smith_exponents(std::vector<std::uint64_t> a, std::size_t rows,
                                       std::size_t cols, std::uint64_t p, int e) {
  std::uint64_t mod = 1;
  std::vector<std::uint64_t> ppow{1};
  for (int i = 0; i < e; ++i) {
    mod *= p;
    ppow.push_back(mod);
  }
  for (auto& x : a) x %= mod;
  auto at = [&](std::size_t i, std::size_t j) -> std::uint64_t& { return a[i * cols + j]; };
  auto valuation = [&](std::uint64_t x) {
    if (x == 0) return e;
    int v = 0;
    while (x % p == 0) x /= p, ++v;
    return v;
  };

  std::vector<int> exps(rows, e);
  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    std::size_t pi = rows, pj = cols;
    int best = e;
    for (std::size_t i = t; i < rows && best > 0; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        int v = valuation(at(i, j));
        if (v < best) {
          best = v, pi = i, pj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == e) break;  // trailing block is zero mod p^e
    if (pi != t)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(t, j), at(pi, j));
    if (pj != t)
      for (std::size_t i = 0; i < rows; ++i) std::swap(at(i, t), at(i, pj));

    const std::uint64_t unit = at(t, t) / ppow[best];
    const std::uint64_t inv = inverse_mod(unit, mod);
    for (std::size_t j = t; j < cols; ++j) {
      at(t, j) = static_cast<std::uint64_t>((Wide(at(t, j)) * inv) % mod);
    }
    for (std::size_t i = t + 1; i < rows; ++i) {
      if (at(i, t) == 0) continue;
      const std::uint64_t c = at(i, t) / ppow[best];
      for (std::size_t j = t; j < cols; ++j) {
        Wide x = (Wide(at(i, j)) - Wide(c) * at(t, j)) % Wide(mod);
        if (x < 0) x += mod;
        at(i, j) = static_cast<std::uint64_t>(x);
      }
    }
    exps[t] = best;
  }
  return exps;
}

}  // namespace cllab
