#include "cllab/abelian_groups.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "cllab/error.hpp"
#include "cllab/smith.hpp"

namespace cllab {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_odd_prime(std::int64_t n) { return n != 2 && is_prime(n); }

std::int64_t ipow(std::int64_t base, int exponent) {
  __int128 r = 1;
  for (int i = 0; i < exponent; ++i) {
    r *= base;
    if (r > (__int128(1) << 62)) throw Error("ipow: overflow");
  }
  return static_cast<std::int64_t>(r);
}

// ---------------------------------------------------------------- GroupType

GroupType GroupType::make(std::int64_t p, std::vector<int> lambda) {
  if (!is_odd_prime(p)) throw Error("GroupType: p must be an odd prime, got " + std::to_string(p));
  for (int l : lambda) {
    if (l < 1) throw Error("GroupType: exponents must be >= 1");
  }
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  return GroupType{p, std::move(lambda)};
}

int GroupType::log_order() const { return std::accumulate(lambda.begin(), lambda.end(), 0); }

std::int64_t GroupType::order() const { return ipow(p, log_order()); }

std::string GroupType::to_string() const {
  if (lambda.empty()) return "trivial";
  std::string out;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i) out += "x";
    out += "Z/" + std::to_string(ipow(p, lambda[i]));
  }
  return out;
}

GroupType parse_group_type(std::int64_t p, const std::string& text) {
  if (text.empty() || text == "trivial" || text == "1" || text == "0") return GroupType::trivial(p);
  std::vector<int> lambda;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.rfind("Z/", 0) != 0) throw Error("parse_group_type: expected Z/n factors in '" + text + "'");
    std::int64_t n = std::stoll(part.substr(2));
    int k = 0;
    while (n > 1 && n % p == 0) n /= p, ++k;
    if (n != 1 || k == 0) throw Error("parse_group_type: '" + part + "' is not a nontrivial power of p");
    lambda.push_back(k);
  }
  return GroupType::make(p, std::move(lambda));
}

// ------------------------------------------------------------- GroupElement

namespace {

std::int64_t mod_reduce(std::int64_t x, std::int64_t m) {
  x %= m;
  return x < 0 ? x + m : x;
}

int valuation(std::int64_t x, std::int64_t p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (x % p == 0 && v < cap) x /= p, ++v;
  return v;
}

}  // namespace

GroupElement GroupElement::zero(const GroupType& g) {
  return GroupElement{g, std::vector<std::int64_t>(g.lambda.size(), 0)};
}

GroupElement GroupElement::make(const GroupType& g, std::vector<std::int64_t> coords) {
  if (coords.size() != g.lambda.size()) throw Error("GroupElement: coordinate count mismatch");
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = mod_reduce(coords[i], g.component_order(i));
  return GroupElement{g, std::move(coords)};
}

GroupElement GroupElement::operator+(const GroupElement& other) const {
  if (parent != other.parent) throw Error("GroupElement: parents differ");
  GroupElement r = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    r.coords[i] = mod_reduce(coords[i] + other.coords[i], parent.component_order(i));
  }
  return r;
}

GroupElement GroupElement::operator-() const {
  GroupElement r = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    r.coords[i] = mod_reduce(-coords[i], parent.component_order(i));
  }
  return r;
}

std::int64_t GroupElement::order() const {
  int top = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    top = std::max(top, parent.lambda[i] - valuation(coords[i], parent.p, parent.lambda[i]));
  }
  return ipow(parent.p, top);
}

std::string PointedClass::to_string() const {
  std::string out = "(" + group.to_string() + ",";
  if (marked.size() != 1) out += "(";
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(marked[i]);
  }
  if (marked.size() != 1) out += ")";
  return out + ")";
}

BruteForceCaps& default_caps() {
  static BruteForceCaps caps;
  return caps;
}

// -------------------------------------------------------------- enumeration

namespace {

void partitions_desc(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    cur.push_back(part);
    partitions_desc(n - part, part, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<GroupType> enumerate_types(std::int64_t p, int max_log_order) {
  if (max_log_order < 0) throw Error("enumerate_types: max_log_order must be >= 0");
  std::vector<GroupType> out;
  for (int n = 0; n <= max_log_order; ++n) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions_desc(n, n, cur, parts);
    for (auto& lam : parts) out.push_back(GroupType::make(p, lam));
  }
  return out;
}

// ------------------------------------------------------------------- counts

BigInt aut_order(const GroupType& a) {
  // Closed form for |Aut| of an abelian p-group indexed by a partition
  // (exponents sorted ascending, d_k = last index equal to e_k, c_k = first).
  std::vector<int> e(a.lambda.rbegin(), a.lambda.rend());
  const int n = static_cast<int>(e.size());
  const BigInt p = a.p;
  BigInt result = 1;
  for (int k = 1; k <= n; ++k) {
    int d = k, c = k;
    while (d < n && e[d] == e[k - 1]) ++d;
    while (c > 1 && e[c - 2] == e[k - 1]) --c;
    result *= boost::multiprecision::pow(p, d) - boost::multiprecision::pow(p, k - 1);
    result *= boost::multiprecision::pow(p, static_cast<unsigned>(e[k - 1] * (n - d)));
    result *= boost::multiprecision::pow(p, static_cast<unsigned>((e[k - 1] - 1) * (n - c + 1)));
  }
  return result;
}

namespace {

void require_same_prime(const GroupType& b, const GroupType& a) {
  if (a.p != b.p) throw Error("groups over different primes");
}

}  // namespace

BigInt hom_count(const GroupType& b, const GroupType& a) {
  require_same_prime(b, a);
  unsigned exponent = 0;
  for (int lb : b.lambda) {
    for (int la : a.lambda) exponent += static_cast<unsigned>(std::min(lb, la));
  }
  return boost::multiprecision::pow(BigInt(a.p), exponent);
}

std::int64_t torsion_count(const GroupType& a, int k) {
  if (k < 0) throw Error("torsion_count: k must be >= 0");
  int e = 0;
  for (int l : a.lambda) e += std::min(k, l);
  return ipow(a.p, e);
}

std::vector<std::int64_t> element_at(const GroupType& a, std::uint64_t index) {
  std::vector<std::int64_t> coords(a.lambda.size());
  for (std::size_t i = a.lambda.size(); i-- > 0;) {
    const auto m = static_cast<std::uint64_t>(a.component_order(i));
    coords[i] = static_cast<std::int64_t>(index % m);
    index /= m;
  }
  return coords;
}

std::uint64_t element_index(const GroupType& a, std::span<const std::int64_t> coords) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < a.lambda.size(); ++i) {
    const auto m = a.component_order(i);
    idx = idx * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(mod_reduce(coords[i], m));
  }
  return idx;
}

// ---------------------------------------------------------- subgroup lattice

namespace {

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const {
    std::size_t h = 1469598103934665603ull;
    for (auto w : b) h = (h ^ w) * 1099511628211ull;
    return h;
  }
};

bool test(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1; }
void set(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t(1) << (i & 63); }

bool subset(const Bits& small, const Bits& big) {
  for (std::size_t w = 0; w < small.size(); ++w) {
    if (small[w] & ~big[w]) return false;
  }
  return true;
}

// Moebius coefficients of the subgroup lattice of A aggregated by subgroup type:
// sur(B, A) = sum over entries of coeff * hom(B, type).
std::vector<std::pair<GroupType, BigInt>> compute_moebius(const GroupType& a) {
  const std::int64_t n64 = a.order();
  if (n64 > default_caps().lattice_order) {
    throw CapExceeded("sur_count: |A| = " + std::to_string(n64) + " exceeds the subgroup-lattice cap");
  }
  const auto n = static_cast<std::size_t>(n64);
  const std::size_t words = (n + 63) / 64;

  std::vector<std::vector<std::int64_t>> elems(n);
  for (std::size_t i = 0; i < n; ++i) elems[i] = element_at(a, i);
  std::vector<std::vector<std::uint32_t>> add(n, std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::int64_t> s(a.lambda.size());
      for (std::size_t k = 0; k < s.size(); ++k) s[k] = elems[i][k] + elems[j][k];
      add[i][j] = static_cast<std::uint32_t>(element_index(a, s));
    }
  }
  // log_p of element orders
  std::vector<int> log_ord(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_ord[i] = static_cast<int>(std::round(std::log(double(GroupElement{a, elems[i]}.order())) /
                                             std::log(double(a.p))));
  }

  // <H, g> together with the elements x of it satisfying <H, x> = <H, g>
  // (the cosets H + jg with p not dividing j).
  auto closure = [&](const Bits& h, std::size_t g, Bits& same) {
    Bits k = h;
    std::size_t cur = g;
    for (std::int64_t j = 1; !test(h, cur); ++j) {
      for (std::size_t x = 0; x < n; ++x) {
        if (!test(h, x)) continue;
        set(k, add[x][cur]);
        if (j % a.p != 0) set(same, add[x][cur]);
      }
      cur = add[cur][g];
    }
    return k;
  };

  Bits trivial(words, 0);
  set(trivial, 0);
  std::vector<Bits> subgroups{trivial};
  std::unordered_set<Bits, BitsHash> seen{trivial};
  for (std::size_t head = 0; head < subgroups.size(); ++head) {
    Bits covered = subgroups[head];
    for (std::size_t g = 0; g < n; ++g) {
      if (test(covered, g)) continue;
      Bits k = closure(subgroups[head], g, covered);
      if (seen.insert(k).second) subgroups.push_back(std::move(k));
    }
  }

  auto popcount = [](const Bits& b) {
    std::size_t c = 0;
    for (auto w : b) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  };
  std::sort(subgroups.begin(), subgroups.end(),
            [&](const Bits& x, const Bits& y) { return popcount(x) > popcount(y); });

  std::vector<BigInt> mu(subgroups.size());
  mu[0] = 1;  // A itself
  for (std::size_t i = 1; i < subgroups.size(); ++i) {
    BigInt s = 0;
    for (std::size_t j = 0; j < i; ++j) {
      if (mu[j] != 0 && subset(subgroups[i], subgroups[j]) && popcount(subgroups[j]) > popcount(subgroups[i])) {
        s += mu[j];
      }
    }
    mu[i] = -s;
  }

  std::map<GroupType, BigInt> by_type;
  for (std::size_t i = 0; i < subgroups.size(); ++i) {
    if (mu[i] == 0) continue;
    // type from torsion counts: conjugate partition entry k = log_p |H[p^k]| - log_p |H[p^(k-1)]|
    int max_log = 0;
    for (std::size_t x = 0; x < n; ++x) {
      if (test(subgroups[i], x)) max_log = std::max(max_log, log_ord[x]);
    }
    std::vector<int> tors(max_log + 1, 0);
    for (std::size_t x = 0; x < n; ++x) {
      if (test(subgroups[i], x)) {
        for (int k = log_ord[x]; k <= max_log; ++k) ++tors[k];
      }
    }
    std::vector<int> conj;
    for (int k = 1; k <= max_log; ++k) {
      int lk = static_cast<int>(std::round(std::log(double(tors[k]) / tors[k - 1]) / std::log(double(a.p))));
      conj.push_back(lk);
    }
    std::vector<int> lambda;
    if (!conj.empty()) {
      for (int r = 1; r <= conj[0]; ++r) {
        int len = 0;
        for (int c : conj) len += (c >= r);
        lambda.push_back(len);
      }
    }
    by_type[GroupType::make(a.p, lambda)] += mu[i];
  }
  return {by_type.begin(), by_type.end()};
}

}  // namespace

BigInt sur_count(const GroupType& b, const GroupType& a) {
  require_same_prime(b, a);
  if (a.log_order() > b.log_order()) return 0;
  if (a.rank() > b.rank()) return 0;
  static std::mutex mutex;
  static std::map<GroupType, std::vector<std::pair<GroupType, BigInt>>> memo;
  std::vector<std::pair<GroupType, BigInt>> coeffs;
  {
    std::lock_guard lock(mutex);
    auto it = memo.find(a);
    if (it != memo.end()) coeffs = it->second;
  }
  if (coeffs.empty()) {
    coeffs = compute_moebius(a);
    std::lock_guard lock(mutex);
    memo.emplace(a, coeffs);
  }
  BigInt total = 0;
  for (const auto& [type, mu] : coeffs) total += mu * hom_count(b, type);
  return total;
}

// ------------------------------------------------------------ pointed groups

std::vector<int> ulm_sequence(const GroupType& a, std::span<const std::int64_t> coords) {
  const std::size_t r = a.lambda.size();
  std::vector<int> v(r);
  for (std::size_t i = 0; i < r; ++i) {
    v[i] = valuation(mod_reduce(coords[i], a.component_order(i)), a.p, a.lambda[i]);
  }
  std::vector<int> seq;
  for (int j = 0;; ++j) {
    int h = -1;
    for (std::size_t i = 0; i < r; ++i) {
      if (v[i] + j < a.lambda[i] && (h < 0 || v[i] + j < h)) h = v[i] + j;
    }
    if (h < 0) break;
    seq.push_back(h);
  }
  return seq;
}

namespace {

// Visits every valuation pattern (v_i in [0, lambda_i]; lambda_i means coordinate 0).
template <class Fn>
void for_each_pattern(const GroupType& a, Fn&& fn) {
  const std::size_t r = a.lambda.size();
  std::vector<int> v(r, 0);
  while (true) {
    fn(v);
    std::size_t i = r;
    while (i > 0) {
      --i;
      if (v[i] < a.lambda[i]) {
        ++v[i];
        for (std::size_t k = i + 1; k < r; ++k) v[k] = 0;
        break;
      }
      if (i == 0) return;
    }
    if (r == 0) return;
  }
}

std::vector<std::int64_t> pattern_coords(const GroupType& a, const std::vector<int>& v) {
  std::vector<std::int64_t> c(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) c[i] = v[i] < a.lambda[i] ? ipow(a.p, v[i]) : 0;
  return c;
}

std::uint64_t pattern_size(const GroupType& a, const std::vector<int>& v) {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < a.lambda[i]) {
      const int k = a.lambda[i] - v[i];
      s *= static_cast<std::uint64_t>(ipow(a.p, k) - ipow(a.p, k - 1));
    }
  }
  return s;
}

}  // namespace

PointedClass canonicalize(const GroupType& a, std::span<const std::int64_t> coords) {
  if (coords.size() != a.lambda.size()) throw Error("canonicalize: coordinate count mismatch");
  const auto target = ulm_sequence(a, coords);
  std::vector<std::int64_t> best;
  for_each_pattern(a, [&](const std::vector<int>& v) {
    auto c = pattern_coords(a, v);
    if ((best.empty() || c < best) && ulm_sequence(a, c) == target) best = std::move(c);
  });
  if (a.lambda.empty()) best.clear();
  return PointedClass{a, best};
}

std::vector<std::pair<PointedClass, std::uint64_t>> pointed_classes(const GroupType& a) {
  std::map<std::vector<int>, std::pair<std::vector<std::int64_t>, std::uint64_t>> by_ulm;
  for_each_pattern(a, [&](const std::vector<int>& v) {
    auto c = pattern_coords(a, v);
    auto key = ulm_sequence(a, c);
    auto [it, fresh] = by_ulm.try_emplace(key, c, 0);
    if (!fresh && c < it->second.first) it->second.first = c;
    it->second.second += pattern_size(a, v);
  });
  std::vector<std::pair<PointedClass, std::uint64_t>> out;
  for (auto& [key, val] : by_ulm) out.push_back({PointedClass{a, val.first}, val.second});
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first.marked < y.first.marked; });
  return out;
}

std::vector<std::pair<PointedClass, std::uint64_t>> element_orbits(const GroupType& a) {
  const std::int64_t n = a.order();
  if (n > default_caps().orbit_order) {
    throw CapExceeded("element_orbits: |A| = " + std::to_string(n) + " exceeds the brute-force cap");
  }
  std::map<std::vector<int>, std::pair<std::vector<std::int64_t>, std::uint64_t>> by_ulm;
  for (std::int64_t i = 0; i < n; ++i) {
    auto c = element_at(a, static_cast<std::uint64_t>(i));
    auto [it, fresh] = by_ulm.try_emplace(ulm_sequence(a, c), c, 0);
    ++it->second.second;  // lexicographic enumeration: first hit is the least
  }
  std::vector<std::pair<PointedClass, std::uint64_t>> out;
  for (auto& [key, val] : by_ulm) out.push_back({PointedClass{a, val.first}, val.second});
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first.marked < y.first.marked; });
  return out;
}

BigInt pointed_aut_order(const PointedClass& bb) {
  const auto target = ulm_sequence(bb.group, bb.marked);
  for (const auto& [cls, size] : pointed_classes(bb.group)) {
    if (ulm_sequence(bb.group, cls.marked) == target) return aut_order(bb.group) / size;
  }
  throw Error("pointed_aut_order: class not found");
}

// ------------------------------------------------------------- hom enumeration

namespace {

// Enumerates Hom(B, A) as tuples of images of the standard generators of B.
class HomEnumerator {
 public:
  HomEnumerator(const GroupType& b, const GroupType& a) : b_(b), a_(a) {
    require_same_prime(b, a);
    if (BigInt(default_caps().hom_enumeration) < hom_count(b, a)) {
      throw CapExceeded("Hom(" + b.to_string() + ", " + a.to_string() + ") too large to enumerate");
    }
    for (int lb : b.lambda) {
      // images of a generator of order p^lb: A[p^lb]
      std::vector<std::vector<std::int64_t>> imgs;
      std::vector<std::int64_t> step(a.lambda.size()), radix(a.lambda.size());
      for (std::size_t j = 0; j < a.lambda.size(); ++j) {
        step[j] = ipow(a.p, std::max(0, a.lambda[j] - lb));
        radix[j] = a.component_order(j) / step[j];
      }
      std::vector<std::int64_t> cnt(a.lambda.size(), 0);
      while (true) {
        std::vector<std::int64_t> c(a.lambda.size());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = cnt[j] * step[j];
        imgs.push_back(std::move(c));
        std::size_t j = cnt.size();
        bool done = true;
        while (j > 0) {
          --j;
          if (++cnt[j] < radix[j]) {
            done = false;
            break;
          }
          cnt[j] = 0;
        }
        if (done) break;
      }
      choices_.push_back(std::move(imgs));
    }
    pos_.assign(choices_.size(), 0);
  }

  // Current hom: image of generator i.
  const std::vector<std::int64_t>& image(std::size_t i) const { return choices_[i][pos_[i]]; }

  bool next() {
    std::size_t i = pos_.size();
    while (i > 0) {
      --i;
      if (++pos_[i] < choices_[i].size()) return true;
      pos_[i] = 0;
    }
    return false;
  }

  bool surjective() const {
    // Surjective iff the images span A/pA.
    const std::size_t ra = a_.lambda.size();
    if (ra == 0) return true;
    const std::int64_t p = a_.p;
    std::vector<std::vector<std::int64_t>> rows;
    for (std::size_t i = 0; i < pos_.size(); ++i) {
      std::vector<std::int64_t> r(ra);
      for (std::size_t j = 0; j < ra; ++j) r[j] = image(i)[j] % p;
      rows.push_back(std::move(r));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ra && rank < rows.size(); ++col) {
      std::size_t piv = rank;
      while (piv < rows.size() && rows[piv][col] == 0) ++piv;
      if (piv == rows.size()) return false;  // a missing pivot column means rank < ra
      std::swap(rows[rank], rows[piv]);
      std::int64_t inv = 1;
      while ((rows[rank][col] * inv) % p != 1) ++inv;
      for (auto& x : rows[rank]) x = (x * inv) % p;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (k != rank && rows[k][col] != 0) {
          const std::int64_t f = rows[k][col];
          for (std::size_t j = 0; j < ra; ++j) rows[k][j] = mod_reduce(rows[k][j] - f * rows[rank][j], p);
        }
      }
      ++rank;
    }
    return rank == ra;
  }

  void apply(std::span<const std::int64_t> x, std::vector<std::int64_t>& out) const {
    const std::size_t ra = a_.lambda.size();
    out.assign(ra, 0);
    for (std::size_t i = 0; i < pos_.size(); ++i) {
      if (x[i] == 0) continue;
      const auto& img = image(i);
      for (std::size_t j = 0; j < ra; ++j) out[j] += x[i] * img[j];
    }
    for (std::size_t j = 0; j < ra; ++j) out[j] = mod_reduce(out[j], a_.component_order(j));
  }

 private:
  GroupType b_, a_;
  std::vector<std::vector<std::vector<std::int64_t>>> choices_;
  std::vector<std::size_t> pos_;
};

void check_orbit_cap(const GroupType& g, const char* what) {
  if (g.order() > default_caps().orbit_order) {
    throw CapExceeded(std::string(what) + ": |" + g.to_string() + "| exceeds the brute-force cap");
  }
}

}  // namespace

std::uint64_t pointed_sur_count(const GroupType& b, std::span<const std::int64_t> b_marked,
                                const GroupType& a, std::span<const std::int64_t> a_marked) {
  check_orbit_cap(b, "pointed_sur_count");
  check_orbit_cap(a, "pointed_sur_count");
  if (a.log_order() > b.log_order() || a.rank() > b.rank()) return 0;
  HomEnumerator homs(b, a);
  std::vector<std::int64_t> target(a_marked.begin(), a_marked.end());
  for (std::size_t j = 0; j < target.size(); ++j) target[j] = mod_reduce(target[j], a.component_order(j));
  std::vector<std::int64_t> img;
  std::uint64_t count = 0;
  do {
    homs.apply(b_marked, img);
    if (img == target && homs.surjective()) ++count;
  } while (homs.next());
  return count;
}

std::uint64_t pointed_sur_count(const PointedClass& bb, const PointedClass& aa) {
  return pointed_sur_count(bb.group, bb.marked, aa.group, aa.marked);
}

PointedSurTable pointed_sur_table(const GroupType& b, const GroupType& a) {
  check_orbit_cap(b, "pointed_sur_table");
  check_orbit_cap(a, "pointed_sur_table");
  PointedSurTable table;
  for (auto& [cls, size] : pointed_classes(b)) {
    table.classes.push_back(cls);
    table.orbit_sizes.push_back(size);
  }
  const auto na = static_cast<std::size_t>(a.order());
  table.counts.assign(table.classes.size(), std::vector<std::uint64_t>(na, 0));
  if (a.log_order() > b.log_order() || a.rank() > b.rank()) return table;
  HomEnumerator homs(b, a);
  std::vector<std::int64_t> img;
  do {
    if (!homs.surjective()) continue;
    ++table.surjections;
    for (std::size_t c = 0; c < table.classes.size(); ++c) {
      homs.apply(table.classes[c].marked, img);
      ++table.counts[c][element_index(a, img)];
    }
  } while (homs.next());
  return table;
}

// ------------------------------------------------------------------ quotients

GroupType quotient_by_elements(const GroupType& a, const std::vector<GroupElement>& gs) {
  const std::size_t r = a.lambda.size();
  if (r == 0) return a;
  IntMatrix rel(r + gs.size(), r);
  for (std::size_t i = 0; i < r; ++i) rel(i, i) = a.component_order(i);
  for (std::size_t k = 0; k < gs.size(); ++k) {
    if (gs[k].parent != a) throw Error("quotient_by_elements: element not in A");
    for (std::size_t j = 0; j < r; ++j) rel(r + k, j) = gs[k].coords[j];
  }
  std::vector<int> lambda;
  for (auto d : invariant_factors(rel)) {
    int k = 0;
    while (d % a.p == 0) d /= a.p, ++k;
    if (d != 1) throw InvariantViolation("quotient_by_elements: non-p invariant factor");
    lambda.push_back(k);
  }
  return GroupType::make(a.p, lambda);
}

std::int64_t ext_square_torsion(const GroupType& a, std::int64_t q) {
  std::vector<std::int64_t> d;
  for (std::size_t i = 0; i < a.lambda.size(); ++i) d.push_back(a.component_order(i));
  std::sort(d.begin(), d.end());
  std::int64_t out = 1;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) out *= std::gcd(d[i], q - 1);
  }
  return out;
}

// -------------------------------------------------------------------- Sylow

SylowProjection sylow_project(std::span<const std::int64_t> invariants,
                              std::span<const std::int64_t> coords, std::int64_t p) {
  std::vector<std::pair<int, std::int64_t>> parts;  // (exponent, coordinate)
  for (std::size_t i = 0; i < invariants.size(); ++i) {
    std::int64_t d = invariants[i];
    int k = 0;
    while (d % p == 0) d /= p, ++k;
    if (k == 0) continue;
    const std::int64_t c = coords.empty() ? 0 : coords[i];
    parts.push_back({k, mod_reduce(c, ipow(p, k))});
  }
  std::stable_sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  SylowProjection out;
  std::vector<int> lambda;
  for (auto& [k, c] : parts) {
    lambda.push_back(k);
    out.element.push_back(c);
  }
  out.type = GroupType::make(p, lambda);
  return out;
}

GroupType sylow_type(std::span<const std::int64_t> invariants, std::int64_t p) {
  return sylow_project(invariants, {}, p).type;
}

}  // namespace cllab
