#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace cllab {

/// Arithmetic in F_q for a small odd prime q.
class PrimeField {
 public:
  explicit PrimeField(std::uint32_t q);

  std::uint32_t q() const { return q_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % q_; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + q_ - b) % q_; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((std::uint64_t(a) * b) % q_);
  }
  std::uint32_t inv(std::uint32_t a) const;  // a != 0
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  bool is_square(std::uint32_t a) const { return square_[a]; }  // 0 counts as a square
  /// Least non-negative square root, or -1 when none exists.
  std::int64_t sqrt(std::uint32_t a) const;
  /// Least quadratic non-residue.
  std::uint32_t nonresidue() const { return nonresidue_; }

 private:
  std::uint32_t q_;
  std::vector<std::uint32_t> inv_;
  std::vector<bool> square_;
  std::vector<std::int64_t> sqrt_;
  std::uint32_t nonresidue_ = 0;
};

/// Polynomial over F_q, coefficients low-to-high, no trailing zeros (zero = empty).
using Poly = std::vector<std::uint32_t>;

int deg(const Poly& a);  // -1 for the zero polynomial
void trim(Poly& a);
Poly poly_const(std::uint32_t c);
Poly poly_x_minus(const PrimeField& k, std::uint32_t r);  // x - r
Poly poly_monomial(std::uint32_t c, int degree);

Poly add(const PrimeField& k, const Poly& a, const Poly& b);
Poly sub(const PrimeField& k, const Poly& a, const Poly& b);
Poly neg(const PrimeField& k, const Poly& a);
Poly scale(const PrimeField& k, const Poly& a, std::uint32_t c);
Poly mul(const PrimeField& k, const Poly& a, const Poly& b);
/// (quotient, remainder); b nonzero.
std::pair<Poly, Poly> divmod(const PrimeField& k, const Poly& a, const Poly& b);
Poly mod(const PrimeField& k, const Poly& a, const Poly& b);
Poly div_exact(const PrimeField& k, const Poly& a, const Poly& b);  // throws if b does not divide a
Poly mulmod(const PrimeField& k, const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const PrimeField& k, Poly base, std::uint64_t e, const Poly& m);
Poly pow(const PrimeField& k, const Poly& a, int e);
Poly gcd(const PrimeField& k, Poly a, Poly b);  // monic (or zero)
/// Inverse of a modulo m (gcd(a, m) = 1), else throws.
Poly invmod(const PrimeField& k, const Poly& a, const Poly& m);
Poly monic(const PrimeField& k, const Poly& a);
Poly derivative(const PrimeField& k, const Poly& a);
std::uint32_t eval(const PrimeField& k, const Poly& a, std::uint32_t x);
/// Multiplicity of the (irreducible) u in a; a nonzero.
int valuation(const PrimeField& k, Poly a, const Poly& u);

bool is_squarefree(const PrimeField& k, const Poly& a);
bool is_irreducible(const PrimeField& k, const Poly& a);

/// Full factorization into monic irreducibles with multiplicities, sorted by
/// (degree, coefficients). The leading coefficient is dropped.
std::vector<std::pair<Poly, int>> factor(const PrimeField& k, const Poly& a);

/// All monic irreducibles of the given degree in increasing index order
/// (index = coefficients read as base-q digits, constant term least significant).
const std::vector<Poly>& monic_irreducibles(std::uint32_t q, int degree);

std::uint64_t poly_index(const Poly& a, std::uint32_t q);
Poly poly_from_index(std::uint64_t index, std::uint32_t q);

/// Square root of a modulo the irreducible u (a nonzero square mod u), least index of the pair.
Poly sqrt_mod_irreducible(const PrimeField& k, const Poly& a, const Poly& u);
/// Whether a (nonzero mod u) is a square in F_q[x]/(u).
bool is_square_mod_irreducible(const PrimeField& k, const Poly& a, const Poly& u);

/// F_{q^i} = F_q[x]/(m) with m the least-index monic irreducible of degree i.
/// Elements are indexed by their coefficient digits; multiplication through
/// discrete log tables.
class ExtensionField {
 public:
  ExtensionField(std::uint32_t q, int degree);

  std::uint32_t q() const { return q_; }
  int degree() const { return degree_; }
  std::uint64_t size() const { return size_; }
  const Poly& modulus() const { return modulus_; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t s = std::uint64_t(log_[a]) + log_[b];
    if (s >= size_ - 1) s -= size_ - 1;
    return exp_[s];
  }
  /// a + c for c in the prime field.
  std::uint32_t add_scalar(std::uint32_t a, std::uint32_t c) const {
    const std::uint32_t low = a % q_;
    return a - low + (low + c) % q_;
  }
  /// Quadratic character: 0, 1 or -1.
  int chi(std::uint32_t a) const { return a == 0 ? 0 : (log_[a] % 2 == 0 ? 1 : -1); }

  /// Cached instance (thread-safe); throws if q^degree exceeds the budget.
  static std::shared_ptr<const ExtensionField> get(std::uint32_t q, int degree);
  static constexpr std::uint64_t kMaxSize = 20'000'000;

 private:
  std::uint32_t q_;
  int degree_;
  std::uint64_t size_;
  Poly modulus_;
  std::vector<std::uint32_t> exp_, log_;
};

}  // namespace cllab
