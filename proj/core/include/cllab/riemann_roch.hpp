#pragma once

#include <map>
#include <vector>

#include "cllab/curve.hpp"

namespace cllab {

/// h = (a + b y) / w with a, b, w in F_q[x], w monic.
struct Function {
  Poly a, b;
  Poly w{1};
  bool is_zero() const { return a.empty() && b.empty(); }
};

/// Explicit function field arithmetic for one curve: Riemann-Roch spaces,
/// divisors of functions and principality. Holds per-curve caches, so one
/// instance must not be shared between threads.
class FunctionField {
 public:
  explicit FunctionField(Curve c);

  const Curve& curve() const { return curve_; }
  const PrimeField& field() const { return k_; }

  /// Basis of L(D) = {h : div(h) + D >= 0} (reduced echelon form, deterministic).
  std::vector<Function> riemann_roch_space(const Divisor& d) const;
  int dimension(const Divisor& d) const { return static_cast<int>(riemann_roch_space(d).size()); }

  /// div(h) for nonzero h.
  Divisor divisor_of(const Function& h) const;

  /// Degree-zero E is principal iff dim L(-E) = 1.
  bool is_principal(const Divisor& e) const;

  /// Places over the monic irreducible u (cached).
  const std::vector<Place>& places_over(const Poly& u) const;

  /// V with V^2 = f mod u^r and V = p.v mod u, for an AffineSplit place p.
  Poly split_lift(const Place& p, int r) const;

  std::vector<Place> infinite() const { return infinite_places(curve_); }

 private:
  const Poly& u_power(const Poly& u, int r) const;
  const std::vector<std::uint32_t>& sqrt_series(int length) const;
  Divisor divisor_of_integral(const Poly& a, const Poly& b) const;
  Divisor divisor_of_polynomial(const Poly& w) const;

  Curve curve_;
  PrimeField k_;
  mutable std::map<Poly, std::vector<Place>> places_;
  mutable std::map<std::pair<Poly, int>, Poly> u_powers_;
  mutable std::map<Place, std::pair<int, Poly>> lifts_;
  mutable std::vector<std::uint32_t> series_;  // sqrt of x^{-deg f} f(x) in z = 1/x (split model)
};

/// Null space basis of a matrix over F_q (rows of length n), in reduced echelon
/// form with one basis vector per free column.
std::vector<std::vector<std::uint32_t>> null_space(const PrimeField& k,
                                                   std::vector<std::vector<std::uint32_t>> rows,
                                                   std::size_t n);

}  // namespace cllab
