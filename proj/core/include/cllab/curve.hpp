#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cllab/prime_field.hpp"

namespace cllab {

/// Behaviour of the place at infinity of F_q(x) in F_q(x, y), y^2 = f.
enum class Model { Split, Inert, Ramified };

std::string to_string(Model m);
Model parse_model(const std::string& s);

/// Hyperelliptic model y^2 = f(x) over F_q, q an odd prime.
struct Curve {
  std::uint32_t q = 3;
  Poly f;
  Model model = Model::Split;
  int genus = 0;

  /// Validates squarefreeness and the leading-coefficient normalization
  /// (Split: monic even degree; Inert: even degree with leading coefficient the
  /// least non-residue; Ramified: monic odd degree).
  static Curve make(std::uint32_t q, Poly f, Model model);

  std::string to_string() const;
};

/// Every normalized squarefree f of the given degree, in increasing coefficient index.
std::vector<Curve> enumerate_curves(std::uint32_t q, int deg_f, Model model);
/// Number of curves enumerate_curves would return: q^d - q^(d-1) for d >= 2.
std::uint64_t count_curves(std::uint32_t q, int deg_f);

struct Place {
  enum class Kind { AffineSplit, AffineInert, AffineRamified, InfSplit, InfInert, InfRamified };
  Kind kind = Kind::AffineSplit;
  Poly u;      // monic irreducible (affine places)
  Poly v;      // y = v mod u (AffineSplit); empty otherwise
  int branch = 0;  // 1 or 2 for InfSplit
  int degree = 1;

  bool is_affine() const { return kind <= Kind::AffineRamified; }
  bool is_infinite() const { return !is_affine(); }
  std::string to_string() const;

  auto operator<=>(const Place&) const = default;
};

/// Formal sum of places.
class Divisor {
 public:
  Divisor() = default;
  static Divisor of(const Place& p, int n = 1);

  int degree() const;
  int coefficient(const Place& p) const;
  const std::map<Place, int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_effective() const;

  Divisor& add(const Place& p, int n);
  Divisor operator+(const Divisor& o) const;
  Divisor operator-(const Divisor& o) const;
  Divisor operator-() const;
  Divisor operator*(int n) const;
  bool operator==(const Divisor&) const = default;
  auto operator<=>(const Divisor&) const = default;

  std::string to_string() const;

 private:
  std::map<Place, int> terms_;
};

/// The places of the curve above infinity (two split branches, one inert, or one ramified).
std::vector<Place> infinite_places(const Curve& c);

/// Places over the monic irreducible u (one or two).
std::vector<Place> places_over(const Curve& c, const Poly& u);

/// All places of degree <= max_degree (affine then infinite), deterministic order:
/// by place degree, then u index, then v index.
std::vector<Place> places_up_to_degree(const Curve& c, int max_degree);

/// #C(F_{q^i}) by quadratic-character sums over F_{q^i} plus the points at infinity.
std::int64_t point_count(const Curve& c, int i);

/// #C(F_{q^i}) from the number of places of each degree dividing i (independent route).
std::int64_t point_count_from_places(const Curve& c, int i);

/// L(T) = 1 + a_1 T + ... + a_2g T^2g.
struct LPolynomial {
  std::vector<std::int64_t> coeffs;
  std::int64_t at_one() const;  // |Pic^0| = L(1)
  bool functional_equation_ok(std::uint32_t q) const;
  bool weil_bounds_ok(std::uint32_t q) const;  // roots of the reciprocal polynomial on |z| = sqrt(q)
};

/// From point counts N_1..N_g via Newton's identities and the functional equation.
LPolynomial l_polynomial_from_counts(std::uint32_t q, int genus, const std::vector<std::int64_t>& counts);
LPolynomial l_polynomial(const Curve& c);

}  // namespace cllab
