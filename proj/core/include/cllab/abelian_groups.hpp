#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cllab/bigint.hpp"

namespace cllab {

bool is_prime(std::int64_t n);
bool is_odd_prime(std::int64_t n);
std::int64_t ipow(std::int64_t base, int exponent);  // throws on overflow

/// Finite abelian p-group Z/p^lambda_1 + ... + Z/p^lambda_r with lambda non-increasing.
struct GroupType {
  std::int64_t p = 3;
  std::vector<int> lambda;

  /// Validates p and sorts lambda into non-increasing order; rejects entries < 1.
  static GroupType make(std::int64_t p, std::vector<int> lambda);
  static GroupType trivial(std::int64_t p) { return make(p, {}); }
  static GroupType cyclic(std::int64_t p, int k) { return k == 0 ? trivial(p) : make(p, {k}); }

  int rank() const { return static_cast<int>(lambda.size()); }
  int log_order() const;
  std::int64_t order() const;
  std::int64_t component_order(int i) const { return ipow(p, lambda[i]); }
  bool is_trivial() const { return lambda.empty(); }

  /// "trivial", "Z/3", "Z/9xZ/3", ...
  std::string to_string() const;

  auto operator<=>(const GroupType&) const = default;
};

/// Parses "trivial", "1", "Z/9", "Z/9xZ/3" (factors must be powers of p).
GroupType parse_group_type(std::int64_t p, const std::string& text);

struct GroupElement {
  GroupType parent;
  std::vector<std::int64_t> coords;  // coords[i] in [0, p^lambda_i)

  static GroupElement zero(const GroupType& g);
  static GroupElement make(const GroupType& g, std::vector<std::int64_t> coords);

  GroupElement operator+(const GroupElement& other) const;
  GroupElement operator-() const;
  std::int64_t order() const;

  bool operator==(const GroupElement&) const = default;
};

/// A group with an Aut-orbit of marked elements, represented by the
/// lexicographically least coordinate vector of the orbit.
struct PointedClass {
  GroupType group;
  std::vector<std::int64_t> marked;

  std::string to_string() const;
  auto operator<=>(const PointedClass&) const = default;
};

/// Sizes above which brute-force operations refuse to run.
struct BruteForceCaps {
  std::int64_t orbit_order = 6561;       // element_orbits, pointed_sur_count (3^8)
  std::int64_t lattice_order = 243;      // subgroup lattice in sur_count (3^5)
  std::int64_t hom_enumeration = 200'000'000;
};

BruteForceCaps& default_caps();

std::vector<GroupType> enumerate_types(std::int64_t p, int max_log_order);

BigInt aut_order(const GroupType& a);
BigInt hom_count(const GroupType& b, const GroupType& a);

/// |Sur(B, A)| by Moebius inversion over the brute-force subgroup lattice of A.
BigInt sur_count(const GroupType& b, const GroupType& a);

/// |A[p^k]|.
std::int64_t torsion_count(const GroupType& a, int k);

/// Height sequence h(x), h(px), h(p^2 x), ... until p^j x = 0. Two elements of
/// a finite abelian p-group lie in one Aut-orbit iff these sequences agree.
std::vector<int> ulm_sequence(const GroupType& a, std::span<const std::int64_t> coords);

/// Canonical pointed class of (A, x) without enumerating A.
PointedClass canonicalize(const GroupType& a, std::span<const std::int64_t> coords);

/// Aut(A)-orbits of A by enumeration of all elements (cap: orbit_order).
std::vector<std::pair<PointedClass, std::uint64_t>> element_orbits(const GroupType& a);

/// Same orbits, counted from coordinate valuation patterns (no cap; sorted like element_orbits).
std::vector<std::pair<PointedClass, std::uint64_t>> pointed_classes(const GroupType& a);

/// |Aut(B, b)| = |Aut(B)| / |orbit of b|.
BigInt pointed_aut_order(const PointedClass& bb);

/// Number of surjections B -> A sending b to a, by enumerating Hom(B, A).
std::uint64_t pointed_sur_count(const PointedClass& bb, const PointedClass& aa);

/// Same count for explicit (not necessarily canonical) marked elements.
std::uint64_t pointed_sur_count(const GroupType& b, std::span<const std::int64_t> b_marked,
                                const GroupType& a, std::span<const std::int64_t> a_marked);

/// For every pointed class (B, b) of B (order of pointed_classes) and every
/// element index of A (lexicographic order), the number of surjections B -> A
/// with b -> a. One pass over Hom(B, A).
struct PointedSurTable {
  std::vector<PointedClass> classes;
  std::vector<std::uint64_t> orbit_sizes;
  std::vector<std::vector<std::uint64_t>> counts;  // counts[class][element index of A]
  std::uint64_t surjections = 0;
};
PointedSurTable pointed_sur_table(const GroupType& b, const GroupType& a);

/// A / <gs> as a group type, via Smith normal form.
GroupType quotient_by_elements(const GroupType& a, const std::vector<GroupElement>& gs);

/// #(wedge^2 A)[q-1] = prod_{i<j} gcd(d_i, q-1) over invariant factors d_1 | d_2 | ...
std::int64_t ext_square_torsion(const GroupType& a, std::int64_t q);

/// Lexicographic enumeration helpers: index <-> coordinates (coords[0] most significant).
std::vector<std::int64_t> element_at(const GroupType& a, std::uint64_t index);
std::uint64_t element_index(const GroupType& a, std::span<const std::int64_t> coords);

/// Sylow p-part of a group given by invariant factors, plus the image of an element.
struct SylowProjection {
  GroupType type;
  std::vector<std::int64_t> element;
};
SylowProjection sylow_project(std::span<const std::int64_t> invariants,
                              std::span<const std::int64_t> coords, std::int64_t p);
GroupType sylow_type(std::span<const std::int64_t> invariants, std::int64_t p);

}  // namespace cllab
