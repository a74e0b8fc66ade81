#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cllab/riemann_roch.hpp"

namespace cllab {

/// Pic^0 of a curve as an explicit finite abelian group.
struct DivisorClassGroup {
  std::vector<std::int64_t> invariants;  // d_1 | d_2 | ..., all > 1
  std::int64_t order = 1;
  std::vector<Divisor> generators;       // degree-0 divisors tried as generators
  std::vector<std::vector<std::int64_t>> generator_coords;
  std::optional<std::vector<std::int64_t>> delta_coords;  // split model only
  std::int64_t regulator = 0;            // order of delta (split model only)
  std::vector<std::int64_t> cl_invariants;  // Pic^0 / <delta> (split model only)
  Divisor base;                          // base divisor used to normalize classes
  bool fallback_base = false;            // inert curve without a degree-1 place

  std::int64_t cl_order() const;
  /// Order of an element given in invariant coordinates.
  std::int64_t element_order(const std::vector<std::int64_t>& coords) const;
};

/// Builds Pic^0 by extending the subgroup generated by place differences one
/// generator at a time; classes are compared through canonical effective
/// representatives obtained from Riemann-Roch spaces. Keeps the element table
/// so further divisors can be located.
class Pic0 {
 public:
  struct Options {
    std::int64_t max_order = 10000;
  };

  explicit Pic0(const Curve& c) : Pic0(c, Options{}) {}
  Pic0(const Curve& c, Options opts);

  const DivisorClassGroup& group() const { return group_; }
  const FunctionField& function_field() const { return ff_; }
  std::int64_t l_value() const { return l1_; }

  /// Invariant coordinates of the class of a degree-0 divisor.
  std::vector<std::int64_t> coordinates(const Divisor& d) const;

  /// Canonical effective divisor E with D ~ E - (deg E / deg B) B.
  Divisor canonical_representative(const Divisor& d) const;

 private:
  struct Element {
    Divisor rep;  // canonical effective representative
    std::vector<std::int64_t> poly_coords;  // coordinates on the chosen generators
  };

  Divisor reduce(const Divisor& d0) const;
  std::string key(const Divisor& e) const;
  int rep_multiple(const Divisor& e) const;
  Divisor sum(const Divisor& e1, const Divisor& e2) const;
  std::vector<std::int64_t> to_invariant(const std::vector<std::int64_t>& poly_coords) const;
  void build(const Options& opts);

  Curve curve_;
  FunctionField ff_;
  Place base_;
  int base_degree_ = 1;
  std::int64_t l1_ = 0;
  std::vector<Element> elements_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::int64_t> relative_orders_;
  std::vector<std::vector<std::int64_t>> transform_;  // rows of V for used generators
  std::vector<std::size_t> invariant_columns_;
  DivisorClassGroup group_;
};

inline DivisorClassGroup pic0_group(const Curve& c) { return Pic0(c).group(); }

/// Coordinates of delta = inf_1 - inf_2 (split model only).
std::vector<std::int64_t> delta_class(const Curve& c);

}  // namespace cllab
