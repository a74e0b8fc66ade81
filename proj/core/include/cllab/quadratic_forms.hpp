#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cllab {

/// Binary quadratic form a x^2 + b x y + c y^2.
struct Form {
  std::int64_t a = 1, b = 0, c = 0;

  std::int64_t discriminant() const { return b * b - 4 * a * c; }
  bool operator==(const Form&) const = default;
  auto operator<=>(const Form&) const = default;
  std::string to_string() const;
};

struct FormHash {
  std::size_t operator()(const Form& f) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(f.a) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(f.b) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(f.c) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

bool is_fundamental_discriminant(std::int64_t d);

/// Kronecker symbol (d/n) for n >= 1.
int kronecker(std::int64_t d, std::int64_t n);

/// The principal form of discriminant d.
Form principal_form(std::int64_t d);

/// Reduced representative: for d < 0 the unique reduced positive definite form,
/// for d > 0 some reduced indefinite form of the cycle.
Form reduce(Form f);

/// One reduction step of an indefinite form (proper equivalence).
Form rho(const Form& f);

/// The rho-cycle of a reduced indefinite form, starting at f.
std::vector<Form> cycle(const Form& f);

/// Unique representative of the proper equivalence class: the reduced form for
/// d < 0, the lexicographically least form of the cycle for d > 0.
Form canonical(const Form& f);

/// Dirichlet composition, not reduced.
Form compose(const Form& f, const Form& g);
Form inverse(const Form& f);
/// canonical(f * g)
Form multiply(const Form& f, const Form& g);
/// canonical(f^n), n >= 0
Form power(const Form& f, std::uint64_t n);

/// All reduced forms of discriminant d (definite: one per class; indefinite:
/// every reduced form, so each class contributes its whole cycle).
std::vector<Form> reduced_forms(std::int64_t d);

/// Number of classes of primitive forms counted without composition: reduced
/// forms for d < 0, rho-cycles for d > 0 (the narrow class number).
std::int64_t count_form_classes(std::int64_t d);

/// (p, b, (b^2 - d)/4p) with b the least non-negative square root of d mod 4p;
/// nullopt if p is inert.
std::optional<Form> prime_form(std::int64_t d, std::int64_t p);

/// Class group of a fundamental discriminant, built from the prime forms of all
/// primes below the Minkowski-type bound. For d > 0 the built group is the
/// narrow class group and only its odd part is exposed.
class ClassGroup {
 public:
  struct Options {
    std::int64_t max_abs_discriminant = 10'000'000;
    /// Stop adding generators once the generated group has this order (d < 0).
    std::optional<std::int64_t> known_order;
  };

  explicit ClassGroup(std::int64_t d) : ClassGroup(d, Options{}) {}
  ClassGroup(std::int64_t d, const Options& opts);

  std::int64_t discriminant() const { return d_; }
  /// Invariant factors of the exposed group (odd part when d > 0).
  const std::vector<std::int64_t>& invariants() const { return invariants_; }
  std::int64_t order() const;
  /// Order of the group generated by the prime forms used (for d > 0 a subgroup
  /// of the narrow class group containing its odd part).
  std::int64_t form_group_order() const { return static_cast<std::int64_t>(elements_.size()); }
  /// Prime forms that enlarged the group, in the order used.
  const std::vector<Form>& generators() const { return generators_; }
  /// Coordinates of the class of f with respect to invariants().
  std::vector<std::int64_t> coordinates(const Form& f) const;
  /// Every class representative in the order it was generated.
  const std::vector<Form>& elements() const { return elements_; }

 private:
  std::int64_t d_;
  std::vector<Form> generators_;
  std::vector<Form> elements_;
  std::vector<std::vector<std::int64_t>> exponents_;
  std::unordered_map<Form, std::size_t, FormHash> index_;
  std::vector<std::int64_t> full_diagonal_;
  std::vector<std::vector<std::int64_t>> transform_;  // polycyclic exponents -> SNF columns
  std::vector<std::int64_t> invariants_;
  std::vector<std::size_t> exposed_columns_;
};

/// The class of w1 - w2 = 2 [p1] for a prime p split in Q(sqrt d), with p1 the
/// prime form of the least non-negative square root.
Form split_prime_delta_form(std::int64_t d, std::int64_t p);
std::vector<std::int64_t> split_prime_delta(const ClassGroup& cl, std::int64_t p);

}  // namespace cllab
