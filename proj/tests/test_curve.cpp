#include <doctest.h>

#include "cllab/curve.hpp"
#include "cllab/error.hpp"

using namespace cllab;

namespace {

// #C(F_q) by listing all (x, y) with y^2 = f(x) plus the points at infinity.
std::int64_t brute_count_prime(const Curve& c) {
  PrimeField k(c.q);
  std::int64_t n = 0;
  for (std::uint32_t x = 0; x < c.q; ++x) {
    const auto fx = eval(k, c.f, x);
    for (std::uint32_t y = 0; y < c.q; ++y) n += k.mul(y, y) == fx;
  }
  switch (c.model) {
    case Model::Split: return n + 2;
    case Model::Inert: return n;
    case Model::Ramified: return n + 1;
  }
  return n;
}

// #C(F_{q^2}) the same way inside the extension field.
std::int64_t brute_count_square(const Curve& c) {
  const auto f = ExtensionField::get(c.q, 2);
  std::int64_t n = 0;
  std::vector<std::int64_t> roots(f->size(), 0);
  for (std::uint32_t y = 0; y < f->size(); ++y) ++roots[f->mul(y, y)];
  for (std::uint32_t x = 0; x < f->size(); ++x) {
    std::uint32_t acc = 0;
    for (int i = deg(c.f); i >= 0; --i) acc = f->add_scalar(f->mul(acc, x), c.f[i]);
    n += roots[acc];
  }
  return n + (c.model == Model::Ramified ? 1 : 2);
}

}  // namespace

TEST_SUITE("curve") {
  TEST_CASE("family sizes") {
    CHECK(enumerate_curves(3, 4, Model::Split).size() == 54);
    CHECK(enumerate_curves(3, 4, Model::Inert).size() == 54);
    CHECK(enumerate_curves(5, 3, Model::Ramified).size() == 100);
    CHECK(count_curves(5, 6) == 12500);
    CHECK_THROWS_AS(enumerate_curves(3, 5, Model::Split), Error);
    CHECK_THROWS_AS(enumerate_curves(3, 4, Model::Ramified), Error);
    for (const auto& c : enumerate_curves(3, 4, Model::Inert)) CHECK(c.f.back() == 2);
  }

  TEST_CASE("curve validation") {
    CHECK_THROWS_AS(Curve::make(3, Poly{1, 2, 1}, Model::Split), Error);  // (x+1)^2
    CHECK_THROWS_AS(Curve::make(3, Poly{1, 0, 0, 0, 2}, Model::Split), Error);
    CHECK_NOTHROW(Curve::make(3, Poly{1, 0, 0, 0, 1}, Model::Split));
    CHECK(Curve::make(5, Poly{0, 1, 0, 1}, Model::Ramified).genus == 1);
  }

  TEST_CASE("point counts: character sums, place counts and brute force agree") {
    const Curve e = Curve::make(5, Poly{0, 1, 0, 1}, Model::Ramified);
    CHECK(point_count(e, 1) == 4);
    const Curve s = Curve::make(3, Poly{1, 0, 0, 0, 1}, Model::Split);
    CHECK(point_count(s, 1) == brute_count_prime(s));
    for (auto [q, d, m] : std::vector<std::tuple<std::uint32_t, int, Model>>{
             {3, 4, Model::Split}, {3, 4, Model::Inert}, {3, 5, Model::Ramified}, {5, 3, Model::Ramified},
             {3, 6, Model::Inert}}) {
      for (const auto& c : enumerate_curves(q, d, m)) {
        INFO(c.to_string());
        CHECK(point_count(c, 1) == brute_count_prime(c));
        CHECK(point_count(c, 2) == brute_count_square(c));
        for (int i = 1; i <= 3; ++i) CHECK(point_count(c, i) == point_count_from_places(c, i));
      }
    }
  }

  TEST_CASE("L-polynomials") {
    const Curve e = Curve::make(5, Poly{0, 1, 0, 1}, Model::Ramified);
    const auto l = l_polynomial(e);
    CHECK(l.coeffs == std::vector<std::int64_t>{1, -2, 5});
    CHECK(l.at_one() == 4);
    const Curve g0 = Curve::make(3, Poly{1, 0, 1}, Model::Split);
    CHECK(g0.genus == 0);
    CHECK(l_polynomial(g0).coeffs == std::vector<std::int64_t>{1});
    CHECK(l_polynomial(g0).at_one() == 1);
    for (const auto& c : enumerate_curves(3, 6, Model::Split)) {
      const auto lp = l_polynomial(c);
      CHECK(lp.functional_equation_ok(3));
      CHECK(lp.weil_bounds_ok(3));
      // N_{g+1} predicted by L agrees with the direct count
      std::vector<std::int64_t> counts;
      for (int i = 1; i <= c.genus; ++i) counts.push_back(point_count(c, i));
      CHECK(l_polynomial_from_counts(3, c.genus, counts).coeffs == lp.coeffs);
    }
    LPolynomial bad{{1, 9, 5}};
    CHECK_FALSE(bad.weil_bounds_ok(5));
  }

  TEST_CASE("places and divisors") {
    const Curve s = Curve::make(3, Poly{1, 0, 0, 0, 1}, Model::Split);
    const auto inf = infinite_places(s);
    REQUIRE(inf.size() == 2);
    CHECK(inf[0].branch == 1);
    CHECK(infinite_places(Curve::make(3, Poly{1, 0, 0, 0, 2}, Model::Inert))[0].degree == 2);
    std::int64_t deg1 = 0;
    for (const auto& p : places_up_to_degree(s, 1)) deg1 += p.degree == 1;
    CHECK(deg1 == point_count(s, 1));
    const Divisor d = Divisor::of(inf[0], 2) - Divisor::of(inf[1]);
    CHECK(d.degree() == 1);
    CHECK_FALSE(d.is_effective());
    CHECK((d + Divisor::of(inf[1])).is_effective());
    CHECK((d - d).is_zero());
    CHECK((d * 3).coefficient(inf[0]) == 6);
  }
}
