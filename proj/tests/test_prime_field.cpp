#include <doctest.h>

#include <random>

#include "cllab/error.hpp"
#include "cllab/prime_field.hpp"

using namespace cllab;

namespace {

Poly random_poly(std::mt19937_64& g, std::uint32_t q, int degree) {
  Poly a(degree + 1);
  for (auto& c : a) c = static_cast<std::uint32_t>(g() % q);
  trim(a);
  return a;
}

// Number of monic irreducibles of degree n over F_q (necklace formula).
std::uint64_t irreducible_count(std::uint64_t q, int n) {
  auto mobius = [](int m) {
    int r = 1;
    for (int p = 2; p * p <= m; ++p) {
      if (m % p == 0) {
        m /= p;
        if (m % p == 0) return 0;
        r = -r;
      }
    }
    return m > 1 ? -r : r;
  };
  std::int64_t total = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    std::int64_t pw = 1;
    for (int i = 0; i < n / d; ++i) pw *= static_cast<std::int64_t>(q);
    total += mobius(d) * pw;
  }
  return static_cast<std::uint64_t>(total / n);
}

}  // namespace

TEST_SUITE("prime_field") {
  TEST_CASE("field arithmetic") {
    for (std::uint32_t q : {3u, 5u, 7u, 11u}) {
      PrimeField k(q);
      for (std::uint32_t a = 1; a < q; ++a) {
        CHECK(k.mul(a, k.inv(a)) == 1);
        CHECK(k.pow(a, q - 1) == 1);
        const bool sq = k.pow(a, (q - 1) / 2) == 1;
        CHECK(k.is_square(a) == sq);
        if (sq) {
          const auto r = k.sqrt(a);
          REQUIRE(r >= 0);
          CHECK(k.mul(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r)) == a);
          CHECK(static_cast<std::uint32_t>(r) <= q - static_cast<std::uint32_t>(r));
        } else {
          CHECK(k.sqrt(a) == -1);
        }
      }
      CHECK_FALSE(k.is_square(k.nonresidue()));
      for (std::uint32_t a = 1; a < k.nonresidue(); ++a) CHECK(k.is_square(a));
    }
    CHECK_THROWS_AS(PrimeField(9), Error);
  }

  TEST_CASE("polynomial division and gcd identities") {
    std::mt19937_64 g(1);
    PrimeField k(5);
    for (int t = 0; t < 200; ++t) {
      const Poly a = random_poly(g, 5, static_cast<int>(g() % 8));
      Poly b = random_poly(g, 5, static_cast<int>(g() % 5));
      if (b.empty()) b = poly_const(1);
      const auto [qq, r] = divmod(k, a, b);
      CHECK(add(k, mul(k, qq, b), r) == a);
      CHECK(deg(r) < deg(b));
      const Poly d = gcd(k, a, b);
      if (!d.empty()) {
        CHECK(mod(k, a, d).empty());
        CHECK(mod(k, b, d).empty());
      }
      CHECK(div_exact(k, mul(k, a, b), b) == a);
    }
  }

  TEST_CASE("factorization reproduces the input") {
    std::mt19937_64 g(2);
    for (std::uint32_t q : {3u, 7u}) {
      PrimeField k(q);
      for (int t = 0; t < 100; ++t) {
        Poly a = monic(k, random_poly(g, q, 1 + static_cast<int>(g() % 9)));
        if (a.empty()) continue;
        Poly prod = poly_const(1);
        for (const auto& [u, e] : factor(k, a)) {
          CHECK(is_irreducible(k, u));
          CHECK(u.back() == 1);
          prod = mul(k, prod, pow(k, u, e));
        }
        CHECK(prod == a);
        bool sqf = true;
        for (const auto& [u, e] : factor(k, a)) sqf = sqf && e == 1;
        CHECK(is_squarefree(k, a) == sqf);
      }
    }
  }

  TEST_CASE("irreducible counts follow the necklace formula") {
    for (std::uint32_t q : {3u, 5u}) {
      for (int n = 1; n <= 5; ++n) CHECK(monic_irreducibles(q, n).size() == irreducible_count(q, n));
    }
  }

  TEST_CASE("poly index round trip") {
    for (std::uint64_t i = 0; i < 500; ++i) CHECK(poly_index(poly_from_index(i, 3), 3) == i);
  }

  TEST_CASE("square roots modulo an irreducible") {
    PrimeField k(3);
    for (int n = 1; n <= 3; ++n) {
      for (const auto& u : monic_irreducibles(3, n)) {
        for (std::uint64_t i = 1; i < 27 && deg(poly_from_index(i, 3)) < n; ++i) {
          const Poly a = poly_from_index(i, 3);
          const bool has = is_square_mod_irreducible(k, a, u);
          // brute force over all residues
          bool brute = false;
          for (std::uint64_t j = 0; j < 27 && deg(poly_from_index(j, 3)) < n; ++j) {
            brute = brute || mulmod(k, poly_from_index(j, 3), poly_from_index(j, 3), u) == a;
          }
          CHECK(has == brute);
          if (has) {
            const Poly r = sqrt_mod_irreducible(k, a, u);
            CHECK(mulmod(k, r, r, u) == a);
          } else {
            CHECK_THROWS_AS(sqrt_mod_irreducible(k, a, u), Error);
          }
        }
      }
    }
  }

  TEST_CASE("extension field arithmetic") {
    for (auto [q, n] : std::vector<std::pair<std::uint32_t, int>>{{3, 2}, {3, 3}, {5, 2}}) {
      const auto f = ExtensionField::get(q, n);
      CHECK(f->size() == static_cast<std::uint64_t>(std::pow(q, n)));
      CHECK(is_irreducible(PrimeField(q), f->modulus()));
      std::mt19937_64 g(q * 10 + n);
      for (int t = 0; t < 300; ++t) {
        const auto a = static_cast<std::uint32_t>(g() % f->size());
        const auto b = static_cast<std::uint32_t>(g() % f->size());
        const auto c = static_cast<std::uint32_t>(g() % f->size());
        CHECK(f->mul(a, f->mul(b, c)) == f->mul(f->mul(a, b), c));
        CHECK(f->mul(a, b) == f->mul(b, a));
        CHECK(f->chi(f->mul(a, b)) == f->chi(a) * f->chi(b));
        CHECK(f->chi(f->mul(a, a)) == (a == 0 ? 0 : 1));
      }
      int squares = 0;
      for (std::uint32_t a = 1; a < f->size(); ++a) squares += f->chi(a) == 1;
      CHECK(squares == static_cast<int>((f->size() - 1) / 2));
    }
  }
}
