#include <doctest.h>

#include <random>

#include "cllab/error.hpp"
#include "cllab/quadratic_forms.hpp"

using namespace cllab;

namespace {

bool squarefree(std::int64_t n) {
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

bool fundamental_oracle(std::int64_t d) {
  const std::int64_t m = ((d % 4) + 4) % 4;
  if (m == 1) return d != 1 && squarefree(std::abs(d));
  if (m != 0) return false;
  const std::int64_t e = d / 4;
  const std::int64_t r = ((e % 4) + 4) % 4;
  return (r == 2 || r == 3) && squarefree(std::abs(e));
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1;
  b = ((b % m) + m) % m;
  for (; e; e >>= 1, b = b * b % m) if (e & 1) r = r * b % m;
  return r;
}

// Kronecker symbol through prime factorization and Euler's criterion.
int kronecker_oracle(std::int64_t d, std::int64_t n) {
  int s = 1;
  for (std::int64_t p = 2; n > 1; ++p) {
    if (p * p > n) p = n;
    while (n % p == 0) {
      n /= p;
      int c;
      if (p == 2) {
        const std::int64_t r = ((d % 8) + 8) % 8;
        c = (r % 2 == 0) ? 0 : (r == 1 || r == 7 ? 1 : -1);
      } else {
        const std::int64_t e = powmod(d, (p - 1) / 2, p);
        c = e == 0 ? 0 : (e == 1 ? 1 : -1);
      }
      s *= c;
    }
  }
  return s;
}

// Dirichlet's class number formula for fundamental d < -4.
std::int64_t class_number_oracle(std::int64_t d) {
  std::int64_t s = 0;
  for (std::int64_t n = 1; n < -d; ++n) s += kronecker_oracle(d, n) * n;
  return -s / -d;
}

std::int64_t odd_part(std::int64_t n) {
  while (n % 2 == 0) n /= 2;
  return n;
}

}  // namespace

TEST_SUITE("quadratic_forms") {
  TEST_CASE("fundamental discriminants and the Kronecker symbol") {
    for (std::int64_t d = -3000; d <= 3000; ++d) {
      if (d == 0) continue;
      CHECK(is_fundamental_discriminant(d) == fundamental_oracle(d));
    }
    for (std::int64_t d = -200; d <= 200; ++d)
      for (std::int64_t n = 1; n < 120; ++n) CHECK(kronecker(d, n) == kronecker_oracle(d, n));
  }

  TEST_CASE("imaginary class numbers") {
    CHECK(ClassGroup(-3).order() == 1);
    CHECK(ClassGroup(-4).order() == 1);
    CHECK(ClassGroup(-23).order() == 3);
    CHECK(ClassGroup(-47).order() == 5);
    CHECK(ClassGroup(-163).order() == 1);
    CHECK(ClassGroup(-3299).invariants() == std::vector<std::int64_t>{3, 9});
    CHECK(ClassGroup(-4027).invariants() == std::vector<std::int64_t>{3, 3});
    for (std::int64_t d = -5; d > -3000; --d) {
      if (!fundamental_oracle(d)) continue;
      const ClassGroup cl(d);
      INFO("D = " << d);
      CHECK(cl.order() == class_number_oracle(d));
      CHECK(cl.order() == count_form_classes(d));
    }
  }

  TEST_CASE("real discriminants: odd part of the narrow class number") {
    for (std::int64_t d = 5; d < 2000; ++d) {
      if (!fundamental_oracle(d)) continue;
      const ClassGroup cl(d);
      INFO("D = " << d);
      CHECK(count_form_classes(d) % cl.form_group_order() == 0);
      CHECK(cl.order() == odd_part(count_form_classes(d)));
      for (auto x : cl.invariants()) CHECK(x % 2 == 1);
    }
    CHECK(ClassGroup(229).order() == 3);
    CHECK(ClassGroup(1957).order() == 3);
  }

  TEST_CASE("reduction and cycles") {
    for (const auto& f : reduced_forms(-599)) CHECK(reduce(f) == f);
    for (const auto& f : reduced_forms(1001 * 4 + 1)) {
      const auto cyc = cycle(f);
      for (const auto& g : cyc) {
        CHECK(g.discriminant() == f.discriminant());
        CHECK(canonical(g) == canonical(f));
      }
    }
    // an unreduced form and an SL2(Z) image of it land in the same class
    const Form f{3, 5, 7};
    const Form g{f.a, f.b + 2 * f.a, f.a + f.b + f.c};  // x -> x + y
    CHECK(canonical(f) == canonical(g));
    const Form h{f.c, -f.b, f.a};  // (x, y) -> (-y, x)
    CHECK(canonical(f) == canonical(h));
  }

  TEST_CASE("composition is a group law on classes") {
    std::mt19937_64 g(5);
    for (std::int64_t d : {-3299LL, -4027LL, -9799LL, 1957LL, 4 * 79LL, 3 * 4 * 1001LL + 1}) {
      if (!is_fundamental_discriminant(d)) continue;
      INFO("D = " << d);
      const ClassGroup cl(d);
      const auto& el = cl.elements();
      const Form e = canonical(principal_form(d));
      for (int t = 0; t < 60; ++t) {
        const Form a = el[g() % el.size()], b = el[g() % el.size()], c = el[g() % el.size()];
        CHECK(compose(a, b).discriminant() == d);
        CHECK(multiply(a, e) == canonical(a));
        CHECK(multiply(a, inverse(a)) == e);
        CHECK(multiply(a, b) == multiply(b, a));
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
        CHECK(power(a, static_cast<std::uint64_t>(cl.form_group_order())) == e);
        // coordinates are a homomorphism
        const auto ca = cl.coordinates(a), cb = cl.coordinates(b), cab = cl.coordinates(multiply(a, b));
        for (std::size_t i = 0; i < ca.size(); ++i) CHECK(cab[i] == (ca[i] + cb[i]) % cl.invariants()[i]);
      }
    }
  }

  TEST_CASE("prime forms and split-prime classes") {
    CHECK(prime_form(-23, 2) == Form{2, 1, 3});
    CHECK_FALSE(prime_form(-23, 5));
    CHECK(split_prime_delta_form(-23, 2) == canonical(Form{2, -1, 3}));
    const ClassGroup c23(-23);
    const auto p1 = c23.coordinates(*prime_form(-23, 2));
    const auto dl = split_prime_delta(c23, 2);
    CHECK(dl[0] == (2 * p1[0]) % 3);
    CHECK(dl[0] != 0);
    CHECK(split_prime_delta_form(-4, 5) == canonical(principal_form(-4)));
    CHECK_THROWS_AS(split_prime_delta_form(-23, 5), Error);
    for (std::int64_t d : {-3299LL, -9799LL, 229LL, 1957LL}) {
      for (std::int64_t p : {2LL, 3LL, 5LL, 7LL, 11LL, 13LL}) {
        if (kronecker(d, p) != 1) continue;
        const Form p1f = *prime_form(d, p);
        CHECK(p1f.a == p);
        CHECK(p1f.discriminant() == d);
        const Form p2f = Form{p1f.a, -p1f.b, p1f.c};
        const Form w = multiply(power(p1f, 2), power(p2f, 2));
        CHECK(w == canonical(principal_form(d)));
        CHECK(split_prime_delta_form(d, p) == power(p1f, 2));
      }
    }
  }
}
