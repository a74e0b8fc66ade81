#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "cllab/error.hpp"
#include "cllab/nf_scan.hpp"
#include "cllab/quadratic_forms.hpp"

using namespace cllab;
namespace fs = std::filesystem;

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
  const std::int64_t r = (((d / 4) % 4) + 4) % 4;
  return (r == 2 || r == 3) && squarefree(std::abs(d / 4));
}

// Surjections onto Z/3 with delta -> g, counted over images of generators.
std::uint64_t pointed_z3(const std::vector<std::int64_t>& inv, const std::vector<std::int64_t>& delta, int g) {
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < inv.size(); ++i) if (inv[i] % 3 == 0) free.push_back(i);
  std::uint64_t total = 1, n = 0;
  for (std::size_t i = 0; i < free.size(); ++i) total *= 3;
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    std::int64_t image = 0;
    for (auto i : free) image += static_cast<std::int64_t>(c % 3) * delta[i], c /= 3;
    n += image % 3 == g;
  }
  return n;
}

}  // namespace

TEST_SUITE("nf_scan") {
  TEST_CASE("discriminant enumeration") {
    const std::vector<std::int64_t> small{-3,  -4,  5,   -7,  -8,  8,   -11, 12,  13,  -15, 17,  -19, -20, 21, -23,
                                          -24, 24,  28,  29,  -31, 33,  -35, 37,  -39, -40, 40,  41,  -43, 44, -47};
    CHECK(enumerate_discriminants(50, Sign::Both, {}) == small);
    for (Sign s : {Sign::Imaginary, Sign::Real}) {
      std::vector<std::int64_t> brute;
      for (std::int64_t a = 1; a < 3000; ++a) {
        const std::int64_t d = s == Sign::Imaginary ? -a : a;
        if (fundamental_oracle(d)) brute.push_back(d);
      }
      CHECK(enumerate_discriminants(3000, s, {}) == brute);
    }
    for (auto d : enumerate_discriminants(5000, Sign::Both, {parse_condition("7:split")})) CHECK(kronecker(d, 7) == 1);
    for (auto d : enumerate_discriminants(5000, Sign::Both, {parse_condition("2:split")}))
      CHECK(((d % 8) + 8) % 8 == 1);
    for (auto d : enumerate_discriminants(5000, Sign::Both, {parse_condition("5:inert")})) CHECK(kronecker(d, 5) == -1);
    for (auto d : enumerate_discriminants(5000, Sign::Imaginary, {parse_condition("3:ramified:1")})) {
      CHECK(d % 3 == 0);
      CHECK(ramified_class(d, 3) == 1);
    }
    CHECK_THROWS_AS(parse_condition("4:split"), Error);
    CHECK_THROWS_AS(parse_condition("7:weird"), Error);
    CHECK_THROWS_AS(parse_condition("7:split:1"), Error);
  }

  TEST_CASE("local masses") {
    CHECK(c2_constant(2) == BigRational(3, 2));
    CHECK(c2_constant(7) == BigRational(8, 7));
    CHECK(c3_constant(3) == BigRational(13, 9));
    CHECK(c3_constant(5) == BigRational(31, 25));
    CHECK(c2_infinity() == 1);
    CHECK(c3_infinity() == BigRational(2, 3));
    CHECK(archimedean_mass(Sign::Imaginary) == BigRational(1, 2));
    CHECK(archimedean_mass(Sign::Both) == 1);
    for (std::int64_t v : {2, 3, 5, 7, 11}) {
      const auto split = local_mass_quadratic({v, LocalAlgebra::Split, {}});
      const auto inert = local_mass_quadratic({v, LocalAlgebra::UnramifiedField, {}});
      const auto ram = local_mass_quadratic({v, LocalAlgebra::Ramified, {}});
      CHECK(split == BigRational(1, 2));
      CHECK(inert == BigRational(1, 2));
      CHECK(split + inert + ram == c2_constant(v));
      BigRational tagged = 0;
      for (int k = 0; k < (v == 2 ? 6 : 2); ++k) tagged += local_mass_quadratic({v, LocalAlgebra::Ramified, k});
      CHECK(tagged == ram);
    }
    CHECK(std::abs(c3_ratio_product(10000) - 1.0) < 1e-3);
  }

  TEST_CASE("densities of discriminants") {
    const std::vector<std::vector<std::string>> sets{{}, {"7:split"}, {"2:split", "3:inert"}, {"5:ramified:0"}};
    for (Sign s : {Sign::Both, Sign::Imaginary, Sign::Real}) {
      for (const auto& texts : sets) {
        std::vector<LocalCondition> conds;
        for (const auto& t : texts) conds.push_back(parse_condition(t));
        const auto rep = quadratic_density_check(100000, s, conds);
        INFO(to_string(s) << " " << texts.size());
        CHECK(rep.count == enumerate_discriminants(100000, s, conds).size());
        CHECK(rep.relative_error() < 0.01);
      }
    }
    CHECK(std::abs(quadratic_density_check(100000, Sign::Both, {}).predicted - 6 / (M_PI * M_PI)) < 1e-12);
  }

  TEST_CASE("pointed scan against per-discriminant counts") {
    NfScanOptions o;
    o.trend_steps = 4;
    const auto rep = pointed_3_moment_scan(20000, Sign::Imaginary, {}, 7, o);
    CHECK(rep.all_checks_pass());
    const auto ds = enumerate_discriminants(20000, Sign::Imaginary, {parse_condition("7:split")});
    CHECK(rep.discriminants == ds.size());
    REQUIRE(rep.rows.size() == 7);
    BigInt unpointed = 0;
    std::vector<BigInt> pointed(3, 0);
    for (auto d : ds) {
      // 3-torsion by brute force over the reduced forms
      const Form e = canonical(principal_form(d));
      std::int64_t t3 = 0;
      for (const auto& f : reduced_forms(d)) t3 += power(f, 3) == e;
      unpointed += t3 - 1;
      const auto r = compute_nf_record(d, 7);
      for (int g = 0; g < 3; ++g) pointed[g] += pointed_z3(r.cl_odd, r.delta.at(7), g);
    }
    CHECK(rep.rows[0].sum == unpointed);
    for (int g = 0; g < 3; ++g) {
      CHECK(rep.rows[1 + g].sum == pointed[g]);
      CHECK(rep.rows[4 + g].sum == pointed[g] + pointed[(3 - g) % 3]);
    }
    REQUIRE(rep.trend.size() == 4);
    CHECK(rep.trend.back().x == 20000);
    CHECK(rep.trend.back().count == ds.size());
    CHECK_THROWS_AS(pointed_3_moment_scan(1000, Sign::Both, {}, 7, o), Error);
  }

  TEST_CASE("real scan and cache resume") {
    const fs::path dir = fs::path(CLLAB_TEST_TMP) / "nfcache";
    fs::remove_all(dir);
    fs::create_directories(dir);
    NfScanOptions o;
    o.cache_dir = dir;
    o.batch = 100;
    const auto a = pointed_3_moment_scan(5000, Sign::Real, {}, 5, o);
    CHECK(a.all_checks_pass());
    CHECK(a.from_cache == 0);
    o.workers = 3;
    const auto b = pointed_3_moment_scan(5000, Sign::Real, {}, 5, o);
    CHECK(b.from_cache == b.discriminants);
    for (std::size_t i = 0; i < a.rows.size(); ++i) CHECK(a.rows[i].sum == b.rows[i].sum);
    std::uint64_t checked = 0;
    CHECK(verify_nf_cache(dir, &checked).empty());
    CHECK(checked > 0);
    const auto j = to_json(compute_nf_record(-3299, 5));
    CHECK(to_json(nf_record_from_json(j)) == j);
    auto bad = j;
    bad["schema_version"] = 7;
    CHECK_THROWS_AS(nf_record_from_json(bad), Error);
  }
}
