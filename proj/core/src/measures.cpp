#include "cllab/measures.hpp"

#include <cmath>

#include "cllab/error.hpp"

namespace cllab {

namespace {

double to_double(const BigRational& r) { return r.convert_to<double>(); }

BigRational inverse(const BigInt& x) { return BigRational(BigInt(1), x); }

void finish(MomentReport& rep, const BigRational& sum_rational, const MeasureValue& euler) {
  rep.partial_sum = rep.partials.back();
  rep.gap = to_double(rep.expected) - rep.partial_sum;
  rep.product_error = to_double(sum_rational) * euler.error_bound;
  rep.monotone_ok = true;
  for (std::size_t i = 1; i < rep.partials.size(); ++i) {
    if (rep.partials[i] < rep.partials[i - 1] * (1.0 - 1e-14)) rep.monotone_ok = false;
  }
}

void require_tol(double tol) {
  if (!(tol > 0.0)) throw Error("tolerance must be positive");
}

}  // namespace

MeasureValue euler_product(std::int64_t p, int u, double tol) {
  require_tol(tol);
  if (!is_odd_prime(p)) throw Error("euler_product: p must be an odd prime");
  if (u < 0) throw Error("euler_product: u must be >= 0");
  const double inv_p = 1.0 / static_cast<double>(p);
  double partial = 1.0;
  // After K factors the remaining log-mass is at most 2 p^{-K-u} / (1 - 1/p),
  // using -log(1 - x) <= 2x for x <= 1/2.
  for (int k = 0;; ++k) {
    const double tail = 2.0 * std::pow(inv_p, k + u) / (1.0 - inv_p);
    if (partial * tail <= tol) {
      MeasureValue out;
      out.rational_part = 1;
      out.euler_factor = partial;
      out.error_bound = partial * tail + 1e-15;
      out.value = partial;
      return out;
    }
    partial *= 1.0 - std::pow(inv_p, k + 1 + u);
  }
}

MeasureValue mu_u(const GroupType& a, int u, double tol) {
  MeasureValue e = euler_product(a.p, u, tol);
  BigInt denom = aut_order(a) * big_pow(a.order(), static_cast<unsigned>(u));
  MeasureValue out;
  out.rational_part = inverse(denom);
  out.euler_factor = e.euler_factor;
  const double r = to_double(out.rational_part);
  out.value = r * e.euler_factor;
  out.error_bound = r * e.error_bound;
  return out;
}

MeasureValue mu_pointed(const PointedClass& bb, double tol) {
  MeasureValue e = euler_product(bb.group.p, 0, tol);
  MeasureValue out;
  out.rational_part = inverse(BigInt(bb.group.order()) * pointed_aut_order(bb));
  out.euler_factor = e.euler_factor;
  const double r = to_double(out.rational_part);
  out.value = r * e.euler_factor;
  out.error_bound = r * e.error_bound;
  return out;
}

MomentReport moment_partial(const GroupType& a, int u, int n, double tol) {
  if (n < a.log_order()) throw Error("moment_partial: N must be >= log_p |A|");
  if (u < 0) throw Error("moment_partial: u must be >= 0");
  const MeasureValue euler = euler_product(a.p, u, tol);
  MomentReport rep;
  rep.target = a.to_string();
  rep.u = u;
  rep.truncation_log_order = n;
  rep.expected = inverse(big_pow(a.order(), static_cast<unsigned>(u)));
  BigRational sum = 0;
  int level = 0;
  for (const auto& b : enumerate_types(a.p, n)) {
    while (b.log_order() > level) {
      rep.partials.push_back(to_double(sum) * euler.euler_factor);
      ++level;
    }
    BigInt s = sur_count(b, a);
    if (s != 0) sum += BigRational(s, aut_order(b) * big_pow(b.order(), static_cast<unsigned>(u)));
  }
  rep.partials.push_back(to_double(sum) * euler.euler_factor);
  finish(rep, sum, euler);
  return rep;
}

MomentReport pointed_moment_partial(const PointedClass& aa, int n, double tol) {
  const GroupType& a = aa.group;
  if (n < a.log_order()) throw Error("pointed_moment_partial: N must be >= log_p |A|");
  const MeasureValue euler = euler_product(a.p, 0, tol);
  const std::uint64_t target = element_index(a, aa.marked);
  MomentReport rep;
  rep.target = aa.to_string();
  rep.truncation_log_order = n;
  rep.expected = inverse(BigInt(a.order()));
  BigRational sum = 0;
  int level = 0;
  for (const auto& b : enumerate_types(a.p, n)) {
    while (b.log_order() > level) {
      rep.partials.push_back(to_double(sum) * euler.euler_factor);
      ++level;
    }
    if (b.log_order() < a.log_order() || b.rank() < a.rank()) continue;
    const PointedSurTable table = pointed_sur_table(b, a);
    const BigInt weight = aut_order(b) * b.order();
    BigInt hits = 0;
    for (std::size_t c = 0; c < table.classes.size(); ++c) {
      hits += BigInt(table.counts[c][target]) * table.orbit_sizes[c];
    }
    // mu(B, b) = orbit(b) / (|B| |Aut B|) times the Euler factor
    if (hits != 0) sum += BigRational(hits, weight);
  }
  rep.partials.push_back(to_double(sum) * euler.euler_factor);
  finish(rep, sum, euler);
  return rep;
}

double determinacy_constant(std::int64_t p, int u) { return 1.0 / euler_product(p, u, 1e-13).value; }

MomentReport torsion_average(std::int64_t p, int k, int u, int n, double tol) {
  if (k < 0) throw Error("torsion_average: k must be >= 0");
  const MeasureValue euler = euler_product(p, u, tol);
  MomentReport rep;
  rep.target = "#B[" + std::to_string(p) + "^" + std::to_string(k) + "]";
  rep.u = u;
  rep.truncation_log_order = n;
  rep.expected = 0;
  for (int j = 0; j <= k; ++j) rep.expected += inverse(big_pow(p, static_cast<unsigned>(j * u)));
  BigRational sum = 0;
  int level = 0;
  for (const auto& b : enumerate_types(p, n)) {
    while (b.log_order() > level) {
      rep.partials.push_back(to_double(sum) * euler.euler_factor);
      ++level;
    }
    sum += BigRational(BigInt(torsion_count(b, k)), aut_order(b) * big_pow(b.order(), static_cast<unsigned>(u)));
  }
  rep.partials.push_back(to_double(sum) * euler.euler_factor);
  finish(rep, sum, euler);
  return rep;
}

MomentReport conditional_delta_trivial_prob(std::int64_t p, int n, double tol) {
  const MeasureValue euler = euler_product(p, 0, tol);
  MomentReport rep;
  rep.target = "Prob(b = 0)";
  rep.truncation_log_order = n;
  rep.expected = 1 - BigRational(1, p);
  BigRational sum = 0;
  int level = 0;
  for (const auto& b : enumerate_types(p, n)) {
    while (b.log_order() > level) {
      rep.partials.push_back(to_double(sum) * euler.euler_factor);
      ++level;
    }
    sum += inverse(aut_order(b) * b.order());
  }
  rep.partials.push_back(to_double(sum) * euler.euler_factor);
  finish(rep, sum, euler);
  return rep;
}

RatioReport conditional_p_torsion_given_nontrivial(std::int64_t p, int n, double tol) {
  const MeasureValue euler = euler_product(p, 0, tol);
  BigRational num = 0, den = 0;
  for (const auto& b : enumerate_types(p, n)) {
    const BigInt weight = aut_order(b) * b.order();
    const std::int64_t tors = torsion_count(b, 1);
    for (const auto& [cls, size] : pointed_classes(b)) {
      bool zero = true;
      for (auto c : cls.marked) zero = zero && c == 0;
      if (zero) continue;
      const BigRational m(BigInt(size), weight);
      num += m * tors;
      den += m;
    }
  }
  RatioReport rep;
  rep.target = "E[#B[" + std::to_string(p) + "] | b != 0]";
  rep.truncation_log_order = n;
  rep.numerator = to_double(num) * euler.euler_factor;
  rep.denominator = to_double(den) * euler.euler_factor;
  rep.value = den == 0 ? 0.0 : to_double(num / den);
  rep.expected = p + BigRational(1, p);
  rep.gap = to_double(rep.expected) - rep.value;
  return rep;
}

MeasureValue conditional_law_given_zero(const GroupType& b, double tol) {
  MeasureValue e = euler_product(b.p, 1, tol);
  MeasureValue out;
  out.rational_part = inverse(aut_order(b) * b.order());
  out.euler_factor = e.euler_factor;
  const double r = to_double(out.rational_part);
  out.value = r * e.euler_factor;
  out.error_bound = r * e.error_bound;
  return out;
}

}  // namespace cllab
