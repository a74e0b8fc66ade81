#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cllab/abelian_groups.hpp"
#include "cllab/bigint.hpp"

namespace cllab {

/// rational_part * (truncated Euler product), with a rigorous bound on the
/// distance to the untruncated value.
struct MeasureValue {
  BigRational rational_part;
  double euler_factor = 1.0;
  double error_bound = 0.0;
  double value = 0.0;
};

/// Truncated sum of non-negative terms converging to a known limit.
struct MomentReport {
  std::string target;
  int u = 0;
  double partial_sum = 0.0;
  int truncation_log_order = 0;
  BigRational expected;
  double gap = 0.0;  // expected - partial_sum
  bool monotone_ok = true;
  double product_error = 0.0;
  std::vector<double> partials;  // partials[n] = sum over |B| <= p^n
};

/// Conditional average num/den of two truncated sums.
struct RatioReport {
  std::string target;
  int truncation_log_order = 0;
  double numerator = 0.0;
  double denominator = 0.0;
  double value = 0.0;
  BigRational expected;
  double gap = 0.0;
};

/// prod_{k>=1} (1 - p^{-k-u}) truncated once the tail bound is <= tol.
MeasureValue euler_product(std::int64_t p, int u, double tol);

/// mu^u(A) = prod_{k>=1}(1 - p^{-k-u}) / (|A|^u |Aut A|).
MeasureValue mu_u(const GroupType& a, int u, double tol);

/// mu(B, b) = prod_{k>=1}(1 - p^{-k}) / (|B| |Aut(B, b)|).
MeasureValue mu_pointed(const PointedClass& bb, double tol);

/// sum_{|B| <= p^N} |Sur(B, A)| mu^u(B); converges to |A|^{-u}.
MomentReport moment_partial(const GroupType& a, int u, int n, double tol);

/// sum over pointed (B, b) with |B| <= p^N of |Sur((B,b),(A,a))| mu(B,b); converges to 1/|A|.
MomentReport pointed_moment_partial(const PointedClass& aa, int n, double tol);

/// prod_{k>=1} (1 - p^{-k-u})^{-1}.
double determinacy_constant(std::int64_t p, int u);

/// sum_B #B[p^k] mu^u(B); converges to sum_{j<=k} p^{-ju} (k+1 when u = 0).
MomentReport torsion_average(std::int64_t p, int k, int u, int n, double tol);

/// sum_B mu^0(B) / |B|: probability that a uniform element is 0. Converges to 1 - 1/p.
MomentReport conditional_delta_trivial_prob(std::int64_t p, int n, double tol);

/// Average of #B[p] over pointed (B, b) with b != 0. Converges to p + 1/p.
RatioReport conditional_p_torsion_given_nontrivial(std::int64_t p, int n, double tol);

/// Law of B given b = 0 under the pointed measure:
/// prod_{k>=2}(1 - p^{-k}) / (|B| |Aut B|), which coincides with mu^1(B).
MeasureValue conditional_law_given_zero(const GroupType& b, double tol);

}  // namespace cllab
