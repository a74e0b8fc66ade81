#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "cllab/abelian_groups.hpp"

namespace cllab {

/// Seedable generator. Stream k of seed s is an independent mt19937_64 seeded
/// from the seed sequence {s_lo, s_hi, k_lo, k_hi}; parallel runs assign one
/// stream per fixed-size chunk of draws so results do not depend on workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t uniform(std::uint64_t bound);  // uniform in [0, bound)
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// p-part of the cokernel of a uniform n x (n+u) matrix over Z/p^e.
GroupType sample_mu_u(std::int64_t p, int u, int n, int e, Rng& rng);

/// G from sample_mu_u(p, 0, ...), then G / <g_1, ..., g_u> for u uniform elements.
GroupType sample_mu_u_process(std::int64_t p, int u, int n, int e, Rng& rng);

/// (B, b) with B from sample_mu_u(p, 0, ...) and b uniform in B, canonicalized.
PointedClass sample_pointed(std::int64_t p, int n, int e, Rng& rng);

/// Uniform element of A.
std::vector<std::int64_t> uniform_element(const GroupType& a, Rng& rng);

enum class SamplerKind { Cokernel, Process, Pointed };

struct SampleConfig {
  std::int64_t p = 3;
  int u = 0;
  int n = 10;
  int e = 6;
  std::uint64_t draws = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  SamplerKind kind = SamplerKind::Cokernel;
};

inline constexpr std::uint64_t kSampleChunk = 4096;

/// Histograms keyed by group type (Cokernel/Process) or pointed class (Pointed).
/// Chunk c of kSampleChunk draws always uses Rng(seed, c).
std::map<GroupType, std::uint64_t> sample_histogram(const SampleConfig& cfg);
std::map<PointedClass, std::uint64_t> sample_pointed_histogram(const SampleConfig& cfg);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double critical = 0.0;  // upper quantile at the requested level
  double p_value = 1.0;
  bool pass = false;
};

inline constexpr double kMinExpected = 5.0;

/// Pearson chi-square of observed counts against probabilities (the last
/// category is usually a tail bucket); probabilities must sum to 1. Cells
/// whose expected count is below kMinExpected are pooled.
ChiSquareResult chi_square(const std::vector<std::uint64_t>& observed,
                           const std::vector<double>& probabilities, double level = 0.01);

/// Two-sample chi-square homogeneity test on aligned category counts.
ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b, double level = 0.01);

}  // namespace cllab
