#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cllab/report.hpp"

namespace cllab::harness {

struct MomentsConfig {
  std::int64_t p = 3;
  int u = 0;
  std::optional<std::string> target;   // "Z/3", "Z/9xZ/3", "trivial"
  std::optional<std::string> pointed;  // "Z/3:1"
  int n = 7;
  double product_tol = 1e-12;
  std::optional<double> gap_tol;  // adds a "final gap" check when set
};

struct SampleCommandConfig {
  std::int64_t p = 3;
  int u = 0;
  int n = 10;
  int e = 6;
  std::uint64_t draws = 100000;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string kind = "cokernel";  // cokernel, process, pointed
  int max_log_order = 3;          // histogram cells; everything larger is the tail bucket
  double level = 0.01;
};

struct FfScanConfig {
  std::uint32_t q = 3;
  std::string model = "split";
  std::vector<int> degrees;                // explicit deg f values, or
  std::optional<std::pair<int, int>> m_range;  // deg f = 2m (split, inert) or 2m - 1 (ramified)
  std::vector<std::string> targets;
  unsigned workers = 1;
  std::optional<std::filesystem::path> cache_dir;
  bool allow_non_coprime = false;
  int torsion_k = 1;
  std::int64_t max_order = 10000;
};

struct NfScanConfig {
  std::int64_t x = 100000;
  std::string sign = "imaginary";
  std::vector<std::string> conditions;
  std::optional<std::int64_t> v1;  // pointed scan when set
  unsigned workers = 1;
  std::optional<std::filesystem::path> cache_dir;
  int trend_steps = 10;
  double density_tol = 0.02;
};

struct PredictConfig {
  std::int64_t p = 3;
  int k = 1;
  int n = 8;
  std::optional<std::filesystem::path> cache_dir;
};

struct CacheVerifyConfig {
  std::filesystem::path cache_dir = "clcache";
};

Report cmd_moments(const MomentsConfig& cfg);
Report cmd_sample(const SampleCommandConfig& cfg);
Report cmd_ffscan(const FfScanConfig& cfg);
Report cmd_nfscan(const NfScanConfig& cfg);
Report cmd_predict(const PredictConfig& cfg);
Report cmd_cache_verify(const CacheVerifyConfig& cfg);

/// Degree list of an ffscan config after resolving m_range.
std::vector<int> resolve_degrees(const FfScanConfig& cfg);

}  // namespace cllab::harness
