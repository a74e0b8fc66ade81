#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cllab/abelian_groups.hpp"
#include "cllab/averages.hpp"
#include "cllab/bigint.hpp"
#include "cllab/curve.hpp"

namespace cllab {

/// One cached curve: everything the scans need, without the element table.
struct CurveRecord {
  static constexpr int kSchemaVersion = 1;

  std::uint32_t q = 3;
  Model model = Model::Split;
  Poly f;
  int genus = 0;
  std::vector<std::int64_t> counts;  // #C(F_{q^i}), i = 1..g
  std::vector<std::int64_t> L;
  std::vector<std::int64_t> pic0;    // invariant factors
  std::optional<std::vector<std::int64_t>> delta;
  std::int64_t R = 0;
  std::optional<std::vector<std::int64_t>> cl0;
  std::int64_t points_q = 0;

  std::int64_t pic0_order() const;
};

nlohmann::json to_json(const CurveRecord& r);
/// Throws cllab::Error on an unknown schema_version or malformed record.
CurveRecord record_from_json(const nlohmann::json& j);

/// Builds Pic^0 and checks |Pic^0| = L(1) (and |Pic^0| = R |Cl| when split).
CurveRecord compute_record(const Curve& c, std::int64_t max_order = 10000);

/// Append-only JSON-lines cache, one file per (q, model, deg f).
class CurveCache {
 public:
  explicit CurveCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path file_for(std::uint32_t q, Model model, int deg_f) const;
  /// Records keyed by the coefficient index of f. Throws with the line number on corruption.
  std::map<std::uint64_t, CurveRecord> load(std::uint32_t q, Model model, int deg_f) const;
  void append(const std::vector<CurveRecord>& records) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

/// Target of a scan: a group A, optionally with a marked element a.
struct ScanTarget {
  GroupType group;
  std::optional<std::vector<std::int64_t>> marked;
  std::string to_string() const;
};

/// "Z/3", "Z/9xZ/3", "Z/3:1", "Z/3xZ/3:1,0".
ScanTarget parse_target(const std::string& text, std::int64_t default_p = 3);

struct FfScanOptions {
  unsigned workers = 1;
  std::optional<std::filesystem::path> cache_dir;
  bool allow_non_coprime = false;
  int torsion_k = 1;               // joint histogram uses #Pic0[p^k]
  std::int64_t max_order = 10000;  // per-curve |Pic^0| budget
  std::size_t batch = 256;         // curves per cache flush
};

struct DegreeScan {
  int deg_f = 0;
  int genus = 0;
  std::uint64_t curves = 0;
  std::uint64_t from_cache = 0;
  std::vector<AverageRow> rows;
  std::map<std::string, bool> checks;
  /// (#C(F_q), #Pic0[p^k](F_q)) -> number of curves.
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> joint;
  std::int64_t joint_p = 0;
};

struct FfScanReport {
  std::uint32_t q = 3;
  Model model = Model::Split;
  std::vector<ScanTarget> targets;
  std::vector<std::string> warnings;
  std::vector<DegreeScan> degrees;
  bool all_checks_pass() const;
};

/// Records for every curve of the family, computed or read from the cache, in
/// enumeration order. Deterministic for any worker count.
std::vector<CurveRecord> family_records(std::uint32_t q, int deg_f, Model model, const FfScanOptions& opts,
                                        std::uint64_t* from_cache = nullptr);

/// Averages of sur(Pic0, A), sur(Cl, A) and the pointed counts (Pic0, delta) -> (A, a)
/// over every curve with deg f in deg_values.
FfScanReport ff_scan(std::uint32_t q, const std::vector<int>& deg_values, Model model,
                     const std::vector<ScanTarget>& targets, const FfScanOptions& opts);

/// Integrity check of a cache directory: schema, L-polynomial identities and
/// group orders for every record. Returns human-readable problems (empty = ok).
std::vector<std::string> verify_cache(const std::filesystem::path& dir, std::uint64_t* records_checked = nullptr);

}  // namespace cllab
