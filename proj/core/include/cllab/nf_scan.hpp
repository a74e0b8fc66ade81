#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cllab/averages.hpp"
#include "cllab/bigint.hpp"

namespace cllab {

enum class Sign { Imaginary, Real, Both };

std::string to_string(Sign s);
Sign parse_sign(const std::string& text);

enum class LocalAlgebra { Split, UnramifiedField, Ramified };

/// Prescribed completion of Q(sqrt D) at a finite prime v.
///
/// ram_class selects one ramified algebra: for odd v, 0 when D/v is a square
/// mod v and 1 otherwise; for v = 2, 0/1 for D = 4d with d = 3/7 mod 8 and 2..5
/// for D = 8d' with d' = 1/3/5/7 mod 8. Without it any ramified algebra matches.
struct LocalCondition {
  std::int64_t v = 2;
  LocalAlgebra algebra = LocalAlgebra::Split;
  std::optional<int> ram_class;

  bool matches(std::int64_t d) const;
  std::string to_string() const;
};

/// "7:split", "5:inert", "3:ramified", "2:ramified:3".
LocalCondition parse_condition(const std::string& text);

/// Ramified class of a fundamental D at v (v | D).
int ramified_class(std::int64_t d, std::int64_t v);

/// Fundamental D with 0 < |D| < x of the given sign satisfying every condition,
/// ordered by |D| (negative first on ties).
std::vector<std::int64_t> enumerate_discriminants(std::int64_t x, Sign sign,
                                                  const std::vector<LocalCondition>& conditions);

/// c(M) = |Aut(M/Q_v)|^{-1} |Disc(M/Q_v)|_v for the algebra of the condition
/// (summed over ramified classes when none is selected).
BigRational local_mass_quadratic(const LocalCondition& c);
/// Sum of the local masses of all quadratic etale algebras over Q_v.
BigRational c2_constant(std::int64_t v);
BigRational c3_constant(std::int64_t v);
/// Archimedean masses: c2(inf) = 1, c3(inf) = 2/3; one sign contributes 1/2.
BigRational c2_infinity();
BigRational c3_infinity();
BigRational archimedean_mass(Sign s);

/// (zeta(2)/zeta(3)) prod_{v < bound} (1 + 1/v) / (1 + 1/v + 1/v^2); tends to 1.
double c3_ratio_product(std::int64_t prime_bound);

struct DensityReport {
  std::int64_t x = 0;
  Sign sign = Sign::Both;
  std::vector<LocalCondition> conditions;
  std::uint64_t count = 0;
  double observed = 0.0;   // count / x
  double predicted = 0.0;  // (1/zeta(2)) c_inf prod c(F_i)/c2(v_i)
  double relative_error() const;
};

DensityReport quadratic_density_check(std::int64_t x, Sign sign, const std::vector<LocalCondition>& conditions);

/// Per-discriminant summary persisted by the scans.
struct NfRecord {
  static constexpr int kSchemaVersion = 1;
  std::int64_t d = 0;
  std::vector<std::int64_t> cl_odd;  // invariant factors of the odd part
  std::map<std::int64_t, std::vector<std::int64_t>> delta;  // split prime -> coords in cl_odd
};

nlohmann::json to_json(const NfRecord& r);
NfRecord nf_record_from_json(const nlohmann::json& j);

/// Odd part of the class group of D and of the split-prime class for p.
NfRecord compute_nf_record(std::int64_t d, std::int64_t p);

struct NfScanOptions {
  unsigned workers = 1;
  std::optional<std::filesystem::path> cache_dir;
  int trend_steps = 10;
  std::size_t batch = 4096;
};

struct NfTrendRow {
  std::int64_t x = 0;
  std::uint64_t count = 0;
  double unpointed = 0.0;
  std::vector<double> pointed;      // g = 0, 1, 2
  std::vector<double> symmetrized;  // g = 0, 1, 2
};

struct NfScanReport {
  std::int64_t x = 0;
  Sign sign = Sign::Imaginary;
  std::vector<LocalCondition> conditions;
  std::int64_t v1 = 0;
  std::uint64_t discriminants = 0;
  std::uint64_t from_cache = 0;
  std::vector<AverageRow> rows;  // sur(Cl, Z/3), pointed g = 0..2, symmetrized g = 0..2
  std::vector<NfTrendRow> trend;
  std::map<std::string, bool> checks;
  std::string note;
  bool all_checks_pass() const;
};

/// Averages of the pointed counts (Cl_3, w1 - w2) -> (Z/3, g). For D > 0 the odd
/// part of the narrow class group is used. A Split condition at v1 is added if
/// absent.
NfScanReport pointed_3_moment_scan(std::int64_t x, Sign sign, std::vector<LocalCondition> conditions,
                                   std::int64_t v1, const NfScanOptions& opts);

/// Checks every nf-*.jsonl file under dir; returns problems found.
std::vector<std::string> verify_nf_cache(const std::filesystem::path& dir, std::uint64_t* records_checked);

}  // namespace cllab
