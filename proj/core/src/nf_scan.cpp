#include "cllab/nf_scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <thread>

#include "cllab/abelian_groups.hpp"
#include "cllab/error.hpp"
#include "cllab/quadratic_forms.hpp"

namespace cllab {

namespace {

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

constexpr double kInvZeta2 = 6.0 / (std::numbers::pi * std::numbers::pi);
constexpr double kZeta3 = 1.2020569031595942854;

}  // namespace

std::string to_string(Sign s) {
  switch (s) {
    case Sign::Imaginary: return "imaginary";
    case Sign::Real: return "real";
    case Sign::Both: return "both";
  }
  return "?";
}

Sign parse_sign(const std::string& text) {
  if (text == "imaginary" || text == "neg" || text == "-") return Sign::Imaginary;
  if (text == "real" || text == "pos" || text == "+") return Sign::Real;
  if (text == "both") return Sign::Both;
  throw Error("unknown sign '" + text + "' (imaginary, real, both)");
}

int ramified_class(std::int64_t d, std::int64_t v) {
  if (floor_mod(d, v) != 0) throw Error(std::to_string(v) + " is not ramified in Q(sqrt " + std::to_string(d) + ")");
  if (v != 2) return kronecker(d / v, v) == 1 ? 0 : 1;
  const std::int64_t e = d / 4;
  if (floor_mod(e, 2) == 1) return floor_mod(e, 8) == 3 ? 0 : 1;
  return 2 + static_cast<int>(floor_mod(e / 2, 8) / 2);
}

bool LocalCondition::matches(std::int64_t d) const {
  const int k = kronecker(d, v);
  switch (algebra) {
    case LocalAlgebra::Split: return k == 1;
    case LocalAlgebra::UnramifiedField: return k == -1;
    case LocalAlgebra::Ramified: return k == 0 && (!ram_class || ramified_class(d, v) == *ram_class);
  }
  return false;
}

std::string LocalCondition::to_string() const {
  std::string s = std::to_string(v) + ":";
  switch (algebra) {
    case LocalAlgebra::Split: return s + "split";
    case LocalAlgebra::UnramifiedField: return s + "inert";
    case LocalAlgebra::Ramified: return s + "ramified" + (ram_class ? ":" + std::to_string(*ram_class) : "");
  }
  return s;
}

LocalCondition parse_condition(const std::string& text) {
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) throw Error("condition '" + text + "': expected v:algebra");
  LocalCondition c;
  c.v = std::stoll(text.substr(0, c1));
  if (!is_prime(c.v)) throw Error("condition '" + text + "': v must be prime");
  std::string rest = text.substr(c1 + 1);
  const auto c2 = rest.find(':');
  const std::string alg = rest.substr(0, c2);
  if (alg == "split") {
    c.algebra = LocalAlgebra::Split;
  } else if (alg == "inert" || alg == "unramified") {
    c.algebra = LocalAlgebra::UnramifiedField;
  } else if (alg == "ramified" || alg == "ram") {
    c.algebra = LocalAlgebra::Ramified;
  } else {
    throw Error("condition '" + text + "': unknown algebra '" + alg + "'");
  }
  if (c2 != std::string::npos) {
    if (c.algebra != LocalAlgebra::Ramified) throw Error("condition '" + text + "': class tag needs ramified");
    c.ram_class = std::stoi(rest.substr(c2 + 1));
    const int classes = c.v == 2 ? 6 : 2;
    if (*c.ram_class < 0 || *c.ram_class >= classes) throw Error("condition '" + text + "': bad ramified class");
  }
  return c;
}

std::vector<std::int64_t> enumerate_discriminants(std::int64_t x, Sign sign,
                                                  const std::vector<LocalCondition>& conditions) {
  if (x <= 0) throw Error("enumerate_discriminants: X must be positive");
  std::vector<char> squarefree(static_cast<std::size_t>(x), 1);
  for (std::int64_t p = 2; p * p < x; ++p) {
    for (std::int64_t m = p * p; m < x; m += p * p) squarefree[m] = 0;
  }
  auto fundamental = [&](std::int64_t d) {
    const std::int64_t n = std::abs(d);
    if (floor_mod(d, 4) == 1) return n > 1 && squarefree[n] != 0;
    if (floor_mod(d, 4) != 0) return false;
    const std::int64_t e = floor_mod(d / 4, 4);
    return (e == 2 || e == 3) && squarefree[n / 4] != 0;
  };
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1; n < x; ++n) {
    for (std::int64_t d : {-n, n}) {
      if (d < 0 && sign == Sign::Real) continue;
      if (d > 0 && sign == Sign::Imaginary) continue;
      if (!fundamental(d)) continue;
      if (std::all_of(conditions.begin(), conditions.end(), [&](const auto& c) { return c.matches(d); })) {
        out.push_back(d);
      }
    }
  }
  return out;
}

BigRational local_mass_quadratic(const LocalCondition& c) {
  const BigInt v = c.v;
  switch (c.algebra) {
    case LocalAlgebra::Split:
    case LocalAlgebra::UnramifiedField:
      return BigRational(1, 2);
    case LocalAlgebra::Ramified:
      if (c.v != 2) return c.ram_class ? BigRational(BigInt(1), 2 * v) : BigRational(BigInt(1), v);
      if (!c.ram_class) return BigRational(1, 2);
      return *c.ram_class < 2 ? BigRational(1, 8) : BigRational(1, 16);
  }
  return 0;
}

BigRational c2_constant(std::int64_t v) {
  BigRational sum = local_mass_quadratic({v, LocalAlgebra::Split, std::nullopt}) +
                    local_mass_quadratic({v, LocalAlgebra::UnramifiedField, std::nullopt});
  const int classes = v == 2 ? 6 : 2;
  for (int k = 0; k < classes; ++k) sum += local_mass_quadratic({v, LocalAlgebra::Ramified, k});
  return sum;
}

BigRational c3_constant(std::int64_t v) {
  const BigInt w = v;
  return BigRational(1) + BigRational(BigInt(1), w) + BigRational(BigInt(1), w * w);
}

BigRational c2_infinity() { return archimedean_mass(Sign::Real) + archimedean_mass(Sign::Imaginary); }

// R^3 (Aut order 6) and R + C (Aut order 2)
BigRational c3_infinity() { return BigRational(1, 6) + BigRational(1, 2); }

BigRational archimedean_mass(Sign s) { return s == Sign::Both ? BigRational(1) : BigRational(1, 2); }

double c3_ratio_product(std::int64_t prime_bound) {
  double prod = (std::numbers::pi * std::numbers::pi / 6.0) / kZeta3;
  for (std::int64_t v = 2; v < prime_bound; ++v) {
    if (!is_prime(v)) continue;
    const double x = 1.0 / static_cast<double>(v);
    prod *= (1.0 + x) / (1.0 + x + x * x);
  }
  return prod;
}

double DensityReport::relative_error() const { return predicted == 0.0 ? 0.0 : std::abs(observed - predicted) / predicted; }

DensityReport quadratic_density_check(std::int64_t x, Sign sign, const std::vector<LocalCondition>& conditions) {
  DensityReport r;
  r.x = x;
  r.sign = sign;
  r.conditions = conditions;
  r.count = enumerate_discriminants(x, sign, conditions).size();
  r.observed = static_cast<double>(r.count) / static_cast<double>(x);
  BigRational factor = archimedean_mass(sign);
  for (const auto& c : conditions) factor *= local_mass_quadratic(c) / c2_constant(c.v);
  r.predicted = kInvZeta2 * factor.convert_to<double>();
  return r;
}

// ------------------------------------------------------------------ records

nlohmann::json to_json(const NfRecord& r) {
  nlohmann::json j;
  j["schema_version"] = NfRecord::kSchemaVersion;
  j["D"] = r.d;
  j["cl_odd"] = r.cl_odd;
  nlohmann::json delta = nlohmann::json::object();
  for (const auto& [p, coords] : r.delta) delta[std::to_string(p)] = coords;
  j["delta"] = delta;
  return j;
}

NfRecord nf_record_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("schema_version")) throw Error("nf record without schema_version");
  const int version = j.at("schema_version").get<int>();
  if (version != NfRecord::kSchemaVersion) throw Error("unsupported nf record schema_version " + std::to_string(version));
  try {
    NfRecord r;
    r.d = j.at("D").get<std::int64_t>();
    r.cl_odd = j.at("cl_odd").get<std::vector<std::int64_t>>();
    for (const auto& [key, coords] : j.at("delta").items()) {
      r.delta[std::stoll(key)] = coords.get<std::vector<std::int64_t>>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed nf record: ") + e.what());
  }
}

NfRecord compute_nf_record(std::int64_t d, std::int64_t p) {
  const ClassGroup cl(d);
  const auto coords = split_prime_delta(cl, p);
  NfRecord r;
  r.d = d;
  std::vector<std::int64_t> delta;
  for (std::size_t i = 0; i < cl.invariants().size(); ++i) {
    std::int64_t n = cl.invariants()[i];
    while (n % 2 == 0) n /= 2;
    if (n == 1) continue;
    r.cl_odd.push_back(n);
    delta.push_back(coords[i] % n);
  }
  r.delta[p] = delta;
  return r;
}

// --------------------------------------------------------------------- scan

bool NfScanReport::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

namespace {

std::filesystem::path nf_cache_file(const std::filesystem::path& dir) { return dir / "nf-summary.jsonl"; }

std::map<std::int64_t, NfRecord> load_nf_cache(const std::filesystem::path& dir) {
  std::map<std::int64_t, NfRecord> out;
  const auto path = nf_cache_file(dir);
  std::ifstream in(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      NfRecord r = nf_record_from_json(nlohmann::json::parse(line));
      auto [it, fresh] = out.try_emplace(r.d, r);
      if (!fresh) {
        if (it->second.cl_odd != r.cl_odd) throw Error("conflicting class groups for D = " + std::to_string(r.d));
        for (auto& [p, c] : r.delta) it->second.delta[p] = c;
      }
    } catch (const std::exception& e) {
      throw Error("cache " + path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// 2[p1] + 2[p2] = 0 with p2 the conjugate prime form
bool conjugate_check(std::int64_t d, std::int64_t p) {
  const Form p1 = *prime_form(d, p);
  const Form p2{p1.a, -p1.b, p1.c};
  return multiply(split_prime_delta_form(d, p), power(p2, 2)) == principal_form(d);
}

}  // namespace

NfScanReport pointed_3_moment_scan(std::int64_t x, Sign sign, std::vector<LocalCondition> conditions,
                                   std::int64_t v1, const NfScanOptions& opts) {
  if (sign == Sign::Both) throw Error("pointed scan: choose imaginary or real");
  if (!is_prime(v1)) throw Error("pointed scan: v1 must be prime");
  const bool has_split = std::any_of(conditions.begin(), conditions.end(), [&](const auto& c) {
    return c.v == v1 && c.algebra == LocalAlgebra::Split;
  });
  if (!has_split) conditions.push_back({v1, LocalAlgebra::Split, std::nullopt});

  NfScanReport report;
  report.x = x;
  report.sign = sign;
  report.conditions = conditions;
  report.v1 = v1;
  report.note = "finite-X averages have no certified error term and converge slowly; read them as a trend";

  const auto ds = enumerate_discriminants(x, sign, conditions);
  report.discriminants = ds.size();

  std::map<std::int64_t, NfRecord> cached;
  if (opts.cache_dir) cached = load_nf_cache(*opts.cache_dir);

  std::vector<NfRecord> records(ds.size());
  std::vector<char> conj_ok(ds.size(), 1);
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto it = cached.find(ds[i]);
    if (it != cached.end() && it->second.delta.count(v1)) {
      records[i] = it->second;
      ++report.from_cache;
    } else {
      missing.push_back(i);
    }
  }

  const std::size_t batch = std::max<std::size_t>(opts.batch, 1);
  for (std::size_t start = 0; start < missing.size(); start += batch) {
    const std::size_t end = std::min(missing.size(), start + batch);
    std::atomic<std::size_t> next{start};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      while (true) {
        const std::size_t j = next.fetch_add(1);
        if (j >= end) return;
        try {
          records[missing[j]] = compute_nf_record(ds[missing[j]], v1);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const unsigned workers = std::max(1u, opts.workers);
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work);
      for (auto& t : threads) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    if (opts.cache_dir) {
      std::filesystem::create_directories(*opts.cache_dir);
      std::ofstream out(nf_cache_file(*opts.cache_dir), std::ios::app);
      if (!out) throw Error("cannot write cache in " + opts.cache_dir->string());
      for (std::size_t j = start; j < end; ++j) out << to_json(records[missing[j]]).dump() << '\n';
    }
  }
  for (std::size_t i = 0; i < ds.size(); ++i) conj_ok[i] = conjugate_check(ds[i], v1);

  const GroupType z3 = GroupType::make(3, {1});
  const bool imaginary = sign == Sign::Imaginary;
  AverageRow unpointed{"sur(Cl, Z/3)", "cl", "Z/3"};
  unpointed.expected = imaginary ? 1.0 : 1.0 / 3.0;
  std::vector<AverageRow> pointed(3), sym(3);
  for (int g = 0; g < 3; ++g) {
    const std::string t = PointedClass{z3, {g}}.to_string();
    pointed[g] = AverageRow{"sur((Cl,w1-w2), " + t + ")", "pointed", t};
    sym[g] = AverageRow{"sym sur((Cl,+-(w1-w2)), " + t + ")", "pointed_sym", t};
    sym[g].scale = 2;
    pointed[g].expected = sym[g].expected = imaginary ? 1.0 / 3.0 : 1.0 / 9.0;
  }

  std::map<GroupType, PointedSurTable> tables;
  const int steps = std::max(1, opts.trend_steps);
  int next_step = 1;
  auto snapshot = [&](std::int64_t bound) {
    NfTrendRow row;
    row.x = bound;
    row.count = unpointed.count;
    row.unpointed = unpointed.value();
    for (int g = 0; g < 3; ++g) {
      row.pointed.push_back(pointed[g].value());
      row.symmetrized.push_back(sym[g].value());
    }
    report.trend.push_back(row);
  };
  bool conj_all = true;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    while (next_step <= steps && std::abs(ds[i]) >= x * next_step / steps) {
      snapshot(x * next_step / steps);
      ++next_step;
    }
    conj_all = conj_all && conj_ok[i];
    const auto& r = records[i];
    const auto proj = sylow_project(r.cl_odd, r.delta.at(v1), 3);
    unpointed.sum += sur_count(proj.type, z3);
    ++unpointed.count;
    for (int g = 0; g < 3; ++g) ++pointed[g].count, ++sym[g].count;
    if (proj.type.rank() == 0) continue;
    auto it = tables.find(proj.type);
    if (it == tables.end()) it = tables.emplace(proj.type, pointed_sur_table(proj.type, z3)).first;
    const auto& table = it->second;
    const PointedClass dc = canonicalize(proj.type, proj.element);
    std::size_t cls = 0;
    while (table.classes[cls] != dc) ++cls;
    for (int g = 0; g < 3; ++g) {
      pointed[g].sum += table.counts[cls][g];
      sym[g].sum += table.counts[cls][g] + table.counts[cls][(3 - g) % 3];
    }
  }
  while (next_step <= steps) {
    snapshot(x * next_step / steps);
    ++next_step;
  }

  report.rows.push_back(unpointed);
  for (const auto& r : pointed) report.rows.push_back(r);
  for (const auto& r : sym) report.rows.push_back(r);
  report.checks["sum over g of pointed = unpointed"] =
      pointed[0].sum + pointed[1].sum + pointed[2].sum == unpointed.sum;
  report.checks["g=1 vs g=2 symmetrized equal"] = sym[1].sum == sym[2].sum;
  report.checks["2[p1] + 2[p2] = 0"] = conj_all;
  return report;
}

std::vector<std::string> verify_nf_cache(const std::filesystem::path& dir, std::uint64_t* records_checked) {
  std::vector<std::string> problems;
  std::uint64_t checked = 0;
  const auto path = nf_cache_file(dir);
  std::ifstream in(path);
  std::string line;
  std::size_t lineno = 0;
  while (in && std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.filename().string() + ":" + std::to_string(lineno);
    try {
      const NfRecord r = nf_record_from_json(nlohmann::json::parse(line));
      ++checked;
      if (!is_fundamental_discriminant(r.d)) problems.push_back(where + ": D is not fundamental");
      for (std::size_t i = 0; i < r.cl_odd.size(); ++i) {
        const auto n = r.cl_odd[i];
        if (n <= 1 || n % 2 == 0 || (i > 0 && n % r.cl_odd[i - 1] != 0)) {
          problems.push_back(where + ": cl_odd is not an odd invariant-factor chain");
        }
      }
      for (const auto& [p, coords] : r.delta) {
        bool ok = coords.size() == r.cl_odd.size() && kronecker(r.d, p) == 1;
        for (std::size_t i = 0; ok && i < coords.size(); ++i) ok = coords[i] >= 0 && coords[i] < r.cl_odd[i];
        if (!ok) problems.push_back(where + ": bad delta for p = " + std::to_string(p));
      }
    } catch (const std::exception& e) {
      problems.push_back(where + ": " + e.what());
    }
  }
  if (records_checked) *records_checked = checked;
  return problems;
}

}  // namespace cllab
