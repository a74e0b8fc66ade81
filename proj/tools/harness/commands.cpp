#include "harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cllab/abelian_groups.hpp"
#include "cllab/error.hpp"
#include "cllab/ff_scan.hpp"
#include "cllab/measures.hpp"
#include "cllab/nf_scan.hpp"
#include "cllab/samplers.hpp"

namespace cllab::harness {

namespace {

using ojson = nlohmann::ordered_json;

double to_double(const BigRational& x) { return x.convert_to<double>(); }

std::string rational_string(const BigRational& x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

std::string big_string(const BigInt& x) { return x.str(); }

void require_odd_prime(std::int64_t p) {
  if (!is_odd_prime(p)) throw Error("p = " + std::to_string(p) + " is not an odd prime");
}

Report start(const std::string& command) {
  Report r;
  r.command = command;
  r.started = utc_timestamp();
  return r;
}

void add_moment_rows(Table& t, const MomentReport& m, int first) {
  const double expected = to_double(m.expected);
  for (std::size_t n = static_cast<std::size_t>(std::max(first, 0)); n < m.partials.size(); ++n) {
    t.add({static_cast<std::int64_t>(n), m.partials[n], expected, expected - m.partials[n]});
  }
}

}  // namespace

// ------------------------------------------------------------------ moments

Report cmd_moments(const MomentsConfig& cfg) {
  Report r = start("moments");
  require_odd_prime(cfg.p);
  if (cfg.target.has_value() == cfg.pointed.has_value()) throw Error("moments: give exactly one of --target or --pointed");
  if (cfg.n < 0) throw Error("moments: N must be non-negative");
  if (cfg.u < 0) throw Error("moments: u must be non-negative");
  r.config["p"] = cfg.p;
  MomentReport m;
  int first = 1;
  if (cfg.target) {
    r.config["u"] = cfg.u;
    r.config["target"] = *cfg.target;
    const GroupType a = parse_group_type(cfg.p, *cfg.target);
    first = std::max(1, a.log_order());
    m = moment_partial(a, cfg.u, cfg.n, cfg.product_tol);
  } else {
    r.config["pointed"] = *cfg.pointed;
    const ScanTarget t = parse_target(*cfg.pointed, cfg.p);
    if (!t.marked) throw Error("moments: --pointed needs a marked element, e.g. Z/3:1");
    if (t.group.p != cfg.p) throw Error("moments: pointed target is not a " + std::to_string(cfg.p) + "-group");
    first = std::max(1, t.group.log_order());
    m = pointed_moment_partial(PointedClass{t.group, *t.marked}, cfg.n, cfg.product_tol);
  }
  r.config["N"] = cfg.n;
  r.config["product_tol"] = cfg.product_tol;
  if (cfg.gap_tol) r.config["gap_tol"] = *cfg.gap_tol;

  auto& t = r.table("partial sums " + m.target, {"N", "partial_sum", "expected", "gap"});
  add_moment_rows(t, m, first);
  auto& s = r.table("summary", {"target", "expected", "final_partial_sum", "final_gap", "product_error"});
  s.add({m.target, rational_string(m.expected), m.partial_sum, m.gap, m.product_error});

  r.check("monotone non-decreasing in N", m.monotone_ok);
  const double expected = to_double(m.expected);
  const bool bounded = std::all_of(m.partials.begin(), m.partials.end(),
                                   [&](double x) { return x <= expected + m.product_error + 1e-12; });
  r.check("bounded by expected + product error", bounded);
  if (cfg.gap_tol) r.check("final gap within tolerance", std::abs(m.gap) <= *cfg.gap_tol);
  r.finished = utc_timestamp();
  return r;
}

// ------------------------------------------------------------------- sample

Report cmd_sample(const SampleCommandConfig& cfg) {
  Report r = start("sample");
  if (!cfg.seed) throw Error("sample: --seed is required");
  require_odd_prime(cfg.p);
  SampleConfig sc;
  sc.p = cfg.p;
  sc.u = cfg.u;
  sc.n = cfg.n;
  sc.e = cfg.e;
  sc.draws = cfg.draws;
  sc.seed = *cfg.seed;
  sc.workers = cfg.workers;
  if (cfg.kind == "cokernel") {
    sc.kind = SamplerKind::Cokernel;
  } else if (cfg.kind == "process") {
    sc.kind = SamplerKind::Process;
  } else if (cfg.kind == "pointed") {
    sc.kind = SamplerKind::Pointed;
  } else {
    throw Error("sample: unknown kind '" + cfg.kind + "' (cokernel, process, pointed)");
  }
  r.config["kind"] = cfg.kind;
  r.config["p"] = cfg.p;
  if (sc.kind != SamplerKind::Pointed) r.config["u"] = cfg.u;
  r.config["n"] = cfg.n;
  r.config["e"] = cfg.e;
  r.config["draws"] = cfg.draws;
  r.config["seed"] = *cfg.seed;
  r.config["max_log_order"] = cfg.max_log_order;
  r.config["level"] = cfg.level;

  std::vector<std::string> labels;
  std::vector<std::uint64_t> observed;
  std::vector<double> probs;
  std::uint64_t total = 0;
  if (sc.kind == SamplerKind::Pointed) {
    const auto hist = sample_pointed_histogram(sc);
    for (const auto& [cls, count] : hist) total += count;
    std::uint64_t seen = 0;
    for (const auto& a : enumerate_types(cfg.p, cfg.max_log_order)) {
      for (const auto& [cls, size] : pointed_classes(a)) {
        labels.push_back(cls.to_string());
        auto it = hist.find(cls);
        observed.push_back(it == hist.end() ? 0 : it->second);
        seen += observed.back();
        probs.push_back(mu_pointed(cls, 1e-12).value);
      }
    }
    labels.push_back("tail");
    observed.push_back(total - seen);
  } else {
    const auto hist = sample_histogram(sc);
    for (const auto& [type, count] : hist) total += count;
    std::uint64_t seen = 0;
    for (const auto& a : enumerate_types(cfg.p, cfg.max_log_order)) {
      labels.push_back(a.to_string());
      auto it = hist.find(a);
      observed.push_back(it == hist.end() ? 0 : it->second);
      seen += observed.back();
      probs.push_back(mu_u(a, cfg.u, 1e-12).value);
    }
    labels.push_back("tail");
    observed.push_back(total - seen);
  }
  const double listed = std::accumulate(probs.begin(), probs.end(), 0.0);
  probs.push_back(std::max(0.0, 1.0 - listed));

  auto& t = r.table("histogram", {"cell", "observed", "expected_count", "probability", "observed_fraction"});
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double n = static_cast<double>(total);
    t.add({labels[i], observed[i], probs[i] * n, probs[i], static_cast<double>(observed[i]) / n});
  }
  const ChiSquareResult chi = chi_square(observed, probs, cfg.level);
  auto& c = r.table("chi-square", {"statistic", "dof", "critical", "p_value"});
  c.add({chi.statistic, chi.dof, chi.critical, chi.p_value});
  r.check("chi-square at level " + format_cell(cfg.level), chi.pass);
  r.finished = utc_timestamp();
  return r;
}

// ------------------------------------------------------------------- ffscan

std::vector<int> resolve_degrees(const FfScanConfig& cfg) {
  const Model model = parse_model(cfg.model);
  std::vector<int> degrees = cfg.degrees;
  if (cfg.m_range) {
    for (int m = cfg.m_range->first; m <= cfg.m_range->second; ++m) {
      degrees.push_back(model == Model::Ramified ? 2 * m - 1 : 2 * m);
    }
  }
  if (degrees.empty()) throw Error("ffscan: give --deg or --m");
  for (int d : degrees) {
    const bool odd = d % 2 != 0;
    if (d < 1 || odd != (model == Model::Ramified)) {
      throw Error("ffscan: deg f = " + std::to_string(d) + " does not match the " + to_string(model) + " model");
    }
  }
  return degrees;
}

Report cmd_ffscan(const FfScanConfig& cfg) {
  Report r = start("ffscan");
  const Model model = parse_model(cfg.model);
  const auto degrees = resolve_degrees(cfg);
  std::vector<ScanTarget> targets;
  for (const auto& t : cfg.targets) targets.push_back(parse_target(t));
  r.config["q"] = cfg.q;
  r.config["model"] = to_string(model);
  r.config["degrees"] = degrees;
  r.config["targets"] = cfg.targets;
  r.config["torsion_k"] = cfg.torsion_k;
  r.config["max_order"] = cfg.max_order;
  r.config["allow_non_coprime"] = cfg.allow_non_coprime;
  r.config["cache"] = cfg.cache_dir ? ojson(cfg.cache_dir->string()) : ojson(nullptr);
  r.config["family"] = model == Model::Inert
                           ? "squarefree f with leading coefficient the least nonsquare, one f per field"
                           : "monic squarefree f, one f per field";

  FfScanOptions opts;
  opts.workers = cfg.workers;
  opts.cache_dir = cfg.cache_dir;
  opts.allow_non_coprime = cfg.allow_non_coprime;
  opts.torsion_k = cfg.torsion_k;
  opts.max_order = cfg.max_order;
  const FfScanReport scan = ff_scan(cfg.q, degrees, model, targets, opts);
  for (const auto& w : scan.warnings) r.notes.push_back("warning: " + w);

  for (const auto& d : scan.degrees) {
    auto& t = r.table("deg " + std::to_string(d.deg_f) + " (genus " + std::to_string(d.genus) + ") averages",
                      {"row", "kind", "curves", "sum", "average", "expected", "gap"});
    for (const auto& row : d.rows) {
      t.add({row.label, row.kind, row.count, big_string(row.sum) + (row.scale > 1 ? "/" + std::to_string(row.scale) : ""),
             row.value(), row.expected, row.expected - row.value()});
    }
    auto& j = r.table("deg " + std::to_string(d.deg_f) + " joint (#C(F_q), #Pic0[" + std::to_string(d.joint_p) + "^" +
                          std::to_string(cfg.torsion_k) + "])",
                      {"points", "torsion", "curves"});
    for (const auto& [cell, count] : d.joint) j.add({cell.first, cell.second, count});
    for (const auto& [name, ok] : d.checks) r.check("deg " + std::to_string(d.deg_f) + ": " + name, ok);
    r.notes.push_back("deg " + std::to_string(d.deg_f) + ": " + std::to_string(d.curves) + " curves, " +
                      std::to_string(d.from_cache) + " from cache");
  }
  r.notes.push_back("averages at fixed q carry no certified error bar; compare trends across degrees");
  r.finished = utc_timestamp();
  return r;
}

// ------------------------------------------------------------------- nfscan

Report cmd_nfscan(const NfScanConfig& cfg) {
  Report r = start("nfscan");
  const Sign sign = parse_sign(cfg.sign);
  std::vector<LocalCondition> conditions;
  for (const auto& c : cfg.conditions) conditions.push_back(parse_condition(c));
  r.config["X"] = cfg.x;
  r.config["sign"] = to_string(sign);
  r.config["conditions"] = cfg.conditions;
  r.config["v1"] = cfg.v1 ? ojson(*cfg.v1) : ojson(nullptr);
  r.config["trend_steps"] = cfg.trend_steps;
  r.config["density_tol"] = cfg.density_tol;
  r.config["cache"] = cfg.cache_dir ? ojson(cfg.cache_dir->string()) : ojson(nullptr);

  if (cfg.v1) {
    NfScanOptions opts;
    opts.workers = cfg.workers;
    opts.cache_dir = cfg.cache_dir;
    opts.trend_steps = cfg.trend_steps;
    const NfScanReport scan = pointed_3_moment_scan(cfg.x, sign, conditions, *cfg.v1, opts);
    auto& t = r.table("averages", {"row", "kind", "discriminants", "sum", "average", "expected", "gap"});
    for (const auto& row : scan.rows) {
      t.add({row.label, row.kind, row.count, big_string(row.sum) + (row.scale > 1 ? "/" + std::to_string(row.scale) : ""),
             row.value(), row.expected, row.expected - row.value()});
    }
    auto& tr = r.table("trend", {"X", "discriminants", "sur(Cl,Z/3)", "g=0", "g=1", "g=2", "sym g=0", "sym g=1",
                                 "sym g=2"});
    for (const auto& row : scan.trend) {
      tr.add({row.x, row.count, row.unpointed, row.pointed[0], row.pointed[1], row.pointed[2], row.symmetrized[0],
              row.symmetrized[1], row.symmetrized[2]});
    }
    for (const auto& [name, ok] : scan.checks) r.check(name, ok);
    r.notes.push_back(scan.note);
    r.notes.push_back(std::to_string(scan.discriminants) + " discriminants, " + std::to_string(scan.from_cache) +
                      " from cache");
    if (sign == Sign::Real) r.notes.push_back("real fields: odd part of the narrow class group");
  }

  const DensityReport dens = quadratic_density_check(cfg.x, sign, conditions);
  auto& d = r.table("density", {"X", "sign", "conditions", "count", "observed", "predicted", "relative_error"});
  std::string conds;
  for (const auto& c : conditions) conds += (conds.empty() ? "" : " ") + c.to_string();
  d.add({cfg.x, to_string(sign), conds.empty() ? "none" : conds, dens.count, dens.observed, dens.predicted,
         dens.relative_error()});
  r.check("density within relative tolerance", dens.relative_error() <= cfg.density_tol);
  r.finished = utc_timestamp();
  return r;
}

// ------------------------------------------------------------------ predict

namespace {

struct Tally {
  double sum = 0.0;
  std::uint64_t count = 0;
  void add(double x) {
    sum += x;
    ++count;
  }
  ojson value() const { return count == 0 ? ojson(nullptr) : ojson(sum / static_cast<double>(count)); }
};

struct Empirical {
  Tally torsion, trivial, torsion_nontrivial;
  std::map<GroupType, std::uint64_t> law_given_zero;
  std::uint64_t zero = 0;
};

void tally_pointed(Empirical& e, const GroupType& b, const std::vector<std::int64_t>& element, int k) {
  e.torsion.add(static_cast<double>(torsion_count(b, k)));
  const bool is_zero = std::all_of(element.begin(), element.end(), [](std::int64_t x) { return x == 0; });
  e.trivial.add(is_zero ? 1.0 : 0.0);
  if (is_zero) {
    ++e.law_given_zero[b];
    ++e.zero;
  } else {
    e.torsion_nontrivial.add(static_cast<double>(torsion_count(b, 1)));
  }
}

}  // namespace

Report cmd_predict(const PredictConfig& cfg) {
  Report r = start("predict");
  require_odd_prime(cfg.p);
  r.config["p"] = cfg.p;
  r.config["k"] = cfg.k;
  r.config["N"] = cfg.n;
  r.config["cache"] = cfg.cache_dir ? ojson(cfg.cache_dir->string()) : ojson(nullptr);
  const double tol = 1e-12;

  Empirical ff, nf;
  if (cfg.cache_dir && std::filesystem::exists(*cfg.cache_dir)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*cfg.cache_dir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      const auto name = path.filename().string();
      if (path.extension() != ".jsonl") continue;
      std::ifstream in(path);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        if (name.rfind("ff-", 0) == 0) {
          const CurveRecord rec = record_from_json(j);
          const std::int64_t q = rec.q;
          if (std::gcd(q * (q - 1), cfg.p) != 1) continue;
          if (rec.delta) {
            const auto proj = sylow_project(rec.pic0, *rec.delta, cfg.p);
            tally_pointed(ff, proj.type, proj.element, cfg.k);
          } else {
            ff.torsion.add(static_cast<double>(torsion_count(sylow_type(rec.pic0, cfg.p), cfg.k)));
          }
        } else if (name.rfind("nf-", 0) == 0) {
          const NfRecord rec = nf_record_from_json(j);
          if (rec.d > 0 || rec.delta.empty()) continue;
          const auto proj = sylow_project(rec.cl_odd, rec.delta.begin()->second, cfg.p);
          tally_pointed(nf, proj.type, proj.element, cfg.k);
        }
      }
    }
  }

  auto& t = r.table("predictions", {"quantity", "limit", "truncated", "N", "ff_empirical", "ff_samples",
                                    "nf_empirical", "nf_samples"});
  const MomentReport tor = torsion_average(cfg.p, cfg.k, 0, cfg.n, tol);
  t.add({"E #B[p^k]", rational_string(tor.expected), tor.partial_sum, cfg.n, ff.torsion.value(), ff.torsion.count,
         nf.torsion.value(), nf.torsion.count});
  const MomentReport triv = conditional_delta_trivial_prob(cfg.p, cfg.n, tol);
  t.add({"P(delta = 0)", rational_string(triv.expected), triv.partial_sum, cfg.n, ff.trivial.value(), ff.trivial.count,
         nf.trivial.value(), nf.trivial.count});
  const int n_ratio = std::max(1, cfg.n - 1);
  const RatioReport ratio = conditional_p_torsion_given_nontrivial(cfg.p, n_ratio, tol);
  t.add({"E #B[p] | delta != 0", rational_string(ratio.expected), ratio.value, n_ratio,
         ff.torsion_nontrivial.value(), ff.torsion_nontrivial.count, nf.torsion_nontrivial.value(),
         nf.torsion_nontrivial.count});

  auto& law = r.table("law of B given delta = 0", {"B", "probability", "ff_empirical", "nf_empirical"});
  for (const auto& b : enumerate_types(cfg.p, 2)) {
    auto freq = [&](const Empirical& e) -> ojson {
      if (e.zero == 0) return nullptr;
      auto it = e.law_given_zero.find(b);
      const double c = it == e.law_given_zero.end() ? 0.0 : static_cast<double>(it->second);
      return c / static_cast<double>(e.zero);
    };
    law.add({b.to_string(), conditional_law_given_zero(b, tol).value, freq(ff), freq(nf)});
  }
  r.check("truncated values monotone", tor.monotone_ok && triv.monotone_ok);
  r.notes.push_back("empirical columns use cached scans only; run ffscan/nfscan first to fill them");
  r.finished = utc_timestamp();
  return r;
}

// ------------------------------------------------------------- cache-verify

Report cmd_cache_verify(const CacheVerifyConfig& cfg) {
  Report r = start("cache-verify");
  r.config["cache"] = cfg.cache_dir.string();
  if (!std::filesystem::exists(cfg.cache_dir)) throw Error("cache directory " + cfg.cache_dir.string() + " does not exist");
  std::uint64_t ff_records = 0, nf_records = 0;
  const auto ff_problems = verify_cache(cfg.cache_dir, &ff_records);
  const auto nf_problems = verify_nf_cache(cfg.cache_dir, &nf_records);
  auto& t = r.table("records", {"kind", "records", "problems"});
  t.add({"ff", ff_records, ff_problems.size()});
  t.add({"nf", nf_records, nf_problems.size()});
  if (!ff_problems.empty() || !nf_problems.empty()) {
    auto& p = r.table("problems", {"problem"});
    for (const auto& s : ff_problems) p.add({s});
    for (const auto& s : nf_problems) p.add({s});
  }
  r.check("function-field records consistent", ff_problems.empty());
  r.check("number-field records consistent", nf_problems.empty());
  r.finished = utc_timestamp();
  return r;
}

}  // namespace cllab::harness
