#include "cllab/ff_scan.hpp"

#include <atomic>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "cllab/error.hpp"
#include "cllab/pic0.hpp"

namespace cllab {

std::int64_t CurveRecord::pic0_order() const {
  std::int64_t h = 1;
  for (auto d : pic0) h *= d;
  return h;
}

nlohmann::json to_json(const CurveRecord& r) {
  nlohmann::json j;
  j["schema_version"] = CurveRecord::kSchemaVersion;
  j["q"] = r.q;
  j["model"] = to_string(r.model);
  j["f"] = r.f;
  j["genus"] = r.genus;
  j["counts"] = r.counts;
  j["L"] = r.L;
  j["pic0"] = r.pic0;
  j["delta"] = r.delta ? nlohmann::json(*r.delta) : nlohmann::json(nullptr);
  j["R"] = r.R;
  j["cl0"] = r.cl0 ? nlohmann::json(*r.cl0) : nlohmann::json(nullptr);
  j["points_q"] = r.points_q;
  return j;
}

CurveRecord record_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("schema_version")) throw Error("curve record without schema_version");
  const int version = j.at("schema_version").get<int>();
  if (version != CurveRecord::kSchemaVersion) {
    throw Error("unsupported curve record schema_version " + std::to_string(version));
  }
  try {
    CurveRecord r;
    r.q = j.at("q").get<std::uint32_t>();
    r.model = parse_model(j.at("model").get<std::string>());
    r.f = j.at("f").get<Poly>();
    r.genus = j.at("genus").get<int>();
    r.counts = j.at("counts").get<std::vector<std::int64_t>>();
    r.L = j.at("L").get<std::vector<std::int64_t>>();
    r.pic0 = j.at("pic0").get<std::vector<std::int64_t>>();
    if (!j.at("delta").is_null()) r.delta = j.at("delta").get<std::vector<std::int64_t>>();
    r.R = j.at("R").get<std::int64_t>();
    if (!j.at("cl0").is_null()) r.cl0 = j.at("cl0").get<std::vector<std::int64_t>>();
    r.points_q = j.at("points_q").get<std::int64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed curve record: ") + e.what());
  }
}

CurveRecord compute_record(const Curve& c, std::int64_t max_order) {
  Pic0 pic(c, Pic0::Options{max_order});
  const auto& g = pic.group();
  CurveRecord r;
  r.q = c.q;
  r.model = c.model;
  r.f = c.f;
  r.genus = c.genus;
  for (int i = 1; i <= c.genus; ++i) r.counts.push_back(point_count(c, i));
  r.L = l_polynomial_from_counts(c.q, c.genus, r.counts).coeffs;
  r.pic0 = g.invariants;
  r.points_q = point_count(c, 1);
  if (r.pic0_order() != pic.l_value()) throw InvariantViolation("|Pic0| != L(1) for " + c.to_string());
  if (c.model == Model::Split) {
    r.delta = g.delta_coords;
    r.R = g.regulator;
    r.cl0 = g.cl_invariants;
    if (g.regulator * g.cl_order() != g.order) {
      throw InvariantViolation("|Pic0| != R |Cl| for " + c.to_string());
    }
  }
  return r;
}

// ------------------------------------------------------------------- cache

std::filesystem::path CurveCache::file_for(std::uint32_t q, Model model, int deg_f) const {
  return dir_ / ("ff-q" + std::to_string(q) + "-" + to_string(model) + "-d" + std::to_string(deg_f) + ".jsonl");
}

std::map<std::uint64_t, CurveRecord> CurveCache::load(std::uint32_t q, Model model, int deg_f) const {
  std::map<std::uint64_t, CurveRecord> out;
  const auto path = file_for(q, model, deg_f);
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      CurveRecord r = record_from_json(nlohmann::json::parse(line));
      if (r.q != q || r.model != model || deg(r.f) != deg_f) throw Error("record does not belong to this file");
      out.insert_or_assign(poly_index(r.f, q), std::move(r));
    } catch (const std::exception& e) {
      throw Error("cache " + path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void CurveCache::append(const std::vector<CurveRecord>& records) const {
  if (records.empty()) return;
  std::filesystem::create_directories(dir_);
  const auto& first = records.front();
  std::ofstream out(file_for(first.q, first.model, deg(first.f)), std::ios::app);
  if (!out) throw Error("cannot write cache in " + dir_.string());
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

// ----------------------------------------------------------------- targets

std::string ScanTarget::to_string() const {
  if (!marked) return group.to_string();
  return PointedClass{group, *marked}.to_string();
}

ScanTarget parse_target(const std::string& text, std::int64_t default_p) {
  const auto colon = text.find(':');
  const std::string group_text = text.substr(0, colon);
  std::int64_t p = default_p;
  if (group_text.rfind("Z/", 0) == 0) {
    std::int64_t n = std::stoll(group_text.substr(2));
    for (std::int64_t d = 2; d <= n; ++d) {
      if (n % d == 0) {
        p = d;
        break;
      }
    }
  }
  ScanTarget t{parse_group_type(p, group_text), std::nullopt};
  if (colon != std::string::npos) {
    std::vector<std::int64_t> coords;
    std::stringstream ss(text.substr(colon + 1));
    std::string part;
    while (std::getline(ss, part, ',')) coords.push_back(std::stoll(part));
    if (t.group.is_trivial() && coords == std::vector<std::int64_t>{0}) coords.clear();
    if (coords.size() != t.group.lambda.size()) throw Error("target '" + text + "': wrong number of coordinates");
    t.marked = GroupElement::make(t.group, coords).coords;
  }
  return t;
}

bool FfScanReport::all_checks_pass() const {
  for (const auto& d : degrees) {
    for (const auto& [name, ok] : d.checks) {
      if (!ok) return false;
    }
  }
  return true;
}

// ----------------------------------------------------------------- records

std::vector<CurveRecord> family_records(std::uint32_t q, int deg_f, Model model, const FfScanOptions& opts,
                                        std::uint64_t* from_cache) {
  const auto curves = enumerate_curves(q, deg_f, model);
  std::map<std::uint64_t, CurveRecord> cached;
  std::optional<CurveCache> cache;
  if (opts.cache_dir) {
    cache.emplace(*opts.cache_dir);
    cached = cache->load(q, model, deg_f);
  }
  std::vector<std::optional<CurveRecord>> slots(curves.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    auto it = cached.find(poly_index(curves[i].f, q));
    if (it != cached.end()) {
      slots[i] = std::move(it->second);
    } else {
      missing.push_back(i);
    }
  }
  if (from_cache) *from_cache = curves.size() - missing.size();

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
          slots[missing[j]] = compute_record(curves[missing[j]], opts.max_order);
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
    if (cache) {
      std::vector<CurveRecord> fresh;
      for (std::size_t j = start; j < end; ++j) fresh.push_back(*slots[missing[j]]);
      cache->append(fresh);
    }
  }
  std::vector<CurveRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// -------------------------------------------------------------------- scan

namespace {

struct TableKey {
  GroupType b, a;
  auto operator<=>(const TableKey&) const = default;
};

}  // namespace

FfScanReport ff_scan(std::uint32_t q, const std::vector<int>& deg_values, Model model,
                     const std::vector<ScanTarget>& targets, const FfScanOptions& opts) {
  FfScanReport report;
  report.q = q;
  report.model = model;
  report.targets = targets;

  std::vector<GroupType> groups;
  for (const auto& t : targets) {
    const std::int64_t n = t.group.order();
    if (std::gcd(static_cast<std::int64_t>(q) * (q - 1), n) != 1) {
      const std::string msg = "target " + t.to_string() + " is not coprime to q(q-1) = " +
                              std::to_string(static_cast<std::int64_t>(q) * (q - 1));
      if (!opts.allow_non_coprime) throw Error(msg + " (override to proceed)");
      report.warnings.push_back(msg);
    }
    if (std::find(groups.begin(), groups.end(), t.group) == groups.end()) groups.push_back(t.group);
  }
  const std::int64_t joint_p = groups.empty() ? 3 : groups.front().p;
  std::map<TableKey, PointedSurTable> tables;
  auto table_for = [&](const GroupType& b, const GroupType& a) -> const PointedSurTable& {
    TableKey key{b, a};
    auto it = tables.find(key);
    if (it == tables.end()) it = tables.emplace(key, pointed_sur_table(b, a)).first;
    return it->second;
  };

  for (int d : deg_values) {
    DegreeScan scan;
    scan.deg_f = d;
    scan.genus = d % 2 == 0 ? (d - 2) / 2 : (d - 1) / 2;
    scan.joint_p = joint_p;
    const auto records = family_records(q, d, model, opts, &scan.from_cache);
    scan.curves = records.size();

    bool l_ok = true, split_ok = true, weil_ok = true;
    for (const auto& r : records) {
      LPolynomial L{r.L};
      std::int64_t l1 = L.at_one();
      if (l1 != r.pic0_order()) l_ok = false;
      if (!L.functional_equation_ok(q) || !L.weil_bounds_ok(q)) weil_ok = false;
      if (model == Model::Split) {
        std::int64_t h = 1;
        for (auto x : *r.cl0) h *= x;
        if (r.R * h != r.pic0_order()) split_ok = false;
      }
      const auto tp = sylow_type(r.pic0, joint_p);
      ++scan.joint[{r.points_q, torsion_count(tp, opts.torsion_k)}];
    }
    scan.checks["L(1) = |Pic0|"] = l_ok;
    scan.checks["functional equation and Weil bounds"] = weil_ok;
    if (model == Model::Split) scan.checks["|Pic0| = R |Cl|"] = split_ok;

    for (const auto& a : groups) {
      const BigRational inv_a(1, a.order());
      AverageRow pic_row{"sur(Pic0, " + a.to_string() + ")", "pic0", a.to_string()};
      pic_row.expected = 1.0;
      AverageRow cl_row{"sur(Cl, " + a.to_string() + ")", "cl", a.to_string()};
      cl_row.expected = inv_a.convert_to<double>();
      const auto na = static_cast<std::size_t>(a.order());
      std::vector<AverageRow> pointed(na), sym(na);
      std::vector<std::uint64_t> neg_index(na);
      for (std::size_t e = 0; e < na; ++e) {
        const auto coords = element_at(a, e);
        const PointedClass pc{a, coords};
        pointed[e] = AverageRow{"sur((Pic0,delta), " + pc.to_string() + ")", "pointed", pc.to_string()};
        sym[e] = AverageRow{"sym sur((Pic0,+-delta), " + pc.to_string() + ")", "pointed_sym", pc.to_string()};
        pointed[e].expected = sym[e].expected = cl_row.expected;
        sym[e].scale = 2;
        neg_index[e] = element_index(a, (-GroupElement{a, coords}).coords);
      }
      for (const auto& r : records) {
        const auto proj = sylow_project(r.pic0, r.delta ? *r.delta : std::vector<std::int64_t>{}, a.p);
        pic_row.sum += sur_count(proj.type, a);
        ++pic_row.count;
        if (model != Model::Split) continue;
        cl_row.sum += sur_count(sylow_type(*r.cl0, a.p), a);
        ++cl_row.count;
        if (proj.type.log_order() < a.log_order() || proj.type.rank() < a.rank()) {
          for (std::size_t e = 0; e < na; ++e) ++pointed[e].count, ++sym[e].count;
          continue;
        }
        const auto& table = table_for(proj.type, a);
        const PointedClass dc = canonicalize(proj.type, proj.element);
        std::size_t cls = 0;
        while (table.classes[cls] != dc) ++cls;
        // counts for delta -> a; the element -delta is handled by a <-> -a
        for (std::size_t e = 0; e < na; ++e) {
          pointed[e].sum += table.counts[cls][e];
          ++pointed[e].count;
          sym[e].sum += table.counts[cls][e] + table.counts[cls][neg_index[e]];
          ++sym[e].count;
        }
      }
      scan.rows.push_back(pic_row);
      if (model == Model::Split) {
        scan.rows.push_back(cl_row);
        BigInt total = 0;
        bool symmetric = true;
        for (std::size_t e = 0; e < na; ++e) {
          total += pointed[e].sum;
          if (sym[e].sum != sym[neg_index[e]].sum) symmetric = false;
          if (pointed[e].sum != pointed[neg_index[e]].sum) symmetric = false;
        }
        scan.checks["sum over a of pointed = unpointed [" + a.to_string() + "]"] = total == pic_row.sum;
        scan.checks["a vs -a symmetry [" + a.to_string() + "]"] = symmetric;
        for (std::size_t e = 0; e < na; ++e) scan.rows.push_back(pointed[e]);
        for (std::size_t e = 0; e < na; ++e) scan.rows.push_back(sym[e]);
      }
    }
    report.degrees.push_back(std::move(scan));
  }
  return report;
}

std::vector<std::string> verify_cache(const std::filesystem::path& dir, std::uint64_t* records_checked) {
  std::vector<std::string> problems;
  std::uint64_t checked = 0;
  if (!std::filesystem::exists(dir)) {
    problems.push_back("cache directory " + dir.string() + " does not exist");
    return problems;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("ff-", 0) == 0 && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where = path.filename().string() + ":" + std::to_string(lineno);
      try {
        const CurveRecord r = record_from_json(nlohmann::json::parse(line));
        ++checked;
        const Curve c = Curve::make(r.q, r.f, r.model);
        if (c.genus != r.genus) problems.push_back(where + ": genus mismatch");
        LPolynomial L{r.L};
        if (L.coeffs != l_polynomial_from_counts(r.q, r.genus, r.counts).coeffs) {
          problems.push_back(where + ": L-polynomial does not match the point counts");
        }
        if (L.at_one() != r.pic0_order()) problems.push_back(where + ": L(1) != |Pic0|");
        if (r.model == Model::Split) {
          if (!r.delta || !r.cl0) {
            problems.push_back(where + ": split record without delta/cl0");
          } else {
            std::int64_t h = 1;
            for (auto x : *r.cl0) h *= x;
            if (r.R * h != r.pic0_order()) problems.push_back(where + ": |Pic0| != R |Cl|");
          }
        }
      } catch (const std::exception& e) {
        problems.push_back(where + ": " + e.what());
      }
    }
  }
  if (records_checked) *records_checked = checked;
  return problems;
}

}  // namespace cllab
