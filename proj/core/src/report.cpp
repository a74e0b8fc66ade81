#include "cllab/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>

#ifndef CLLAB_VERSION
#define CLLAB_VERSION "unknown"
#endif

namespace cllab {

const char* version() { return CLLAB_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Table& Report::table(const std::string& name, std::vector<std::string> columns) {
  tables.push_back(Table{name, std::move(columns), {}});
  return tables.back();
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second; });
}

std::string format_cell(const nlohmann::ordered_json& cell) {
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_boolean()) return cell.get<bool>() ? "PASS" : "FAIL";
  if (cell.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", cell.get<double>());
    return buf;
  }
  if (cell.is_null()) return "-";
  return cell.dump();
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["version"] = version();
  j["started"] = r.started;
  j["finished"] = r.finished;
  j["config"] = r.config;
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& t : r.tables) {
    nlohmann::ordered_json tj;
    tj["name"] = t.name;
    tj["columns"] = t.columns;
    tj["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) obj[t.columns[i]] = row[i];
      tj["rows"].push_back(obj);
    }
    j["tables"].push_back(tj);
  }
  j["checks"] = nlohmann::ordered_json::object();
  for (const auto& [name, ok] : r.checks) j["checks"][name] = ok;
  j["notes"] = r.notes;
  j["passed"] = r.passed();
  return j;
}

void write_text(std::ostream& out, const Report& r) {
  out << "# cllab " << version() << " " << r.command << "\n";
  out << "# started " << r.started << "  finished " << r.finished << "\n";
  out << "# config " << r.config.dump() << "\n";
  for (const auto& t : r.tables) {
    out << "\n== " << t.name << "\n";
    std::vector<std::size_t> width(t.columns.size());
    std::vector<std::vector<std::string>> cells;
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    for (const auto& row : t.rows) {
      std::vector<std::string> line;
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        line.push_back(i < row.size() ? format_cell(row[i]) : "");
        width[i] = std::max(width[i], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        out << line[i];
        if (i + 1 < line.size()) out << std::string(width[i] - line[i].size() + 2, ' ');
      }
      out << "\n";
    };
    emit(t.columns);
    for (const auto& line : cells) emit(line);
  }
  if (!r.notes.empty()) {
    out << "\n";
    for (const auto& n : r.notes) out << "note: " << n << "\n";
  }
  if (!r.checks.empty()) {
    out << "\n== checks\n";
    for (const auto& [name, ok] : r.checks) out << (ok ? "PASS  " : "FAIL  ") << name << "\n";
  }
  out << "\nresult: " << (r.passed() ? "PASS" : "FAIL") << "\n";
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const Report& r) {
  out << "# cllab " << version() << " " << r.command << " started " << r.started << "\n";
  out << "# config " << r.config.dump() << "\n";
  for (const auto& t : r.tables) {
    out << "# table " << t.name << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_escape(t.columns[i]);
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        const std::string cell = row[i].is_boolean() ? (row[i].get<bool>() ? "true" : "false") : format_cell(row[i]);
        out << (i ? "," : "") << csv_escape(cell);
      }
      out << "\n";
    }
  }
  out << "# table checks\ncheck,pass\n";
  for (const auto& [name, ok] : r.checks) out << csv_escape(name) << "," << (ok ? "true" : "false") << "\n";
}

void write_report(std::ostream& out, const Report& r, OutputFormat format) {
  switch (format) {
    case OutputFormat::Text: write_text(out, r); break;
    case OutputFormat::Json: out << to_json(r).dump(2) << "\n"; break;
    case OutputFormat::Csv: write_csv(out, r); break;
  }
}

}  // namespace cllab
