#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace cllab {

/// Library version string.
const char* version();

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;

  void add(std::vector<nlohmann::ordered_json> row) { rows.push_back(std::move(row)); }
};

/// Header (command, config, version, timestamps), tables and a footer of named
/// invariant checks.
struct Report {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::string started;
  std::string finished;
  std::vector<Table> tables;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::string> notes;

  Table& table(const std::string& name, std::vector<std::string> columns);
  void check(const std::string& name, bool ok) { checks.emplace_back(name, ok); }
  bool passed() const;
};

enum class OutputFormat { Text, Json, Csv };

/// Numbers are printed with 10 significant digits in text and CSV.
std::string format_cell(const nlohmann::ordered_json& cell);

nlohmann::ordered_json to_json(const Report& r);
void write_text(std::ostream& out, const Report& r);
void write_csv(std::ostream& out, const Report& r);
void write_report(std::ostream& out, const Report& r, OutputFormat format);

}  // namespace cllab
