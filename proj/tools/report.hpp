#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <deque>
#include <vector>

namespace expfunc::cli {

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& name);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;  // numbers, strings or null

  void add(std::vector<nlohmann::json> row) { rows.push_back(std::move(row)); }
};

/// Everything a command produces. Wall time is left out of CSV so that
/// identical runs give byte-identical output.
struct RunReport {
  nlohmann::json spec;  // canonical echo of the process document
  std::string command;
  std::deque<Table> tables;
  std::vector<std::string> warnings;  // machine-readable codes
  double wall_time_s = 0.0;

  Table& table(const std::string& name, std::vector<std::string> columns);
  void warn(const std::string& code);
  void write(std::ostream& out, Format format) const;
};

}  // namespace expfunc::cli
