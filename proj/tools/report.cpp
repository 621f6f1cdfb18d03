#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace expfunc::cli {
namespace {

std::string cell(const nlohmann::json& v, bool full_precision) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  char buf[40];
  std::snprintf(buf, sizeof buf, full_precision ? "%.17g" : "%.10g", v.get<double>());
  return buf;
}

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

Format parse_format(const std::string& name) {
  if (name == "table") return Format::Table;
  if (name == "csv") return Format::Csv;
  if (name == "json" || name == "json-like") return Format::Json;
  throw std::invalid_argument("unknown format '" + name + "' (table, csv, json)");
}

Table& RunReport::table(const std::string& name, std::vector<std::string> columns) {
  tables.push_back({name, std::move(columns), {}});
  return tables.back();
}

void RunReport::warn(const std::string& code) {
  if (std::find(warnings.begin(), warnings.end(), code) == warnings.end()) warnings.push_back(code);
}

void RunReport::write(std::ostream& out, Format format) const {
  if (format == Format::Json) {
    nlohmann::json doc;
    doc["spec"] = spec;
    doc["command"] = command;
    doc["results"] = nlohmann::json::object();
    for (const auto& t : tables) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < t.columns.size() && i < r.size(); ++i) obj[t.columns[i]] = r[i];
        rows.push_back(obj);
      }
      doc["results"][t.name] = rows;
    }
    doc["warnings"] = warnings;
    doc["wall_time_s"] = wall_time_s;
    out << doc.dump(2) << "\n";
    return;
  }
  if (format == Format::Csv) {
    const bool several = tables.size() > 1;
    for (const auto& t : tables) {
      if (several) out << "# " << t.name << "\n";
      for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
      out << "\n";
      for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_escape(cell(r[i], true));
        out << "\n";
      }
    }
    for (const auto& w : warnings) out << "# warning," << w << "\n";
    return;
  }
  out << "command: " << command << "\n";
  if (!spec.is_null()) out << "spec:    " << spec.dump() << "\n";
  for (const auto& t : tables) {
    out << "\n[" << t.name << "]\n";
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    std::vector<std::vector<std::string>> text;
    for (const auto& r : t.rows) {
      std::vector<std::string> line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        line.push_back(cell(r[i], false));
        if (i < width.size()) width[i] = std::max(width[i], line.back().size());
      }
      text.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
      for (std::size_t i = 0; i < line.size(); ++i) {
        const std::size_t w = i < width.size() ? width[i] : 0;
        out << (i ? "  " : "") << line[i] << std::string(w > line[i].size() ? w - line[i].size() : 0, ' ');
      }
      out << "\n";
    };
    emit(t.columns);
    for (const auto& line : text) emit(line);
  }
  out << "\nwarnings: ";
  if (warnings.empty()) out << "none";
  for (std::size_t i = 0; i < warnings.size(); ++i) out << (i ? ", " : "") << warnings[i];
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", wall_time_s);
  out << "\nwall time: " << buf << " s\n";
}

}  // namespace expfunc::cli
