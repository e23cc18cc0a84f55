#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mmslab/error.hpp"

namespace mmslab::cli {
namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

json versions() {
  return json{{"mms-lab", kVersion}, {"schema", kSchemaVersion}};
}

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    return quoted + "\"";
  }
  return round_numbers(v).dump();
}

}  // namespace

json round_numbers(const json& value) {
  if (value.is_number_float()) {
    const double v = value.get<double>();
    if (!std::isfinite(v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;  // no negative zero
  }
  if (value.is_array() || value.is_object()) {
    json out = value;
    for (auto it = out.begin(); it != out.end(); ++it) *it = round_numbers(*it);
    return out;
  }
  return value;
}

std::string render_report(const Report& report) {
  json doc;
  doc["command"] = report.command;
  doc["versions"] = versions();
  doc["paper_anchor"] = report.paper_anchor;
  doc["inputs"] = report.inputs;
  doc["results"] = report.results;
  doc["inconclusive"] = report.inconclusive;
  return round_numbers(doc).dump(2) + "\n";
}

std::string render_error(const std::string& command, const std::string& code,
                         const std::string& message) {
  json doc;
  doc["command"] = command;
  doc["versions"] = versions();
  doc["error"] = {{"code", code}, {"message", message}};
  return doc.dump(2) + "\n";
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out += (c ? "," : "") + table.columns[c];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += (c ? "," : "") + csv_cell(row[c]);
    }
    out += "\n";
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorCode::kIo, "failed writing " + path);
}

}  // namespace mmslab::cli
