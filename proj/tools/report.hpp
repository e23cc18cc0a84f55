#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace mmslab::cli {

using json = nlohmann::ordered_json;

// Tabular section written by --csv.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Report {
  std::string command;
  std::string paper_anchor;
  json inputs = json::object();
  json results = json::object();
  Table table;
  bool inconclusive = false;
};

// Rounds every floating-point number to 12 significant digits.
json round_numbers(const json& value);

std::string render_report(const Report& report);
std::string render_error(const std::string& command, const std::string& code,
                         const std::string& message);
std::string render_csv(const Table& table);

// Throws mmslab::Error(kIo) if the file cannot be written.
void write_text(const std::string& path, const std::string& text);

}  // namespace mmslab::cli
