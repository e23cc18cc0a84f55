#pragma once

#include <string>

#include "CLI11.hpp"
#include "report.hpp"

namespace mmslab::cli {

struct GlobalOptions {
  std::string report_path;
  std::string csv_path;
  bool strict = false;
  unsigned long long seed = 0;
};

// Filled by the subcommand callbacks; main renders it.
struct Context {
  GlobalOptions global;
  Report report;
  bool ran = false;
};

void add_space_commands(CLI::App& app, Context& ctx);
void add_ot_commands(CLI::App& app, Context& ctx);
void add_mcp_commands(CLI::App& app, Context& ctx);
void add_iso_commands(CLI::App& app, Context& ctx);
void add_gh_commands(CLI::App& app, Context& ctx);

// Marks the report as belonging to `command` and records the space file.
void begin(Context& ctx, const std::string& command, const std::string& anchor);

}  // namespace mmslab::cli
