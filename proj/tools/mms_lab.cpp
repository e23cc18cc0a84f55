#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "mmslab/error.hpp"

namespace mmslab::cli {

void begin(Context& ctx, const std::string& command, const std::string& anchor) {
  ctx.ran = true;
  ctx.report.command = command;
  ctx.report.paper_anchor = anchor;
}

namespace {

int emit_error(const Context& ctx, const std::string& code, const std::string& message) {
  const std::string text = render_error(ctx.report.command, code, message);
  std::cout << text;
  if (!ctx.global.report_path.empty()) {
    try {
      write_text(ctx.global.report_path, text);
    } catch (const Error&) {
      // The error object already went to stdout.
    }
  }
  return 1;
}

}  // namespace
}  // namespace mmslab::cli

int main(int argc, char** argv) {
  using namespace mmslab::cli;
  Context ctx;
  CLI::App app{"mms-lab: finite metric measure space laboratory"};
  app.require_subcommand(1);
  app.add_option("--report", ctx.global.report_path, "Write the JSON report here (default stdout)");
  app.add_option("--csv", ctx.global.csv_path, "Write the tabular section as CSV");
  app.add_flag("--strict", ctx.global.strict, "Exit 2 on inconclusive verdicts");
  app.add_option("--seed", ctx.global.seed, "Seed for randomized instances");
  app.fallthrough();

  add_space_commands(app, ctx);
  add_ot_commands(app, ctx);
  add_mcp_commands(app, ctx);
  add_iso_commands(app, ctx);
  add_gh_commands(app, ctx);

  json args = json::array();
  for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return emit_error(ctx, "usage", e.what());
  } catch (const mmslab::Error& e) {
    return emit_error(ctx, std::string(mmslab::to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return emit_error(ctx, "internal", e.what());
  }
  if (!ctx.ran) return emit_error(ctx, "usage", "no command ran");

  ctx.report.inputs["args"] = args;
  ctx.report.inputs["seed"] = ctx.global.seed;
  try {
    const std::string text = render_report(ctx.report);
    if (ctx.global.report_path.empty()) {
      std::cout << text;
    } else {
      write_text(ctx.global.report_path, text);
    }
    if (!ctx.global.csv_path.empty()) write_text(ctx.global.csv_path, render_csv(ctx.report.table));
  } catch (const mmslab::Error& e) {
    return emit_error(ctx, std::string(mmslab::to_string(e.code())), e.what());
  }
  return ctx.global.strict && ctx.report.inconclusive ? 2 : 0;
}
