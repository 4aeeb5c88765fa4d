#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "iterboot/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"iterboot: iterated-bootstrap bias reduction experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::optional<unsigned> threads;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out-dir", out_dir, "Directory for output files");
  run->add_option("--threads", threads, "Worker threads (default: $ITERBOOT_THREADS or 1)");

  std::string csv_path, svg_path;
  auto* report = app.add_subcommand("report", "Render an RMSE-vs-n chart from a results CSV");
  report->add_option("csv", csv_path, "CSV written by 'run'")->required();
  report->add_option("--svg", svg_path, "Output SVG path")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the fast deterministic identity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : iterboot::cli::kExitConfigError;
  }

  if (run->parsed())
    return iterboot::cli::cmd_run(config_path, out_dir, iterboot::cli::resolve_threads(threads), std::cout, std::cerr);
  if (report->parsed()) return iterboot::cli::cmd_report(csv_path, svg_path, std::cout, std::cerr);
  if (selftest->parsed()) return iterboot::cli::cmd_selftest(std::cout);
  return iterboot::cli::kExitConfigError;
}
