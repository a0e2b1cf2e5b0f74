// qcausal <command> --config <path> [--out <path>] [--seed N] [--csv <path>] [--timing]
//
// Exit status: 0 success, 1 computational failure, 2 configuration error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qcausal/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential-measurement and causal-structure simulator"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all");

  std::string config_path;
  std::string out_path;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
  bool timing = false;

  for (const auto& name : qcausal::cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "scenario file (JSON)")->required();
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--seed", seed, "override the scenario seed");
    if (name == "signaling") sub->add_option("--csv", csv_path, "write the time series as CSV");
    sub->add_flag("--timing", timing, "include wall-clock timing in the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  qcausal::cli::RunReport report;
  try {
    const auto start = std::chrono::steady_clock::now();
    report = qcausal::cli::run_command(command, qcausal::cli::load_config(config_path), seed);
    if (timing) {
      report.timing_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
  } catch (const qcausal::cli::ConfigError& e) {
    std::cerr << "qcausal: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "qcausal: " << command << " failed: " << e.what() << '\n';
    return kExitFailure;
  }

  const std::string text = report.to_json().dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else if (!write_file(out_path, text)) {
    std::cerr << "qcausal: cannot write " << out_path << '\n';
    return kExitFailure;
  }
  if (!csv_path.empty() && !write_file(csv_path, qcausal::cli::signaling_csv(report))) {
    std::cerr << "qcausal: cannot write " << csv_path << '\n';
    return kExitFailure;
  }
  if (!report.ok) {
    std::cerr << "qcausal: " << command << ": a verified property failed (see report)\n";
    return kExitFailure;
  }
  return kExitOk;
}
