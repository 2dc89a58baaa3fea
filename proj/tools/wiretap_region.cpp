// Command-line front end: `sweep` writes boundary files, `verify` runs the
// invariant battery.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wiretap/cli.hpp"

namespace {

std::vector<double> parse_demands(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    out.push_back(v);
  }
  return out;
}

void add_common(CLI::App& cmd, wiretap::cli::RunManifest& m, std::vector<std::string>& eh) {
  cmd.add_option("--scenario", m.scenario_path, "Scenario JSON file")->required();
  cmd.add_option("--grid", m.grid, "Number of alpha samples (>= 2)");
  cmd.add_option("--oracle-res", m.oracle_resolution, "Grid-oracle resolution per axis (>= 11)");
  cmd.add_option("--eh", eh, "EH demand override \"a,b\"; repeat for several runs");
  cmd.add_option("--threads", m.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy and reliable rate regions of the wiretap interference channel with SWIPT"};
  app.require_subcommand(1);

  wiretap::cli::RunManifest manifest;
  std::vector<std::string> eh;
  std::string mode = "both";

  auto* sweep = app.add_subcommand("sweep", "Sweep the weight grid and write boundary, hull and report files");
  add_common(*sweep, manifest, eh);
  sweep->add_option("--mode", mode, "secure, reliable or both")
      ->check(CLI::IsMember({"secure", "reliable", "both"}));
  sweep->add_flag("--oracle", manifest.oracle, "Compare every point against the grid oracle");
  sweep->add_option("--out", manifest.output_dir, "Output directory");

  auto* verify = app.add_subcommand("verify", "Run the invariant checks and print a pass/fail table");
  add_common(*verify, manifest, eh);
  verify->add_option("--seed", manifest.seed, "Seed for random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wiretap::cli::kExitConfig;
  }

  try {
    for (const auto& text : eh) manifest.eh_overrides.push_back(parse_demands(text));
  } catch (const std::exception&) {
    std::cerr << "--eh expects comma-separated numbers\n";
    return wiretap::cli::kExitConfig;
  }
  manifest.mode = mode == "secure"     ? wiretap::cli::ModeSelection::Secure
                  : mode == "reliable" ? wiretap::cli::ModeSelection::Reliable
                                       : wiretap::cli::ModeSelection::Both;

  if (*sweep) return wiretap::cli::run_sweep(manifest, std::cout, std::cerr);
  return wiretap::cli::run_verify(manifest, std::cout, std::cerr);
}
