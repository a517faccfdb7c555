// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: a config file plus a handful of overriding flags,
// handed to runner::execute. Exit codes: 0 ok, 2 config error, 3 data error,
// 4 invariant violation.
#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "blocksim/config/run_config.hpp"
#include "blocksim/runner/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "blocksim: deterministic comparison of consensus methods on a "
      "threshold-monitoring sensor workload"};

  std::string config_path;
  blocksim::config::Overrides ov;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--consensus", ov.consensus, "Consensus method")
      ->check(CLI::IsMember({"pow", "pos", "dpow", "ppokw"}));
  app.add_option("--nodes", ov.nodes, "Cluster size");
  app.add_option("--duration", ov.duration, "Simulated seconds");
  app.add_option("--difficulty", ov.difficulty, "Leading zero nibbles required of a block hash");
  app.add_option("--data", ov.data, "Sensor readings CSV");
  app.add_option("--threshold", ov.threshold,
                 "Event threshold in degrees Celsius (default: 75th percentile of the data)");
  app.add_option("--seed", ov.seed, "Run seed (required here or in the config)");
  app.add_option("--out", ov.out, "Artifact directory");
  app.add_flag("--grid", ov.grid, "Run the full method-by-size grid");
  app.add_flag("--trace", ov.trace, "Write the full event trace (trace.jsonl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return blocksim::runner::exit_config_error;
  }

  blocksim::config::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = blocksim::config::load_config(config_path);
    blocksim::config::apply_overrides(cfg, ov);
  } catch (const blocksim::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return blocksim::runner::exit_config_error;
  }

  return blocksim::runner::execute(std::move(cfg), std::cout, std::cerr);
}
