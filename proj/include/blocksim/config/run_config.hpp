// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blocksim/consensus/rules.hpp"

#include "json.hpp"

namespace blocksim::config {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything one run (or one grid) needs, loadable from a single JSON
// document. Unknown keys are rejected so a typo cannot silently fall back to
// a default, and the seed has no wall-clock fallback: reproducibility is
// opt-out-proof.
struct RunConfig {
  consensus::ConsensusRules rules;

  int n_nodes = 5;
  double duration = 3600;
  double hash_rate = 2.0;
  double latency = 0.05;
  double poll_interval = 30;
  double window_seconds = 60;
  std::optional<double> lottery_wait;  // default: four link latencies

  std::string data_path = "data/sensors.csv";
  std::string out_dir = "out";
  std::optional<std::uint64_t> rng_seed;
  std::optional<double> threshold;      // overrides the percentile rule
  double threshold_percentile = 75;
  bool trace = false;
  bool grid = false;
  std::vector<std::pair<int, double>> fault_plan;

  std::vector<consensus::Method> grid_methods{consensus::Method::pow, consensus::Method::pos,
                                              consensus::Method::dpow, consensus::Method::ppokw};
  std::vector<int> grid_sizes{5, 10, 20, 40};

  double resolved_lottery_wait() const { return lottery_wait ? *lottery_wait : 4 * latency; }

  // Throws ConfigError on any out-of-range or missing-but-required field.
  void validate() const;

  // The fully resolved document embedded in every run artifact.
  nlohmann::json to_json() const;
};

// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::string> consensus;
  std::optional<int> nodes;
  std::optional<double> duration;
  std::optional<unsigned> difficulty;
  std::optional<std::string> data;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool trace = false;
  bool grid = false;
};

RunConfig load_config(const std::string& path);
void apply_overrides(RunConfig& cfg, const Overrides& o);

// "3/4", "3", 3, 0.75 all parse; exact decimals only (scale 1e9 max).
consensus::Rational parse_rational(const nlohmann::json& v, const std::string& key);

}  // namespace blocksim::config
