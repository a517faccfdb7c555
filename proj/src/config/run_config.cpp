// SPDX-License-Identifier: Apache-2.0
#include "blocksim/config/run_config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

namespace blocksim::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail("\"" + key + "\" must be a number");
  return v.get<double>();
}

std::uint64_t as_u64(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) fail("\"" + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) fail("\"" + key + "\" must be an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail("\"" + key + "\" must be a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail("\"" + key + "\" must be true or false");
  return v.get<bool>();
}

consensus::Method as_method(const json& v, const std::string& key) {
  const auto m = consensus::method_from_string(as_string(v, key));
  if (!m) fail("\"" + key + "\" must be one of pow, pos, dpow, ppokw");
  return *m;
}

consensus::Rational reduce(std::uint64_t num, std::uint64_t den) {
  const auto g = std::gcd(num, den);
  return {g == 0 ? num : num / g, g == 0 ? den : den / g};
}

}  // namespace

consensus::Rational parse_rational(const json& v, const std::string& key) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        return {std::stoull(s), 1};
      }
      const auto num = std::stoull(s.substr(0, slash));
      const auto den = std::stoull(s.substr(slash + 1));
      if (den == 0) fail("\"" + key + "\": zero denominator");
      return reduce(num, den);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail("\"" + key + "\": cannot parse \"" + s + "\" as a fraction");
    }
  }
  if (v.is_number_unsigned() || v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) fail("\"" + key + "\" must not be negative");
    return {static_cast<std::uint64_t>(i), 1};
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d < 0) fail("\"" + key + "\" must not be negative");
    constexpr std::uint64_t kScale = 1000000000;
    const double scaled = d * static_cast<double>(kScale);
    const auto num = static_cast<std::uint64_t>(std::llround(scaled));
    if (std::abs(scaled - static_cast<double>(num)) > 1e-6) {
      fail("\"" + key + "\": " + std::to_string(d) + " is not an exact decimal");
    }
    return reduce(num, kScale);
  }
  fail("\"" + key + "\" must be a fraction string or a number");
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail("config " + path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) fail("config " + path + " must be a JSON object");

  RunConfig cfg;
  for (const auto& [key, v] : doc.items()) {
    if (key == "method") {
      cfg.rules.method = as_method(v, key);
    } else if (key == "nodes") {
      cfg.n_nodes = as_int(v, key);
    } else if (key == "duration") {
      cfg.duration = as_number(v, key);
    } else if (key == "difficulty") {
      cfg.rules.difficulty_nibbles = static_cast<unsigned>(as_u64(v, key));
    } else if (key == "hash_rate") {
      cfg.hash_rate = as_number(v, key);
    } else if (key == "latency") {
      cfg.latency = as_number(v, key);
    } else if (key == "poll_interval") {
      cfg.poll_interval = as_number(v, key);
    } else if (key == "window") {
      cfg.window_seconds = as_number(v, key);
    } else if (key == "lottery_wait") {
      cfg.lottery_wait = as_number(v, key);
    } else if (key == "data") {
      cfg.data_path = as_string(v, key);
    } else if (key == "out") {
      cfg.out_dir = as_string(v, key);
    } else if (key == "seed") {
      cfg.rng_seed = as_u64(v, key);
    } else if (key == "threshold") {
      cfg.threshold = as_number(v, key);
    } else if (key == "threshold_percentile") {
      cfg.threshold_percentile = as_number(v, key);
    } else if (key == "trace") {
      cfg.trace = as_bool(v, key);
    } else if (key == "grid") {
      cfg.grid = as_bool(v, key);
    } else if (key == "fault_plan") {
      if (!v.is_array()) fail("\"fault_plan\" must be an array");
      for (const auto& entry : v) {
        if (!entry.is_object() || !entry.contains("node") || !entry.contains("at") ||
            entry.size() != 2) {
          fail("\"fault_plan\" entries must be {\"node\": N, \"at\": SECONDS}");
        }
        cfg.fault_plan.emplace_back(as_int(entry["node"], "fault_plan.node"),
                                    as_number(entry["at"], "fault_plan.at"));
      }
    } else if (key == "block_reward") {
      cfg.rules.block_reward = as_u64(v, key);
    } else if (key == "max_obs_per_block") {
      cfg.rules.max_obs_per_block = as_u64(v, key);
    } else if (key == "prune_depth") {
      cfg.rules.prune_depth = as_u64(v, key);
    } else if (key == "endowment") {
      cfg.rules.initial_endowment = as_u64(v, key);
    } else if (key == "slice_seconds") {
      cfg.rules.slice_seconds = as_u64(v, key);
    } else if (key == "alpha") {
      cfg.rules.pos_alpha = parse_rational(v, key);
    } else if (key == "sortition_threshold") {
      cfg.rules.sortition_threshold = parse_rational(v, key);
    } else if (key == "committee_fraction") {
      cfg.rules.committee_fraction = parse_rational(v, key);
    } else if (key == "committee_scaled_target") {
      cfg.rules.committee_scaled_target = as_bool(v, key);
    } else if (key == "ban_window") {
      cfg.rules.ban_window = as_u64(v, key);
    } else if (key == "allow_empty_blocks") {
      cfg.rules.allow_empty_blocks = as_bool(v, key);
    } else if (key == "grid_methods") {
      if (!v.is_array() || v.empty()) fail("\"grid_methods\" must be a non-empty array");
      cfg.grid_methods.clear();
      for (const auto& entry : v) cfg.grid_methods.push_back(as_method(entry, "grid_methods"));
    } else if (key == "grid_sizes") {
      if (!v.is_array() || v.empty()) fail("\"grid_sizes\" must be a non-empty array");
      cfg.grid_sizes.clear();
      for (const auto& entry : v) cfg.grid_sizes.push_back(as_int(entry, "grid_sizes"));
    } else {
      fail("unknown config key \"" + key + "\"");
    }
  }
  return cfg;
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.consensus) {
    const auto m = consensus::method_from_string(*o.consensus);
    if (!m) fail("--consensus must be one of pow, pos, dpow, ppokw");
    cfg.rules.method = *m;
  }
  if (o.nodes) cfg.n_nodes = *o.nodes;
  if (o.duration) cfg.duration = *o.duration;
  if (o.difficulty) cfg.rules.difficulty_nibbles = *o.difficulty;
  if (o.data) cfg.data_path = *o.data;
  if (o.threshold) cfg.threshold = *o.threshold;
  if (o.seed) cfg.rng_seed = *o.seed;
  if (o.out) cfg.out_dir = *o.out;
  if (o.trace) cfg.trace = true;
  if (o.grid) cfg.grid = true;
}

void RunConfig::validate() const {
  if (!rng_seed) fail("\"seed\" is required: runs have no wall-clock default");
  if (n_nodes < 1) fail("\"nodes\" must be at least 1");
  if (!(duration > 0)) fail("\"duration\" must be positive");
  if (!(hash_rate > 0)) fail("\"hash_rate\" must be positive");
  if (latency < 0) fail("\"latency\" must not be negative");
  if (!(poll_interval > 0)) fail("\"poll_interval\" must be positive");
  if (!(window_seconds > 0)) fail("\"window\" must be positive");
  if (lottery_wait && !(*lottery_wait > 0)) fail("\"lottery_wait\" must be positive");
  if (rules.difficulty_nibbles < 1 || rules.difficulty_nibbles > 16) {
    fail("\"difficulty\" must be between 1 and 16 nibbles");
  }
  if (rules.max_obs_per_block < 2) fail("\"max_obs_per_block\" must be at least 2");
  if (rules.prune_depth < 1) fail("\"prune_depth\" must be at least 1");
  if (rules.slice_seconds < 1) fail("\"slice_seconds\" must be at least 1");
  if (rules.initial_endowment < 1) fail("\"endowment\" must be at least 1");
  if (rules.pos_alpha.den == 0) fail("\"alpha\" must have a nonzero denominator");
  if (rules.sortition_threshold.num == 0 ||
      rules.sortition_threshold.num > rules.sortition_threshold.den) {
    fail("\"sortition_threshold\" must be a probability in (0, 1]");
  }
  if (rules.committee_fraction.num == 0 ||
      rules.committee_fraction.num > rules.committee_fraction.den) {
    fail("\"committee_fraction\" must be a fraction in (0, 1]");
  }
  if (threshold_percentile < 0 || threshold_percentile > 100) {
    fail("\"threshold_percentile\" must be within [0, 100]");
  }
  for (const auto& [node, at] : fault_plan) {
    if (node < 0 || node >= n_nodes) fail("\"fault_plan\" names a node outside the cluster");
    if (at < 0) fail("\"fault_plan\" activation times must not be negative");
  }
  const auto check_cell = [&](consensus::Method m, int n) {
    if (m == consensus::Method::ppokw && static_cast<std::uint64_t>(n) <= rules.ban_window) {
      fail("ppokw needs more nodes than ban_window (" + std::to_string(rules.ban_window) +
           "), otherwise the creator ban starves the cluster");
    }
  };
  if (grid) {
    std::set<int> seen;
    for (int n : grid_sizes) {
      if (n < 1) fail("\"grid_sizes\" must all be at least 1");
      if (!seen.insert(n).second) fail("\"grid_sizes\" must be distinct");
      for (auto m : grid_methods) check_cell(m, n);
    }
  } else {
    check_cell(rules.method, n_nodes);
  }
}

nlohmann::json RunConfig::to_json() const {
  const auto frac = [](consensus::Rational r) {
    return std::to_string(r.num) + "/" + std::to_string(r.den);
  };
  json doc{
      {"method", consensus::to_string(rules.method)},
      {"nodes", n_nodes},
      {"duration", duration},
      {"difficulty", rules.difficulty_nibbles},
      {"hash_rate", hash_rate},
      {"latency", latency},
      {"poll_interval", poll_interval},
      {"window", window_seconds},
      {"lottery_wait", resolved_lottery_wait()},
      {"data", data_path},
      {"seed", rng_seed ? *rng_seed : 0},
      {"threshold_percentile", threshold_percentile},
      {"trace", trace},
      {"block_reward", rules.block_reward},
      {"max_obs_per_block", rules.max_obs_per_block},
      {"prune_depth", rules.prune_depth},
      {"endowment", rules.initial_endowment},
      {"slice_seconds", rules.slice_seconds},
      {"alpha", frac(rules.pos_alpha)},
      {"sortition_threshold", frac(rules.sortition_threshold)},
      {"committee_fraction", frac(rules.committee_fraction)},
      {"committee_scaled_target", rules.committee_scaled_target},
      {"ban_window", rules.ban_window},
      {"allow_empty_blocks", rules.allow_empty_blocks},
  };
  if (threshold) doc["threshold"] = *threshold;
  if (!fault_plan.empty()) {
    json arr = json::array();
    for (const auto& [node, at] : fault_plan) arr.push_back({{"node", node}, {"at", at}});
    doc["fault_plan"] = arr;
  }
  return doc;
}

}  // namespace blocksim::config
