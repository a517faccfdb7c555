// SPDX-License-Identifier: Apache-2.0
#include "blocksim/runner/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <tuple>
#include <variant>

#include "blocksim/core/block.hpp"
#include "blocksim/core/bytes.hpp"
#include "blocksim/metrics/metrics.hpp"
#include "blocksim/monitor/ingest.hpp"
#include "blocksim/sim/simulation.hpp"

namespace blocksim::runner {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json obs_json(const core::Observation& o) {
  json j{{"kind", core::to_string(o.kind)}, {"id", o.sensor_id}, {"t", o.sim_time}};
  if (o.kind == core::ObsKind::sensor_reading) {
    j["value"] = o.value;
  } else {
    j["amount"] = o.amount;
  }
  return j;
}

json proof_json(const core::ProofMeta& p) {
  if (const auto* stake = std::get_if<core::StakeMeta>(&p)) {
    return {{"type", "stake"}, {"investment", stake->investment}};
  }
  if (const auto* sortition = std::get_if<core::SortitionMeta>(&p)) {
    return {{"type", "sortition"},
            {"round", sortition->round},
            {"threshold", std::to_string(sortition->threshold_num) + "/" +
                              std::to_string(sortition->threshold_den)},
            {"y", core::to_hex(sortition->y)},
            {"eval", core::to_hex(sortition->proof_eval)},
            {"bind", core::to_hex(sortition->proof_bind)},
            {"seed", core::to_hex(sortition->seed_used)}};
  }
  return {{"type", "none"}};
}

void write_chain_jsonl(const sim::NodeRuntime& node, const fs::path& path) {
  std::ofstream os(path);
  for (const auto* sb : node.chain().canonical_path()) {
    json j{{"height", sb->block.height},
           {"digest", core::to_hex(sb->digest)},
           {"prev", core::to_hex(sb->block.prev_hash)},
           {"timestamp", sb->block.timestamp},
           {"miner", sb->block.miner_id},
           {"nonce", sb->block.nonce},
           {"bytes", sb->bytes},
           {"proof", proof_json(sb->block.proof)}};
    json obs = json::array();
    for (const auto& o : sb->block.observations) obs.push_back(obs_json(o));
    j["observations"] = std::move(obs);
    os << j.dump() << '\n';
  }
}

struct CellOutcome {
  bool ok = false;
  int code = exit_ok;
  std::string error;
  std::vector<metrics::SummaryRow> rows;
  std::uint64_t head_height = 0;
  std::size_t event_count = 0;
  double block_time = 0;
};

CellOutcome run_one(const config::RunConfig& cfg, const fs::path& dir) {
  CellOutcome outcome;

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    outcome.code = exit_config_error;
    outcome.error = "cannot create output directory " + dir.string() + ": " + ec.message();
    return outcome;
  }

  auto ingested = monitor::ingest_csv(cfg.data_path, cfg.n_nodes);
  if (const auto* e = std::get_if<monitor::IngestError>(&ingested)) {
    outcome.code = exit_data_error;
    outcome.error = cfg.data_path + ":" + std::to_string(e->line) + ": " + e->what;
    return outcome;
  }
  const auto& streams = std::get<monitor::StreamSet>(ingested);
  if (streams.empty()) {
    outcome.code = exit_config_error;
    outcome.error = "no sensor readings in " + cfg.data_path;
    return outcome;
  }

  sim::SimParams params;
  params.rules = cfg.rules;
  params.n_nodes = cfg.n_nodes;
  params.duration = cfg.duration;
  params.latency = cfg.latency;
  params.hash_rate = cfg.hash_rate;
  params.poll_interval = cfg.poll_interval;
  params.window_seconds = cfg.window_seconds;
  params.lottery_wait = cfg.resolved_lottery_wait();
  params.rng_seed = *cfg.rng_seed;
  params.event_threshold = cfg.threshold
                               ? *cfg.threshold
                               : monitor::temperature_percentile(streams, cfg.threshold_percentile);
  params.fault_plan = cfg.fault_plan;
  if (cfg.trace) params.trace_path = (dir / "trace.jsonl").string();

  sim::Simulation simulation(std::move(params), streams);
  sim::RunResult result;
  try {
    result = simulation.run();
  } catch (const sim::InvariantError& e) {
    std::ofstream dump(dir / "trace_dump.jsonl");
    simulation.dump_recent_events(dump);
    outcome.code = exit_invariant;
    outcome.error = std::string(e.what()) + " (event trace in " +
                    (dir / "trace_dump.jsonl").string() + ")";
    return outcome;
  }

  const auto& nodes = simulation.nodes();
  std::vector<metrics::MetricsSink::Totals> totals;
  totals.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    write_chain_jsonl(*nodes[i], dir / ("chain_" + std::to_string(i) + ".jsonl"));
    std::ofstream csv(dir / ("metrics_" + std::to_string(i) + ".csv"));
    metrics::MetricsSink::write_csv_header(csv);
    nodes[i]->metrics().write_csv(csv);
    totals.push_back(nodes[i]->metrics().totals());
  }
  {
    std::ofstream events_csv(dir / "events.csv");
    monitor::write_events_csv(events_csv, result.events);
  }

  outcome.rows = metrics::summarize(consensus::to_string(cfg.rules.method), cfg.n_nodes, totals,
                                    result.chain_block_time);

  json summary{{"config", cfg.to_json()},
               {"method", consensus::to_string(cfg.rules.method)},
               {"n_nodes", cfg.n_nodes},
               {"seed", *cfg.rng_seed},
               {"threshold", params.event_threshold},
               {"chain", json{{"height", result.head_height},
                              {"weight_bytes", result.chain_weight_bytes},
                              {"block_time", result.chain_block_time}}},
               {"events", result.events.size()}};
  json rows = json::array();
  for (const auto& r : outcome.rows) {
    rows.push_back(
        {{"method", r.method}, {"n_nodes", r.n_nodes}, {"metric", r.metric}, {"mean", r.mean}});
  }
  summary["rows"] = std::move(rows);
  std::ofstream sj(dir / "summary.json");
  sj << summary.dump(2) << '\n';

  outcome.ok = true;
  outcome.head_height = result.head_height;
  outcome.event_count = result.events.size();
  outcome.block_time = result.chain_block_time;
  return outcome;
}

int run_grid(const config::RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    err << "config error: cannot create output directory " << cfg.out_dir << '\n';
    return exit_config_error;
  }

  const std::uint64_t base_seed = *cfg.rng_seed;
  json cells = json::array();
  std::vector<metrics::SummaryRow> all_rows;
  int worst = exit_ok;
  std::uint64_t index = 0;

  for (const auto method : cfg.grid_methods) {
    for (const int n : cfg.grid_sizes) {
      config::RunConfig cell = cfg;
      cell.grid = false;
      cell.rules.method = method;
      cell.n_nodes = n;
      cell.rng_seed = base_seed + index;
      const std::string name =
          std::string(consensus::to_string(method)) + "_n" + std::to_string(n);
      cell.out_dir = (fs::path(cfg.out_dir) / name).string();

      const auto outcome = run_one(cell, cell.out_dir);
      json c{{"method", consensus::to_string(method)},
             {"n_nodes", n},
             {"seed", *cell.rng_seed},
             {"dir", name},
             {"exit", outcome.ok ? exit_ok : outcome.code}};
      if (outcome.ok) {
        all_rows.insert(all_rows.end(), outcome.rows.begin(), outcome.rows.end());
        out << name << ": height " << outcome.head_height << ", " << outcome.event_count
            << " events\n";
      } else {
        c["error"] = outcome.error;
        worst = std::max(worst, outcome.code);
        err << name << " failed: " << outcome.error << '\n';
      }
      cells.push_back(std::move(c));
      ++index;
    }
  }

  std::sort(all_rows.begin(), all_rows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.method, a.n_nodes, a.metric) < std::tie(b.method, b.n_nodes, b.metric);
  });

  json methods = json::array();
  for (const auto m : cfg.grid_methods) methods.push_back(consensus::to_string(m));
  json summary{
      {"grid", json{{"methods", std::move(methods)},
                    {"sizes", cfg.grid_sizes},
                    {"base_seed", base_seed}}},
      {"cells", std::move(cells)},
  };
  json rows = json::array();
  for (const auto& r : all_rows) {
    rows.push_back(
        {{"method", r.method}, {"n_nodes", r.n_nodes}, {"metric", r.metric}, {"mean", r.mean}});
  }
  summary["rows"] = std::move(rows);
  std::ofstream sj(fs::path(cfg.out_dir) / "summary.json");
  sj << summary.dump(2) << '\n';

  return worst;
}

}  // namespace

int execute(config::RunConfig cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const config::ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  }
  if (!fs::exists(cfg.data_path)) {
    err << "config error: data file not found: " << cfg.data_path << '\n';
    return exit_config_error;
  }

  if (cfg.grid) return run_grid(cfg, out, err);

  const auto outcome = run_one(cfg, cfg.out_dir);
  if (!outcome.ok) {
    const char* label = outcome.code == exit_data_error      ? "data error: "
                        : outcome.code == exit_config_error  ? "config error: "
                                                              : "invariant violation: ";
    err << label << outcome.error << '\n';
    return outcome.code;
  }
  out << consensus::to_string(cfg.rules.method) << " n=" << cfg.n_nodes << " seed=" << *cfg.rng_seed
      << ": height " << outcome.head_height << ", block_time " << outcome.block_time << "s, "
      << outcome.event_count << " events -> " << cfg.out_dir << '\n';
  return exit_ok;
}

}  // namespace blocksim::runner
