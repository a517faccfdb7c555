// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace blocksim::metrics {

// Wire taxonomy for the communication counters. Indices are stable: they fix
// the CSV column order and the summary row names.
enum class Wire : std::uint8_t {
  data_request = 0,
  data_response,
  transaction,
  block_announce,
  lottery_announce,
  lottery_verify,
};
inline constexpr std::size_t kWireCount = 6;
const char* to_string(Wire w);

enum class Dir : std::uint8_t { out, in };

struct WindowRow {
  double window_start = 0;
  double window_end = 0;
  std::array<std::uint64_t, kWireCount> msgs_out{};
  std::array<std::uint64_t, kWireCount> msgs_in{};
  std::array<std::uint64_t, kWireCount> bytes_out{};
  std::array<std::uint64_t, kWireCount> bytes_in{};
  std::uint64_t blocks_created = 0;
  std::uint64_t blocks_total = 0;
  double mining_time = 0;   // seconds spent hashing
  double block_time = 0;    // mean canonical inter-block gap, by block timestamp
  std::uint64_t memory_bytes = 0;
  std::uint64_t cpu_attempts = 0;
};

// One node's counters, kept per fixed-length window over the run. All event
// hooks are O(1); block_time is derived once at finalize from the node's
// final canonical chain.
class MetricsSink {
 public:
  MetricsSink(std::string node_label, double window_seconds, double duration);

  void on_message(Dir d, Wire w, std::size_t bytes, double t);
  void on_mining(std::uint64_t attempts, double seconds, double t);
  void on_block_stored(bool own, double t);
  void on_memory_sample(std::uint64_t bytes, double t);

  // Distributes canonical inter-block gaps into windows by the timestamp of
  // the later block of each pair. Call once, after the run.
  void finalize(const std::vector<std::uint64_t>& canonical_timestamps);

  const std::vector<WindowRow>& rows() const { return rows_; }
  const std::string& label() const { return label_; }

  void write_csv(std::ostream& os) const;
  static void write_csv_header(std::ostream& os);

  struct Totals {
    std::uint64_t msgs_out = 0, msgs_in = 0;
    std::uint64_t bytes_out = 0, bytes_in = 0;
    std::array<std::uint64_t, kWireCount> bytes_out_by_wire{};
    std::uint64_t blocks_created = 0, blocks_total = 0;
    double mining_time = 0;
    std::uint64_t cpu_attempts = 0;
    std::uint64_t memory_final = 0;
  };
  Totals totals() const;

 private:
  WindowRow& row_at(double t);

  std::string label_;
  double window_;
  double duration_;
  std::vector<WindowRow> rows_;
};

// One averaged value per (method, cluster size, metric): the shape the
// cross-method comparison tables are built from.
struct SummaryRow {
  std::string method;
  int n_nodes = 0;
  std::string metric;
  double mean = 0;
};

// Node totals -> summary rows, sorted by metric name. chain_block_time is the
// chain-derived mean interval (identical across nodes by agreement).
std::vector<SummaryRow> summarize(const std::string& method, int n_nodes,
                                  const std::vector<MetricsSink::Totals>& nodes,
                                  double chain_block_time);

}  // namespace blocksim::metrics
