// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace blocksim::monitor {

struct SensorRow {
  std::string sensor_id;
  std::uint64_t t = 0;  // simulated seconds, normalized to the earliest row
  double temperature = 0;
};

struct IngestError {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string what;
};

struct StreamSet {
  // All readings, ordered by (t, input order).
  std::vector<SensorRow> rows;
  // Sensors in first-appearance order; their index is the round-robin key.
  std::vector<std::string> sensors;
  std::map<std::string, int> sensor_node;
  std::set<int> monitored_nodes;

  bool empty() const { return rows.empty(); }
};

// Reads `sensor_id,timestamp,temperature` CSV. Timestamps are either plain
// integer seconds or ISO-8601 UTC (offsets allowed); they must be strictly
// increasing per sensor. Sensors are dealt round-robin onto nodes in
// first-appearance order.
std::variant<StreamSet, IngestError> ingest_csv(const std::string& path, int n_nodes);

// Nearest-rank percentile of all temperatures; the default event threshold is
// the 75th so bundled data actually crosses it.
double temperature_percentile(const StreamSet& streams, double pct);

}  // namespace blocksim::monitor
