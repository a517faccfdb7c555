// SPDX-License-Identifier: Apache-2.0
#include "blocksim/monitor/monitor.hpp"

#include <cstdio>
#include <ostream>

namespace blocksim::monitor {

namespace {

int side(double x) { return (x > 0) - (x < 0); }

}  // namespace

NodeMonitor::NodeMonitor(std::string self_label, double threshold,
                         std::set<std::string> monitored)
    : self_(std::move(self_label)), threshold_(threshold), monitored_(std::move(monitored)) {}

void NodeMonitor::observe(const std::string& sensor_id, double temperature) {
  own_latest_[sensor_id] = temperature;
}

double NodeMonitor::local_value() const {
  double sum = 0;
  for (const auto& [id, v] : own_latest_) sum += v;
  return own_latest_.empty() ? 0 : sum / static_cast<double>(own_latest_.size());
}

void NodeMonitor::apply_block(const core::Block& b) {
  for (const auto& o : b.observations) {
    if (o.kind != core::ObsKind::sensor_reading) continue;
    if (monitored_.count(o.sensor_id) == 0) continue;
    synced_[o.sensor_id] = o.value;
  }
}

double NodeMonitor::estimate() const {
  double sum = 0;
  for (const auto& [id, v] : synced_) sum += v;
  return synced_.empty() ? 0 : sum / static_cast<double>(synced_.size());
}

NodeMonitor::Check NodeMonitor::check() const {
  if (!covered() || !has_value() || !self_synced()) return Check::idle;
  double e = estimate();
  double u = e + (local_value() - synced_.at(self_));
  if (side(u - threshold_) != side(e - threshold_) || u == threshold_) {
    return Check::violation;
  }
  return Check::safe;
}

std::vector<Crossing> detect_global_event(const std::vector<const core::StoredBlock*>& chain,
                                          double threshold,
                                          const std::set<std::string>& monitored) {
  std::vector<Crossing> events;
  std::map<std::string, double> synced;
  bool have_side = false;
  int prev = 0;

  for (const auto* sb : chain) {
    for (const auto& o : sb->block.observations) {
      if (o.kind != core::ObsKind::sensor_reading) continue;
      if (monitored.count(o.sensor_id) == 0) continue;
      synced[o.sensor_id] = o.value;
    }
    if (synced.size() != monitored.size()) continue;

    double sum = 0;
    for (const auto& [id, v] : synced) sum += v;
    double e = sum / static_cast<double>(synced.size());
    int s = side(e - threshold);
    if (have_side && s != prev) {
      events.push_back(Crossing{sb->block.timestamp, s > prev ? +1 : -1, e});
    }
    have_side = true;
    prev = s;
  }
  return events;
}

void write_events_csv(std::ostream& os, const std::vector<Crossing>& events) {
  char buf[64];
  os << "sim_time,direction,estimate\n";
  for (const auto& ev : events) {
    std::snprintf(buf, sizeof(buf), "%.6f", ev.estimate);
    os << ev.sim_time << ',' << (ev.direction > 0 ? "up" : "down") << ',' << buf << '\n';
  }
}

}  // namespace blocksim::monitor
