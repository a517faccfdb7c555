// SPDX-License-Identifier: Apache-2.0
#include "blocksim/sim/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <map>

namespace blocksim::sim {

Simulation::Simulation(SimParams params, const monitor::StreamSet& streams)
    : params_(std::move(params)) {
  const int n = params_.n_nodes;
  cluster_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cluster_.push_back("n" + std::to_string(i));
  for (int ordinal : streams.monitored_nodes) {
    if (ordinal >= 0 && ordinal < n) monitored_.insert(cluster_[static_cast<std::size_t>(ordinal)]);
  }

  for (int i = 0; i < n; ++i) {
    nodes_.push_back(std::make_unique<NodeRuntime>(i, cluster_[static_cast<std::size_t>(i)],
                                                   params_.rules, params_.rng_seed, cluster_,
                                                   params_.event_threshold, monitored_, *this));
  }

  // Key distribution happens before the run: every node knows every public
  // key, so a missing directory entry during the run is itself suspicious.
  std::map<std::string, core::Hash256> directory;
  for (const auto& node : nodes_) {
    if (const auto* pk = node->engine().public_key()) directory.emplace(node->label(), *pk);
  }
  if (!directory.empty()) {
    for (const auto& node : nodes_) node->engine().set_directory(directory);
  }

  for (const auto& [idx, at] : params_.fault_plan) {
    if (idx >= 0 && idx < n) nodes_[static_cast<std::size_t>(idx)]->set_fault(at);
  }

  for (const auto& row : streams.rows) {
    const auto t = static_cast<double>(row.t);
    if (t >= params_.duration) continue;
    const auto owner = streams.sensor_node.find(row.sensor_id);
    if (owner == streams.sensor_node.end() || owner->second >= n) continue;
    push(t, SensorEmit{owner->second, row.sensor_id, row.temperature});
  }

  if (n > 1 && params_.poll_interval > 0) {
    for (std::uint64_t k = 1;; ++k) {
      const double t = static_cast<double>(k) * params_.poll_interval;
      if (t >= params_.duration) break;
      for (int i = 0; i < n; ++i) push(t, PollTick{i, k});
    }
  }

  if (params_.window_seconds > 0 && params_.duration > 0) {
    const auto windows =
        static_cast<std::size_t>(std::ceil(params_.duration / params_.window_seconds));
    for (std::size_t w = 1; w <= windows; ++w) {
      const double t = std::min(static_cast<double>(w) * params_.window_seconds, params_.duration);
      push(t, WindowTick{w - 1});
    }
  }

  if (!params_.trace_path.empty()) trace_.emplace(params_.trace_path);
}

Simulation::~Simulation() = default;

void Simulation::push(double at, EventBody body) { heap_.push(Event{at, seq_++, std::move(body)}); }

void Simulation::send(int src, int dst, Payload payload, double now) {
  Message m;
  m.src = src;
  m.dst = dst;
  m.send_time = now;
  m.deliver_time = now + params_.latency;
  m.payload = std::move(payload);
  push(m.deliver_time, Deliver{std::move(m)});
}

void Simulation::broadcast(int src, Payload payload, double now) {
  for (int dst = 0; dst < params_.n_nodes; ++dst) {
    if (dst == src) continue;
    send(src, dst, payload, now);
  }
}

void Simulation::schedule_mining_slice(int node, double at, std::uint64_t race,
                                       std::uint64_t slice) {
  push(at, MiningSlice{node, race, slice});
}

void Simulation::schedule_block_found(int node, double at, std::uint64_t race) {
  push(at, BlockFound{node, race});
}

void Simulation::schedule_lottery_timeout(int node, double at, std::uint64_t race) {
  push(at, LotteryTimeout{node, race});
}

void Simulation::dispatch(const Event& ev) {
  const double now = ev.time;
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, Deliver>) {
          nodes_[static_cast<std::size_t>(body.msg.dst)]->on_message(body.msg, now);
        } else if constexpr (std::is_same_v<T, SensorEmit>) {
          nodes_[static_cast<std::size_t>(body.node)]->on_sensor_reading(body.sensor_id,
                                                                         body.value, now);
        } else if constexpr (std::is_same_v<T, PollTick>) {
          nodes_[static_cast<std::size_t>(body.node)]->on_poll_tick(body.tick, now);
        } else if constexpr (std::is_same_v<T, WindowTick>) {
          for (const auto& node : nodes_) node->on_window_tick(body.index, now);
        } else if constexpr (std::is_same_v<T, MiningSlice>) {
          nodes_[static_cast<std::size_t>(body.node)]->on_mining_slice(body.race, body.slice, now);
        } else if constexpr (std::is_same_v<T, BlockFound>) {
          nodes_[static_cast<std::size_t>(body.node)]->on_block_found(body.race, now);
        } else {
          nodes_[static_cast<std::size_t>(body.node)]->on_lottery_timeout(body.race, now);
        }
      },
      ev.body);
}

RunResult Simulation::run() {
  constexpr std::size_t kRecentCap = 4096;
  for (const auto& node : nodes_) node->start(0.0);

  while (!heap_.empty()) {
    recent_.push_back(heap_.top());
    heap_.pop();
    if (recent_.size() > kRecentCap) recent_.pop_front();
    const Event& ev = recent_.back();
    if (trace_) {
      char buf[192];
      format_event(ev, buf, sizeof(buf));
      *trace_ << buf << '\n';
    }
    dispatch(ev);
  }

  for (const auto& node : nodes_) node->finalize();
  check_agreement();
  check_conservation();

  RunResult result;
  const auto& chain = nodes_.at(0)->chain();
  result.head_height = chain.head_height();
  result.head_timestamp = chain.head().block.timestamp;
  result.chain_weight_bytes = chain.chain_weight_bytes();
  result.chain_block_time =
      result.head_height == 0
          ? 0.0
          : static_cast<double>(result.head_timestamp) / static_cast<double>(result.head_height);
  result.events =
      monitor::detect_global_event(chain.canonical_path(), params_.event_threshold, monitored_);
  return result;
}

// Every pair of nodes must agree on the chain up to prune depth below the
// tallest head; tips may legitimately differ by in-flight blocks.
void Simulation::check_agreement() const {
  std::size_t tallest = 0;
  std::uint64_t max_height = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto h = nodes_[i]->chain().head_height();
    if (h > max_height) {
      max_height = h;
      tallest = i;
    }
  }
  const std::uint64_t cut =
      max_height > params_.rules.prune_depth ? max_height - params_.rules.prune_depth : 0;
  const auto ref_path = nodes_[tallest]->chain().canonical_path();

  for (const auto& node : nodes_) {
    const auto path = node->chain().canonical_path();
    if (path.size() <= cut) {
      throw InvariantError("node " + node->label() + " fell behind the agreed prefix (height " +
                           std::to_string(path.size() - 1) + " < " + std::to_string(cut) + ")");
    }
    if (path[cut]->digest != ref_path[cut]->digest) {
      throw InvariantError("canonical prefixes diverge at height " + std::to_string(cut));
    }
  }
}

void Simulation::check_conservation() const {
  std::uint64_t msgs_out = 0, msgs_in = 0, bytes_out = 0, bytes_in = 0;
  for (const auto& node : nodes_) {
    const auto t = node->metrics().totals();
    msgs_out += t.msgs_out;
    msgs_in += t.msgs_in;
    bytes_out += t.bytes_out;
    bytes_in += t.bytes_in;
  }
  if (msgs_out != msgs_in || bytes_out != bytes_in) {
    throw InvariantError("transport conservation broke: sent " + std::to_string(msgs_out) +
                         " msgs/" + std::to_string(bytes_out) + " bytes, delivered " +
                         std::to_string(msgs_in) + " msgs/" + std::to_string(bytes_in) + " bytes");
  }
}

void Simulation::dump_recent_events(std::ostream& os) const {
  char buf[192];
  for (const auto& ev : recent_) {
    format_event(ev, buf, sizeof(buf));
    os << buf << '\n';
  }
}

void Simulation::format_event(const Event& ev, char* buf, std::size_t len) {
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, Deliver>) {
          std::snprintf(buf, len,
                        R"({"t":%.6f,"ev":"deliver","src":%d,"dst":%d,"wire":"%s","bytes":%zu})",
                        ev.time, body.msg.src, body.msg.dst,
                        metrics::to_string(wire_of(body.msg.payload)),
                        payload_bytes(body.msg.payload));
        } else if constexpr (std::is_same_v<T, SensorEmit>) {
          std::snprintf(buf, len,
                        R"({"t":%.6f,"ev":"sensor","node":%d,"sensor":"%s","value":%.6f})",
                        ev.time, body.node, body.sensor_id.c_str(), body.value);
        } else if constexpr (std::is_same_v<T, PollTick>) {
          std::snprintf(buf, len, R"({"t":%.6f,"ev":"poll","node":%d,"tick":%llu})",
                        ev.time, body.node, static_cast<unsigned long long>(body.tick));
        } else if constexpr (std::is_same_v<T, WindowTick>) {
          std::snprintf(buf, len, R"({"t":%.6f,"ev":"window","index":%zu})", ev.time,
                        body.index);
        } else if constexpr (std::is_same_v<T, MiningSlice>) {
          std::snprintf(buf, len,
                        R"({"t":%.6f,"ev":"mining_slice","node":%d,"race":%llu,"slice":%llu})",
                        ev.time, body.node, static_cast<unsigned long long>(body.race),
                        static_cast<unsigned long long>(body.slice));
        } else if constexpr (std::is_same_v<T, BlockFound>) {
          std::snprintf(buf, len, R"({"t":%.6f,"ev":"block_found","node":%d,"race":%llu})",
                        ev.time, body.node, static_cast<unsigned long long>(body.race));
        } else {
          std::snprintf(buf, len,
                        R"({"t":%.6f,"ev":"lottery_timeout","node":%d,"race":%llu})", ev.time,
                        body.node, static_cast<unsigned long long>(body.race));
        }
      },
      ev.body);
}

}  // namespace blocksim::sim
