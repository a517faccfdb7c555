// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <deque>
#include <fstream>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "blocksim/consensus/rules.hpp"
#include "blocksim/monitor/ingest.hpp"
#include "blocksim/monitor/monitor.hpp"
#include "blocksim/sim/node.hpp"

namespace blocksim::sim {

struct SimParams {
  consensus::ConsensusRules rules;
  int n_nodes = 5;
  double duration = 3600;        // simulated seconds
  double latency = 0.05;         // one-way delivery delay
  double hash_rate = 2.0;        // attempts per simulated second per miner
  double poll_interval = 30;     // head comparison cadence
  double window_seconds = 60;    // metrics window
  double lottery_wait = 0.2;     // timeout before a lottery threshold relaxes
  std::uint64_t rng_seed = 1;
  double event_threshold = 0;    // resolved before the run (percentile or override)
  std::vector<std::pair<int, double>> fault_plan;
  std::string trace_path;        // event log (jsonl), empty = off
};

struct RunResult {
  std::vector<monitor::Crossing> events;
  std::uint64_t head_height = 0;
  std::uint64_t head_timestamp = 0;
  std::size_t chain_weight_bytes = 0;
  double chain_block_time = 0;  // head timestamp over head height
};

// Owns the cluster and the event heap, and is the NetContext its nodes talk
// through. Every event is (time, insertion sequence)-ordered, all randomness
// is seeded from run parameters, and message delivery is exact: a run is a
// pure function of its SimParams and sensor streams.
class Simulation : public NetContext {
 public:
  Simulation(SimParams params, const monitor::StreamSet& streams);
  ~Simulation() override;

  RunResult run();

  // The tail of the event stream (most recent last), for post-mortem dumps
  // when a run dies on an invariant.
  void dump_recent_events(std::ostream& os) const;

  const std::vector<std::unique_ptr<NodeRuntime>>& nodes() const { return nodes_; }
  const SimParams& params() const { return params_; }
  const std::set<std::string>& monitored() const { return monitored_; }

  // NetContext
  double latency() const override { return params_.latency; }
  double duration() const override { return params_.duration; }
  double hash_rate() const override { return params_.hash_rate; }
  double lottery_wait() const override { return params_.lottery_wait; }
  double window_seconds() const override { return params_.window_seconds; }
  void send(int src, int dst, Payload payload, double now) override;
  void broadcast(int src, Payload payload, double now) override;
  void schedule_mining_slice(int node, double at, std::uint64_t race,
                             std::uint64_t slice) override;
  void schedule_block_found(int node, double at, std::uint64_t race) override;
  void schedule_lottery_timeout(int node, double at, std::uint64_t race) override;

 private:
  struct Deliver {
    Message msg;
  };
  struct SensorEmit {
    int node;
    std::string sensor_id;
    double value;
  };
  struct PollTick {
    int node;
    std::uint64_t tick;
  };
  struct WindowTick {
    std::size_t index;
  };
  struct MiningSlice {
    int node;
    std::uint64_t race;
    std::uint64_t slice;
  };
  struct BlockFound {
    int node;
    std::uint64_t race;
  };
  struct LotteryTimeout {
    int node;
    std::uint64_t race;
  };
  using EventBody = std::variant<Deliver, SensorEmit, PollTick, WindowTick, MiningSlice,
                                 BlockFound, LotteryTimeout>;

  struct Event {
    double time = 0;
    std::uint64_t seq = 0;
    EventBody body;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  void push(double at, EventBody body);
  void dispatch(const Event& ev);
  void check_agreement() const;
  void check_conservation() const;
  static void format_event(const Event& ev, char* buf, std::size_t len);

  SimParams params_;
  std::vector<std::string> cluster_;
  std::set<std::string> monitored_;
  std::vector<std::unique_ptr<NodeRuntime>> nodes_;
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t seq_ = 0;
  std::optional<std::ofstream> trace_;
  std::deque<Event> recent_;
};

}  // namespace blocksim::sim
