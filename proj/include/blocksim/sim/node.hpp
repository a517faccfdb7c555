// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blocksim/consensus/engine.hpp"
#include "blocksim/core/chain_view.hpp"
#include "blocksim/core/rng.hpp"
#include "blocksim/core/sha256.hpp"
#include "blocksim/metrics/metrics.hpp"
#include "blocksim/monitor/monitor.hpp"
#include "blocksim/sim/message.hpp"

namespace blocksim::sim {

// A run reached a state the design rules out: a node's own block failing its
// own validation, byte conservation breaking, heads diverging beyond the
// prune depth. The harness turns this into a hard run failure.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Services a node gets from the harness: run parameters, message transport,
// and scheduling of its own callbacks. Scheduled callbacks carry the race id
// they were armed under, so a node can drop the stale ones after its head
// moved on.
class NetContext {
 public:
  virtual ~NetContext() = default;

  virtual double latency() const = 0;
  virtual double duration() const = 0;
  virtual double hash_rate() const = 0;
  virtual double lottery_wait() const = 0;
  virtual double window_seconds() const = 0;

  virtual void send(int src, int dst, Payload payload, double now) = 0;
  virtual void broadcast(int src, Payload payload, double now) = 0;

  virtual void schedule_mining_slice(int node, double at, std::uint64_t race,
                                     std::uint64_t slice) = 0;
  virtual void schedule_block_found(int node, double at, std::uint64_t race) = 0;
  virtual void schedule_lottery_timeout(int node, double at, std::uint64_t race) = 0;
};

// One cluster member: chain store, consensus engine, hashing loop, event
// monitor, and the counters everything reports into. All behavior is driven
// by the harness calling the on_* handlers in simulated-time order.
//
// Hashing runs in one-second slices. A slice does its whole attempt budget
// in one call; a winning attempt schedules the block at the interpolated
// moment that attempt would have finished, so block discovery has sub-second
// resolution even though candidates carry whole-second timestamps.
class NodeRuntime {
 public:
  NodeRuntime(int index, std::string label, const consensus::ConsensusRules& rules,
              std::uint64_t run_seed, const std::vector<std::string>& cluster,
              double event_threshold, const std::set<std::string>& monitored, NetContext& net);

  void start(double now);

  void on_message(const Message& m, double now);
  void on_sensor_reading(const std::string& sensor_id, double value, double now);
  void on_poll_tick(std::uint64_t tick, double now);
  void on_window_tick(std::size_t window_index, double now);
  void on_mining_slice(std::uint64_t race, std::uint64_t slice, double now);
  void on_block_found(std::uint64_t race, double now);
  void on_lottery_timeout(std::uint64_t race, double now);

  // Arms a one-shot fault: the next block this node finds at or after `at`
  // goes out with a corrupted proof and is not kept locally.
  void set_fault(double at) { fault_at_ = at; }

  void finalize();

  int index() const { return idx_; }
  const std::string& label() const { return label_; }
  const core::ChainView& chain() const { return chain_; }
  const consensus::Engine& engine() const { return *engine_; }
  consensus::Engine& engine() { return *engine_; }
  const metrics::MetricsSink& metrics() const { return metrics_; }
  const monitor::NodeMonitor& monitor() const { return monitor_; }
  std::uint64_t memory_bytes() const;

 private:
  bool active(double now) const { return now < net_.duration(); }

  void send_to(int dst, Payload payload, double now);
  void broadcast_payload(Payload payload, double now);

  void begin_race(double now);
  void update_mining(double now);
  void start_mining(double now);
  void rebuild_candidate(double now);

  // Returns true if the block (not counting cascaded orphans) was stored.
  bool insert_and_cascade(const core::Block& b, double now, bool own, int announcer);
  void on_head_changed(const core::Hash256& old_head, double now);
  void absorb_canonical_block(const core::StoredBlock& sb);
  bool pool_put(const core::Observation& obs, bool overwrite);

  void handle(const DataRequest& req, int src, double now);
  void handle(const DataResponse& resp, int src, double now);
  void handle(const TransactionMsg& tx, int src, double now);
  void handle(const BlockAnnounce& ann, int src, double now);
  void handle(const LotteryAnnounceMsg& ann, int src, double now);
  void handle(const LotteryVerifyMsg& ack, int src, double now);

  int idx_;
  std::string label_;
  consensus::ConsensusRules rules_;
  std::vector<std::string> cluster_;
  NetContext& net_;
  core::DetRng rng_;
  std::unique_ptr<consensus::Engine> engine_;
  core::ChainView chain_;
  metrics::MetricsSink metrics_;
  monitor::NodeMonitor monitor_;
  std::uint64_t address_book_bytes_ = 0;

  // Observation pool: everything seen minus what the canonical chain already
  // carries. Stake bids are keyed to one candidate height and dropped once
  // the chain passes them.
  std::map<core::ObsKey, core::Observation> seen_txs_;
  std::set<core::ObsKey> included_;
  bool pool_dirty_ = false;

  // Blocks whose parent has not arrived yet, keyed by the missing digest.
  std::map<core::Hash256, std::vector<std::pair<core::Block, core::Hash256>>> orphans_;
  std::set<core::Hash256> orphan_digests_;

  std::uint64_t race_id_ = 0;
  bool mining_ = false;
  consensus::MiningPlan plan_;
  double mine_start_ = 0;
  core::Block candidate_;
  core::Sha256 prefix_state_;
  std::uint64_t nonce_next_ = 0;
  std::uint64_t pending_nonce_ = 0;

  std::optional<core::ObsKey> outstanding_report_;
  std::optional<double> fault_at_;
  bool fault_spent_ = false;
};

}  // namespace blocksim::sim
