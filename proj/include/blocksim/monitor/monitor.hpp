// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "blocksim/core/chain_view.hpp"

namespace blocksim::monitor {

// Threshold monitor over the cluster-wide mean temperature, run without a
// coordinator: the synced value of every node lives on the chain, so each
// node derives the same estimate from its canonical prefix and only talks
// when its own drift can move the mean across the threshold.
//
// Drift condition: with estimate e (mean of synced values) and local value v,
// u = e + (v - synced[self]) is where the mean would sit if everyone else is
// unchanged. While every node's u stays on e's side of the threshold, the
// true mean is there too; a node whose u crosses reports v as a transaction.
class NodeMonitor {
 public:
  NodeMonitor() = default;
  NodeMonitor(std::string self_label, double threshold, std::set<std::string> monitored);

  // Local stream side.
  void observe(const std::string& sensor_id, double temperature);
  bool has_value() const { return !own_latest_.empty(); }
  double local_value() const;  // mean over this node's sensors' latest readings

  // Chain side: fold one canonical block's sensor readings into the synced
  // state; reset() before replaying a different branch.
  void apply_block(const core::Block& b);
  void reset() { synced_.clear(); }

  bool self_synced() const { return synced_.count(self_) > 0; }
  bool covered() const { return synced_.size() == monitored_.size(); }
  double estimate() const;

  enum class Check { idle, safe, violation };
  Check check() const;

 private:
  std::string self_;
  double threshold_ = 0;
  std::set<std::string> monitored_;
  std::map<std::string, double> synced_;     // node label -> last synced value
  std::map<std::string, double> own_latest_;  // own sensor id -> latest reading
};

struct Crossing {
  std::uint64_t sim_time = 0;  // timestamp of the block that moved the mean
  int direction = 0;           // +1 rising across the threshold, -1 falling
  double estimate = 0;
};

// Pure replay of a canonical chain: recompute the estimate at every block and
// collect every side change of (estimate - threshold). Every node gets the
// same answer for the same chain.
std::vector<Crossing> detect_global_event(const std::vector<const core::StoredBlock*>& chain,
                                          double threshold,
                                          const std::set<std::string>& monitored);

void write_events_csv(std::ostream& os, const std::vector<Crossing>& events);

}  // namespace blocksim::monitor
