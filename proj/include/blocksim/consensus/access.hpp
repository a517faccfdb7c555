// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "blocksim/core/chain_view.hpp"

namespace blocksim::consensus {

// Knowledge each node keeps about who may create blocks: the configured
// whitelist and the nodes it has personally caught misbehaving. Evictions are
// permanent and node-local; because misbehavior arrives by broadcast, honest
// nodes converge on the same evicted set without any coordination.
class AccessControl {
 public:
  AccessControl() = default;
  explicit AccessControl(const std::vector<std::string>& whitelist)
      : whitelist_(whitelist.begin(), whitelist.end()) {}

  void evict(const std::string& node) { evicted_.insert(node); }

  bool listed(const std::string& node) const {
    return whitelist_.count(node) > 0 && evicted_.count(node) == 0;
  }

  const std::set<std::string>& evicted() const { return evicted_; }
  const std::set<std::string>& whitelist() const { return whitelist_; }

 private:
  std::set<std::string> whitelist_;
  std::set<std::string> evicted_;
};

// Creators of the last `window` blocks above `parent_digest`'s lineage,
// walking parent links. The genesis creator is not a cluster node and is left
// out. A creator in this ring is barred from making the next block, which
// forces rotation among whitelisted nodes.
std::vector<std::string> recent_creators(const core::ChainView& chain,
                                         const core::Hash256& parent_digest,
                                         std::uint64_t window);

}  // namespace blocksim::consensus
