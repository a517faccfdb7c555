// SPDX-License-Identifier: Apache-2.0
#include "blocksim/consensus/access.hpp"

namespace blocksim::consensus {

std::vector<std::string> recent_creators(const core::ChainView& chain,
                                         const core::Hash256& parent_digest,
                                         std::uint64_t window) {
  std::vector<std::string> ring;
  const core::StoredBlock* cur = chain.find(parent_digest);
  while (cur != nullptr && ring.size() < window && cur->block.height > 0) {
    ring.push_back(cur->block.miner_id);
    cur = chain.find(cur->block.prev_hash);
  }
  return ring;
}

}  // namespace blocksim::consensus
