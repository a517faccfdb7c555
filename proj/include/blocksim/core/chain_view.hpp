// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "blocksim/core/block.hpp"

namespace blocksim::core {

struct StoredBlock {
  Block block;
  Hash256 digest{};
  std::size_t bytes = 0;  // canonical serialized size
};

// A node's local block store: the tree of all accepted blocks plus the head
// the node currently builds on. Fork choice is greatest height, ties broken
// by the smallest digest (as a big-endian integer), so the winner is a pure
// function of the stored set.
class ChainView {
 public:
  ChainView();  // seeded with genesis_block()
  explicit ChainView(const Block& genesis);

  // Parent must already be stored and the candidate's height must be
  // parent height + 1. Returns false (and stores nothing) otherwise, or if
  // the digest is already present.
  bool insert(const Block& b, const Hash256& digest);

  bool contains(const Hash256& digest) const { return blocks_.count(digest) > 0; }
  const StoredBlock* find(const Hash256& digest) const;
  const StoredBlock* parent_of(const Hash256& digest) const;

  const Hash256& head_digest() const { return head_; }
  const StoredBlock& head() const { return blocks_.at(head_); }
  std::uint64_t head_height() const { return head().block.height; }
  const Hash256& genesis_digest() const { return genesis_; }

  // Digests of blocks with no stored children.
  const std::set<Hash256>& tips() const { return tips_; }

  // Genesis-to-head walk along the winning branch.
  std::vector<const StoredBlock*> canonical_path() const;

  // Drops losing branches whose tip sits more than `depth` blocks below the
  // head. Returns the bytes freed. The winning branch is never touched.
  std::size_t prune(std::uint64_t depth);

  // Sum of serialized sizes of everything still stored.
  std::size_t chain_weight_bytes() const { return weight_; }
  std::size_t block_count() const { return blocks_.size(); }

 private:
  void seed(const Block& genesis);
  void recompute_head();

  std::unordered_map<Hash256, StoredBlock, Hash256Hasher> blocks_;
  std::unordered_map<Hash256, std::uint32_t, Hash256Hasher> child_count_;
  std::set<Hash256> tips_;
  Hash256 head_{};
  Hash256 genesis_{};
  std::size_t weight_ = 0;
};

}  // namespace blocksim::core
