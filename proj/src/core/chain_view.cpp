// SPDX-License-Identifier: Apache-2.0
#include "blocksim/core/chain_view.hpp"

#include <algorithm>

namespace blocksim::core {

ChainView::ChainView() { seed(genesis_block()); }

ChainView::ChainView(const Block& genesis) { seed(genesis); }

void ChainView::seed(const Block& genesis) {
  Hash256 digest = block_hash(genesis);
  StoredBlock sb{genesis, digest, serialized_size(genesis)};
  weight_ = sb.bytes;
  blocks_.emplace(digest, std::move(sb));
  tips_.insert(digest);
  head_ = digest;
  genesis_ = digest;
}

const StoredBlock* ChainView::find(const Hash256& digest) const {
  auto it = blocks_.find(digest);
  return it == blocks_.end() ? nullptr : &it->second;
}

const StoredBlock* ChainView::parent_of(const Hash256& digest) const {
  const StoredBlock* sb = find(digest);
  return sb == nullptr ? nullptr : find(sb->block.prev_hash);
}

bool ChainView::insert(const Block& b, const Hash256& digest) {
  if (blocks_.count(digest) > 0) return false;
  const StoredBlock* parent = find(b.prev_hash);
  if (parent == nullptr) return false;
  if (b.height != parent->block.height + 1) return false;

  StoredBlock sb{b, digest, serialized_size(b)};
  weight_ += sb.bytes;
  blocks_.emplace(digest, std::move(sb));
  ++child_count_[b.prev_hash];
  tips_.erase(b.prev_hash);
  tips_.insert(digest);
  recompute_head();
  return true;
}

void ChainView::recompute_head() {
  // tips_ iterates in ascending digest order, so the first tip seen at the
  // maximum height is the tie-break winner.
  const StoredBlock* best = nullptr;
  for (const auto& t : tips_) {
    const StoredBlock& sb = blocks_.at(t);
    if (best == nullptr || sb.block.height > best->block.height) best = &sb;
  }
  head_ = best->digest;
}

std::vector<const StoredBlock*> ChainView::canonical_path() const {
  std::vector<const StoredBlock*> path;
  const StoredBlock* cur = find(head_);
  while (cur != nullptr) {
    path.push_back(cur);
    if (cur->digest == genesis_) break;
    cur = find(cur->block.prev_hash);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::size_t ChainView::prune(std::uint64_t depth) {
  std::uint64_t head_h = head_height();
  if (head_h <= depth) return 0;
  std::uint64_t cutoff = head_h - depth;  // tips below this height go

  std::vector<Hash256> stale;
  for (const auto& t : tips_) {
    if (t == head_) continue;
    if (blocks_.at(t).block.height < cutoff) stale.push_back(t);
  }

  std::size_t freed = 0;
  while (!stale.empty()) {
    Hash256 cur = stale.back();
    stale.pop_back();
    const StoredBlock& sb = blocks_.at(cur);
    Hash256 parent = sb.block.prev_hash;

    freed += sb.bytes;
    weight_ -= sb.bytes;
    tips_.erase(cur);
    child_count_.erase(cur);
    blocks_.erase(cur);

    auto pc = child_count_.find(parent);
    if (pc == child_count_.end()) continue;  // parent already gone
    if (--pc->second == 0) {
      child_count_.erase(pc);
      tips_.insert(parent);
      // The stump may itself be a stale tip now.
      if (parent != head_ && blocks_.at(parent).block.height < cutoff) {
        stale.push_back(parent);
      }
    }
  }
  return freed;
}

}  // namespace blocksim::core
