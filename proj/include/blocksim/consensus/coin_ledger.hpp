// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "blocksim/core/block.hpp"
#include "blocksim/consensus/rules.hpp"

namespace blocksim::consensus {

// Coin holdings per node, tracked as cohorts of equal acquisition time. Coin
// age is counted in whole slices (floor(t / slice_seconds)), so a cohort of c
// coins acquired in slice a carries c * (now - a) coinage units at slice now.
//
// An investment is a self-transfer: it never changes the balance, it moves
// the oldest coins into a fresh cohort, resetting their age. Rewards append a
// new cohort. Balances therefore only grow, and the total across nodes is
// endowment * nodes + reward * blocks applied.
class CoinLedger {
 public:
  CoinLedger() = default;
  CoinLedger(const std::vector<std::string>& labels, std::uint64_t endowment);

  std::uint64_t balance(const std::string& label) const;
  std::uint64_t coinage(const std::string& label, std::uint64_t now_slice) const;
  std::uint64_t total_coins() const;

  // Fewest oldest-first coins whose age sums to at least `units` at
  // now_slice. Callers must not ask for more units than coinage() reports.
  std::uint64_t coins_covering(const std::string& label, std::uint64_t units,
                               std::uint64_t now_slice) const;

  // Re-ages `coins` oldest coins to now_slice. Amounts beyond the balance are
  // clamped, so replaying an over-claiming block cannot corrupt the ledger.
  void invest(const std::string& label, std::uint64_t coins, std::uint64_t now_slice);

  void reward(const std::string& label, std::uint64_t coins, std::uint64_t now_slice);

  // Applies a block's coin movements: every coinage_investment observation,
  // then the reward. The slice is derived from the block timestamp.
  void apply_block(const core::Block& b, std::uint64_t slice_seconds);

 private:
  struct Cohort {
    std::uint64_t coins = 0;
    std::uint64_t acquired_slice = 0;
  };

  // Oldest cohort first; acquisition slices non-decreasing.
  std::map<std::string, std::vector<Cohort>> accounts_;
};

}  // namespace blocksim::consensus
