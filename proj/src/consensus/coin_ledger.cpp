// SPDX-License-Identifier: Apache-2.0
#include "blocksim/consensus/coin_ledger.hpp"

namespace blocksim::consensus {

CoinLedger::CoinLedger(const std::vector<std::string>& labels, std::uint64_t endowment) {
  for (const auto& l : labels) {
    accounts_[l] = {Cohort{endowment, 0}};
  }
}

std::uint64_t CoinLedger::balance(const std::string& label) const {
  auto it = accounts_.find(label);
  if (it == accounts_.end()) return 0;
  std::uint64_t sum = 0;
  for (const auto& c : it->second) sum += c.coins;
  return sum;
}

std::uint64_t CoinLedger::total_coins() const {
  std::uint64_t sum = 0;
  for (const auto& [label, cohorts] : accounts_) {
    for (const auto& c : cohorts) sum += c.coins;
  }
  return sum;
}

std::uint64_t CoinLedger::coinage(const std::string& label, std::uint64_t now_slice) const {
  auto it = accounts_.find(label);
  if (it == accounts_.end()) return 0;
  std::uint64_t units = 0;
  for (const auto& c : it->second) {
    if (c.acquired_slice < now_slice) units += c.coins * (now_slice - c.acquired_slice);
  }
  return units;
}

std::uint64_t CoinLedger::coins_covering(const std::string& label, std::uint64_t units,
                                         std::uint64_t now_slice) const {
  auto it = accounts_.find(label);
  if (it == accounts_.end() || units == 0) return 0;
  std::uint64_t covered = 0;
  std::uint64_t coins = 0;
  for (const auto& c : it->second) {
    if (c.acquired_slice >= now_slice) continue;  // zero-age cohorts carry nothing
    std::uint64_t age = now_slice - c.acquired_slice;
    std::uint64_t whole = c.coins * age;
    if (covered + whole >= units) {
      std::uint64_t missing = units - covered;
      coins += (missing + age - 1) / age;
      return coins;
    }
    covered += whole;
    coins += c.coins;
  }
  return coins;  // caller asked beyond coinage(); best effort is everything aged
}

void CoinLedger::invest(const std::string& label, std::uint64_t coins, std::uint64_t now_slice) {
  auto it = accounts_.find(label);
  if (it == accounts_.end() || coins == 0) return;
  auto& cohorts = it->second;
  std::uint64_t to_move = coins;
  std::size_t keep = 0;
  for (std::size_t i = 0; i < cohorts.size() && to_move > 0; ++i) {
    if (cohorts[i].coins <= to_move) {
      to_move -= cohorts[i].coins;
      cohorts[i].coins = 0;
    } else {
      cohorts[i].coins -= to_move;
      to_move = 0;
    }
  }
  std::uint64_t moved = coins - to_move;  // clamp: never more than was held
  for (std::size_t i = 0; i < cohorts.size(); ++i) {
    if (cohorts[i].coins > 0) cohorts[keep++] = cohorts[i];
  }
  cohorts.resize(keep);
  if (moved > 0) {
    if (!cohorts.empty() && cohorts.back().acquired_slice == now_slice) {
      cohorts.back().coins += moved;
    } else {
      cohorts.push_back(Cohort{moved, now_slice});
    }
  }
}

void CoinLedger::reward(const std::string& label, std::uint64_t coins, std::uint64_t now_slice) {
  if (coins == 0) return;
  auto& cohorts = accounts_[label];
  if (!cohorts.empty() && cohorts.back().acquired_slice == now_slice) {
    cohorts.back().coins += coins;
  } else {
    cohorts.push_back(Cohort{coins, now_slice});
  }
}

void CoinLedger::apply_block(const core::Block& b, std::uint64_t slice_seconds) {
  std::uint64_t slice = slice_seconds == 0 ? 0 : b.timestamp / slice_seconds;
  for (const auto& o : b.observations) {
    if (o.kind == core::ObsKind::coinage_investment) {
      invest(o.sensor_id, o.amount, slice);
    }
  }
  for (const auto& o : b.observations) {
    if (o.kind == core::ObsKind::reward) {
      reward(o.sensor_id, o.amount, slice);
    }
  }
}

}  // namespace blocksim::consensus
