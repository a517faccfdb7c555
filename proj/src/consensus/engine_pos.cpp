// SPDX-License-Identifier: Apache-2.0
#include "engines.hpp"

namespace blocksim::consensus {

PosEngine::PosEngine(const ConsensusRules& rules, std::string label,
                     std::vector<std::string> cluster)
    : Engine(rules, std::move(label), std::move(cluster)),
      ledger_(cluster_, rules_.initial_endowment) {}

RaceStart PosEngine::begin_race(const core::ChainView& chain, double now, core::DetRng& rng) {
  bid_units_ = 0;
  bid_coins_ = 0;

  std::uint64_t now_slice = slice_at(static_cast<std::uint64_t>(now));
  // The ledger tracks this node's canonical head; a mismatch means the race
  // opened before bookkeeping caught up, in which case bid nothing.
  if (ledger_head_ == chain.head_digest()) {
    std::uint64_t units = ledger_.coinage(label_, now_slice);
    if (units > 0) {
      bid_units_ = rng.uniform(1, units);
      bid_coins_ = ledger_.coins_covering(label_, bid_units_, now_slice);
    }
  }

  RaceStart start;
  if (bid_coins_ > 0) {
    core::Observation bid;
    bid.kind = core::ObsKind::coinage_investment;
    bid.sensor_id = label_;
    bid.sim_time = chain.head_height() + 1;  // candidate height: unique per race
    bid.amount = bid_coins_;
    start.transactions.push_back(std::move(bid));
  }
  return start;
}

MiningPlan PosEngine::mining_plan() const {
  MiningPlan plan;
  plan.mining = true;
  plan.mult_num = rules_.pos_alpha.den + rules_.pos_alpha.num * bid_units_;
  plan.mult_den = rules_.pos_alpha.den;
  return plan;
}

core::ProofMeta PosEngine::proof_meta() const { return core::StakeMeta{bid_units_}; }

core::ValidationResult PosEngine::validate_block(const core::ChainView&,
                                                 const core::StoredBlock& parent,
                                                 const core::Block& candidate) const {
  using core::RejectReason;
  using core::ValidationResult;

  auto link = core::validate_linkage(parent.block, parent.digest, candidate);
  if (!link.accepted) return link;
  auto body = validate_body(candidate);
  if (!body.accepted) return body;

  const auto* meta = std::get_if<core::StakeMeta>(&candidate.proof);
  if (meta == nullptr) return ValidationResult::reject(RejectReason::bad_proof);

  std::uint64_t mult_num = rules_.pos_alpha.den + rules_.pos_alpha.num * meta->investment;
  if (!hash_meets_target(core::block_hash(candidate), rules_.difficulty_nibbles, mult_num,
                         rules_.pos_alpha.den)) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }

  // The creator's bid must appear in the body exactly when it is nonzero.
  const core::Observation* own_bid = nullptr;
  for (const auto& o : candidate.observations) {
    if (o.kind != core::ObsKind::coinage_investment) continue;
    if (o.amount == 0) return ValidationResult::reject(RejectReason::bad_proof);
    if (o.sensor_id == candidate.miner_id) {
      if (own_bid != nullptr) return ValidationResult::reject(RejectReason::bad_proof);
      own_bid = &o;
    }
  }
  if ((meta->investment > 0) != (own_bid != nullptr)) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }

  // Coin checks need the balances at the parent. The ledger holds them only
  // for the canonical head; a candidate on a side branch gets the structural
  // checks above now and the full replay if its branch wins.
  if (parent.digest == ledger_head_) {
    std::uint64_t slice = slice_at(candidate.timestamp);
    if (meta->investment > ledger_.coinage(candidate.miner_id, slice)) {
      return ValidationResult::reject(RejectReason::bad_proof);
    }
    // The bid is priced when the race opens; coins only get older between
    // then and the block's timestamp, so the bid must cover the claimed
    // units at the block's slice and fit the creator's balance.
    if (own_bid != nullptr &&
        (own_bid->amount <
             ledger_.coins_covering(candidate.miner_id, meta->investment, slice) ||
         own_bid->amount > ledger_.balance(candidate.miner_id))) {
      return ValidationResult::reject(RejectReason::bad_proof);
    }
    for (const auto& o : candidate.observations) {
      if (o.kind != core::ObsKind::coinage_investment || &o == own_bid) continue;
      if (o.amount > ledger_.balance(o.sensor_id)) {
        return ValidationResult::reject(RejectReason::bad_proof);
      }
    }
  }
  return ValidationResult::accept();
}

void PosEngine::on_canonical_extend(const core::StoredBlock& b) {
  ledger_.apply_block(b.block, rules_.slice_seconds);
  ledger_head_ = b.digest;
}

void PosEngine::on_canonical_rebuild(const std::vector<const core::StoredBlock*>& path) {
  ledger_ = CoinLedger(cluster_, rules_.initial_endowment);
  for (const auto* sb : path) {
    if (sb->block.height == 0) continue;
    ledger_.apply_block(sb->block, rules_.slice_seconds);
  }
  ledger_head_ = path.empty() ? core::Hash256{} : path.back()->digest;
}

}  // namespace blocksim::consensus
