// SPDX-License-Identifier: Apache-2.0
#include "engines.hpp"

namespace blocksim::consensus {

SortitionEngine::SortitionEngine(const ConsensusRules& rules, std::string label,
                                 std::vector<std::string> cluster, bool gated,
                                 core::DetRng& rng)
    : Engine(rules, std::move(label), std::move(cluster)),
      gated_(gated),
      keys_(vrf::keygen(rng)),
      access_(cluster_),
      committee_target_(rules_.committee_target(static_cast<std::uint32_t>(cluster_.size()))) {}

void SortitionEngine::set_directory(const std::map<std::string, core::Hash256>& directory) {
  directory_ = directory;
}

bool SortitionEngine::may_create(const core::ChainView& chain,
                                 const core::Hash256& parent_digest,
                                 const std::string& node) const {
  if (!gated_) return true;
  if (!access_.listed(node)) return false;
  for (const auto& creator : recent_creators(chain, parent_digest, rules_.ban_window)) {
    if (creator == node) return false;
  }
  return true;
}

void SortitionEngine::refresh_ready() {
  race_.ready = race_.committee.size() >= committee_target_ || threshold_capped(race_.threshold);
}

std::optional<LotteryDraw> SortitionEngine::self_announcement() const {
  if (!race_.selected) return std::nullopt;
  LotteryDraw d;
  d.node = label_;
  d.round = race_.meta.round;
  d.threshold = {race_.meta.threshold_num, race_.meta.threshold_den};
  d.proof = race_.draw;
  return d;
}

RaceStart SortitionEngine::begin_race(const core::ChainView& chain, double, core::DetRng&) {
  race_ = Race{};
  race_.seed = chain.head_digest();
  const auto& head = chain.head();
  if (head.block.height >= 1) {
    race_.prev_seed = head.block.prev_hash;
    race_.has_prev_seed = true;
  }
  race_.threshold = rules_.sortition_threshold;
  race_.eligible = may_create(chain, race_.seed, label_);

  if (race_.eligible) {
    race_.draw = vrf::evaluate(keys_, race_.seed);
    if (lottery_wins(race_.draw.y, race_.threshold)) {
      race_.selected = true;
      race_.committee.insert(label_);
      race_.meta = core::SortitionMeta{race_.draw.y,           race_.draw.eval,
                                       race_.draw.bind,        race_.seed,
                                       race_.threshold.num,    race_.threshold.den,
                                       race_.round};
    }
  }
  refresh_ready();

  RaceStart start;
  start.announce = self_announcement();
  start.arm_timeout = race_.eligible && !race_.ready;
  return start;
}

RelaxOutcome SortitionEngine::on_lottery_timeout(const core::ChainView&, core::DetRng&) {
  RelaxOutcome out;
  if (race_.ready || !race_.eligible) return out;

  ++race_.round;
  race_.threshold = relaxed_threshold(rules_.sortition_threshold, race_.round);
  if (!race_.selected && lottery_wins(race_.draw.y, race_.threshold)) {
    race_.selected = true;
    race_.committee.insert(label_);
    race_.meta = core::SortitionMeta{race_.draw.y,        race_.draw.eval,
                                     race_.draw.bind,     race_.seed,
                                     race_.threshold.num, race_.threshold.den,
                                     race_.round};
    out.announce = self_announcement();
  }
  refresh_ready();
  out.arm_timeout = !race_.ready;
  return out;
}

AnnounceVerdict SortitionEngine::on_lottery_announce(const core::ChainView& chain,
                                                     const LotteryDraw& draw) {
  AnnounceVerdict verdict;

  auto pk = directory_.find(draw.node);
  if (pk == directory_.end()) return verdict;

  if (!vrf::verify(pk->second, draw.proof.seed_used, draw.proof) ||
      !lottery_wins(draw.proof.y, draw.threshold) || draw.round > 64 ||
      !(relaxed_threshold(rules_.sortition_threshold, draw.round) == draw.threshold)) {
    verdict.fraudulent = true;
    flag_misbehavior(draw.node);
    return verdict;
  }

  // A claim for a head this node has moved past (or not reached) is honest
  // staleness, not misbehavior; acknowledge the current race's seed only.
  if (draw.proof.seed_used != race_.seed) {
    if (race_.has_prev_seed && draw.proof.seed_used == race_.prev_seed) verdict.valid = true;
    return verdict;
  }
  if (!may_create(chain, race_.seed, draw.node)) return verdict;

  verdict.valid = true;
  bool was_ready = race_.ready;
  race_.committee.insert(draw.node);
  refresh_ready();
  verdict.became_ready = !was_ready && race_.ready;
  return verdict;
}

MiningPlan SortitionEngine::mining_plan() const {
  MiningPlan plan;
  plan.mining = race_.ready && race_.selected;
  if (rules_.committee_scaled_target) {
    plan.mult_num = cluster_.size();
    plan.mult_den = committee_target_;
  }
  return plan;
}

core::ProofMeta SortitionEngine::proof_meta() const { return race_.meta; }

core::ValidationResult SortitionEngine::validate_block(const core::ChainView& chain,
                                                       const core::StoredBlock& parent,
                                                       const core::Block& candidate) const {
  using core::RejectReason;
  using core::ValidationResult;

  auto link = core::validate_linkage(parent.block, parent.digest, candidate);
  if (!link.accepted) return link;
  auto body = validate_body(candidate);
  if (!body.accepted) return body;

  if (!may_create(chain, parent.digest, candidate.miner_id)) {
    return ValidationResult::reject(RejectReason::not_authorized);
  }

  const auto* meta = std::get_if<core::SortitionMeta>(&candidate.proof);
  if (meta == nullptr) return ValidationResult::reject(RejectReason::bad_proof);

  auto pk = directory_.find(candidate.miner_id);
  if (pk == directory_.end()) return ValidationResult::reject(RejectReason::bad_proof);

  vrf::Proof proof{meta->y, meta->proof_eval, meta->proof_bind, meta->seed_used};
  if (!vrf::verify(pk->second, meta->seed_used, proof)) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }

  // The draw must be seeded by the parent, or by the grandparent for a node
  // that kept a winning draw across a head it heard about mid-race.
  bool seed_ok = meta->seed_used == parent.digest ||
                 (parent.block.height >= 1 && meta->seed_used == parent.block.prev_hash);
  if (!seed_ok) return ValidationResult::reject(RejectReason::bad_proof);

  Rational claimed{meta->threshold_num, meta->threshold_den};
  if (meta->round > 64 ||
      !(relaxed_threshold(rules_.sortition_threshold, meta->round) == claimed)) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }
  if (!lottery_wins(meta->y, claimed)) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }

  MiningPlan plan = mining_plan();
  if (!hash_meets_target(core::block_hash(candidate), rules_.difficulty_nibbles, plan.mult_num,
                         plan.mult_den)) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }
  return ValidationResult::accept();
}

void SortitionEngine::flag_misbehavior(const std::string& node) {
  if (gated_) access_.evict(node);
}

std::uint64_t SortitionEngine::state_bytes(const core::ChainView& chain) const {
  std::uint64_t total = 0;
  for (const auto& [label, pk] : directory_) total += label.size() + pk.size();
  if (gated_) {
    for (const auto& label : cluster_) {
      if (access_.listed(label)) total += label.size();
    }
    for (const auto& label :
         recent_creators(chain, chain.head_digest(), rules_.ban_window)) {
      total += label.size();
    }
  }
  return total;
}

}  // namespace blocksim::consensus
