// SPDX-License-Identifier: Apache-2.0
#include "blocksim/consensus/engine.hpp"

#include "engines.hpp"

namespace blocksim::consensus {

Engine::Engine(const ConsensusRules& rules, std::string label, std::vector<std::string> cluster)
    : rules_(rules), label_(std::move(label)), cluster_(std::move(cluster)) {}

AnnounceVerdict Engine::on_lottery_announce(const core::ChainView&, const LotteryDraw&) {
  return {};
}

RelaxOutcome Engine::on_lottery_timeout(const core::ChainView&, core::DetRng&) { return {}; }

void Engine::on_canonical_extend(const core::StoredBlock&) {}

void Engine::on_canonical_rebuild(const std::vector<const core::StoredBlock*>&) {}

void Engine::flag_misbehavior(const std::string&) {}

void Engine::set_directory(const std::map<std::string, core::Hash256>&) {}

std::uint64_t Engine::state_bytes(const core::ChainView&) const { return 0; }

core::ValidationResult Engine::validate_body(const core::Block& candidate) const {
  using core::RejectReason;
  using core::ValidationResult;

  if (candidate.observations.size() > rules_.max_obs_per_block) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }
  std::size_t rewards = 0;
  for (const auto& o : candidate.observations) {
    if (o.kind != core::ObsKind::reward) continue;
    ++rewards;
    if (o.sensor_id != candidate.miner_id || o.amount != rules_.block_reward) {
      return ValidationResult::reject(RejectReason::bad_proof);
    }
  }
  if (rewards != 1) return ValidationResult::reject(RejectReason::bad_proof);
  return ValidationResult::accept();
}

std::unique_ptr<Engine> make_engine(const ConsensusRules& rules, std::string label,
                                    const std::vector<std::string>& cluster,
                                    core::DetRng& rng) {
  switch (rules.method) {
    case Method::pow:
      return std::make_unique<PowEngine>(rules, std::move(label), cluster);
    case Method::pos:
      return std::make_unique<PosEngine>(rules, std::move(label), cluster);
    case Method::dpow:
      return std::make_unique<SortitionEngine>(rules, std::move(label), cluster, false, rng);
    case Method::ppokw:
      return std::make_unique<SortitionEngine>(rules, std::move(label), cluster, true, rng);
  }
  return nullptr;
}

}  // namespace blocksim::consensus
