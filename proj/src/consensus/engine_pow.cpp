// SPDX-License-Identifier: Apache-2.0
#include "engines.hpp"

namespace blocksim::consensus {

RaceStart PowEngine::begin_race(const core::ChainView&, double, core::DetRng&) { return {}; }

MiningPlan PowEngine::mining_plan() const { return {true, 1, 1}; }

core::ValidationResult PowEngine::validate_block(const core::ChainView&,
                                                 const core::StoredBlock& parent,
                                                 const core::Block& candidate) const {
  using core::RejectReason;
  using core::ValidationResult;

  auto link = core::validate_linkage(parent.block, parent.digest, candidate);
  if (!link.accepted) return link;
  auto body = validate_body(candidate);
  if (!body.accepted) return body;

  if (!std::holds_alternative<std::monostate>(candidate.proof)) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }
  if (!hash_meets_target(core::block_hash(candidate), rules_.difficulty_nibbles)) {
    return ValidationResult::reject(RejectReason::bad_proof);
  }
  return ValidationResult::accept();
}

}  // namespace blocksim::consensus
