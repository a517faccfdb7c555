// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "blocksim/consensus/access.hpp"
#include "blocksim/consensus/coin_ledger.hpp"
#include "blocksim/consensus/rules.hpp"
#include "blocksim/consensus/target.hpp"
#include "blocksim/consensus/vrf.hpp"
#include "blocksim/core/chain_view.hpp"
#include "blocksim/core/rng.hpp"
#include "blocksim/core/validate.hpp"

namespace blocksim::consensus {

// One node's consensus brain. The surrounding simulation owns time, the
// network, and the block store; the engine decides whether the node hashes,
// under what target, what proof its candidate carries, and whether incoming
// blocks and lottery claims hold up.
//
// A "race" is the competition to extend one particular head. The runtime
// opens a race whenever its head changes; lottery methods may need timeout
// and announce callbacks before the race reaches the mining stage.

// Broadcast claim: "my draw wins the race on seed_used at this threshold".
struct LotteryDraw {
  std::string node;
  std::uint32_t round = 0;
  Rational threshold;
  vrf::Proof proof;
};

struct MiningPlan {
  bool mining = false;
  // Target widening as a multiplier on the base difficulty target.
  std::uint64_t mult_num = 1;
  std::uint64_t mult_den = 1;
};

struct RaceStart {
  std::optional<LotteryDraw> announce;       // broadcast if set
  std::vector<core::Observation> transactions;  // broadcast and pool (stake bids)
  bool arm_timeout = false;
};

struct RelaxOutcome {
  std::optional<LotteryDraw> announce;
  bool arm_timeout = false;
};

struct AnnounceVerdict {
  bool valid = false;       // verifies and wins: worth an acknowledgment
  bool fraudulent = false;  // cryptographically broken claim
  bool became_ready = false;
};

class Engine {
 public:
  Engine(const ConsensusRules& rules, std::string label, std::vector<std::string> cluster);
  virtual ~Engine() = default;

  virtual RaceStart begin_race(const core::ChainView& chain, double now, core::DetRng& rng) = 0;

  virtual AnnounceVerdict on_lottery_announce(const core::ChainView& chain,
                                              const LotteryDraw& draw);
  virtual RelaxOutcome on_lottery_timeout(const core::ChainView& chain, core::DetRng& rng);

  // True once this race needs no further coordination. Mining methods are
  // ready immediately; lottery methods wait for a committee or a capped
  // threshold.
  virtual bool race_ready() const { return true; }

  virtual MiningPlan mining_plan() const = 0;
  virtual core::ProofMeta proof_meta() const { return std::monostate{}; }

  virtual core::ValidationResult validate_block(const core::ChainView& chain,
                                                const core::StoredBlock& parent,
                                                const core::Block& candidate) const = 0;

  // Canonical-chain bookkeeping (stake ledger, mostly). `extend` is the fast
  // path when the new head is a child of the previous one; `rebuild` replays
  // the whole winning branch after a reorg.
  virtual void on_canonical_extend(const core::StoredBlock& b);
  virtual void on_canonical_rebuild(const std::vector<const core::StoredBlock*>& path);

  // Called when `node` is caught misbehaving (broken proof or barred block).
  virtual void flag_misbehavior(const std::string& node);

  // Key distribution: every node's public key is published before the run.
  virtual const core::Hash256* public_key() const { return nullptr; }
  virtual void set_directory(const std::map<std::string, core::Hash256>& directory);

  // Introspection for metrics and tests.
  virtual const CoinLedger* ledger() const { return nullptr; }
  virtual const AccessControl* access() const { return nullptr; }

  // Method-specific bookkeeping a node has to hold in memory beyond the
  // chain itself: key directory, whitelist, ban ring. Feeds the per-node
  // memory counter.
  virtual std::uint64_t state_bytes(const core::ChainView& chain) const;

  const ConsensusRules& rules() const { return rules_; }
  const std::string& label() const { return label_; }

 protected:
  // Shared body policy: one reward to the creator of exactly block_reward,
  // and the body capped at max_obs_per_block.
  core::ValidationResult validate_body(const core::Block& candidate) const;

  ConsensusRules rules_;
  std::string label_;
  std::vector<std::string> cluster_;
};

std::unique_ptr<Engine> make_engine(const ConsensusRules& rules, std::string label,
                                    const std::vector<std::string>& cluster, core::DetRng& rng);

}  // namespace blocksim::consensus
