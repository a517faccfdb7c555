// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "blocksim/consensus/engine.hpp"

namespace blocksim::consensus {

// Everyone hashes, flat target, no proof metadata.
class PowEngine : public Engine {
 public:
  using Engine::Engine;

  RaceStart begin_race(const core::ChainView& chain, double now, core::DetRng& rng) override;
  MiningPlan mining_plan() const override;
  core::ValidationResult validate_block(const core::ChainView& chain,
                                        const core::StoredBlock& parent,
                                        const core::Block& candidate) const override;
};

// Everyone hashes; each race the node bids part of its coin age for a wider
// target and publishes the bid as a self-transfer.
class PosEngine : public Engine {
 public:
  PosEngine(const ConsensusRules& rules, std::string label, std::vector<std::string> cluster);

  RaceStart begin_race(const core::ChainView& chain, double now, core::DetRng& rng) override;
  MiningPlan mining_plan() const override;
  core::ProofMeta proof_meta() const override;
  core::ValidationResult validate_block(const core::ChainView& chain,
                                        const core::StoredBlock& parent,
                                        const core::Block& candidate) const override;
  void on_canonical_extend(const core::StoredBlock& b) override;
  void on_canonical_rebuild(const std::vector<const core::StoredBlock*>& path) override;
  const CoinLedger* ledger() const override { return &ledger_; }

 private:
  std::uint64_t slice_at(std::uint64_t seconds) const {
    return rules_.slice_seconds == 0 ? 0 : seconds / rules_.slice_seconds;
  }

  CoinLedger ledger_;
  core::Hash256 ledger_head_{};
  std::uint64_t bid_units_ = 0;
  std::uint64_t bid_coins_ = 0;
};

// Per-race hash lottery electing a small committee; only committee members
// hash. Covers both the open variant and the whitelisted variant with the
// recent-creator ban (`gated`).
class SortitionEngine : public Engine {
 public:
  SortitionEngine(const ConsensusRules& rules, std::string label,
                  std::vector<std::string> cluster, bool gated, core::DetRng& rng);

  RaceStart begin_race(const core::ChainView& chain, double now, core::DetRng& rng) override;
  AnnounceVerdict on_lottery_announce(const core::ChainView& chain,
                                      const LotteryDraw& draw) override;
  RelaxOutcome on_lottery_timeout(const core::ChainView& chain, core::DetRng& rng) override;
  bool race_ready() const override { return race_.ready; }
  MiningPlan mining_plan() const override;
  core::ProofMeta proof_meta() const override;
  core::ValidationResult validate_block(const core::ChainView& chain,
                                        const core::StoredBlock& parent,
                                        const core::Block& candidate) const override;
  void flag_misbehavior(const std::string& node) override;
  const core::Hash256* public_key() const override { return &keys_.pk; }
  void set_directory(const std::map<std::string, core::Hash256>& directory) override;
  const AccessControl* access() const override { return gated_ ? &access_ : nullptr; }
  std::uint64_t state_bytes(const core::ChainView& chain) const override;

 private:
  struct Race {
    core::Hash256 seed{};       // digest of the head this race extends
    core::Hash256 prev_seed{};  // head's parent digest, if any
    bool has_prev_seed = false;
    std::uint32_t round = 0;
    Rational threshold;
    bool eligible = false;
    bool selected = false;
    bool ready = false;
    vrf::Proof draw;
    core::SortitionMeta meta;  // frozen when selection happens
    std::set<std::string> committee;
  };

  bool may_create(const core::ChainView& chain, const core::Hash256& parent_digest,
                  const std::string& node) const;
  std::optional<LotteryDraw> self_announcement() const;
  void refresh_ready();

  bool gated_ = false;
  vrf::KeyPair keys_;
  AccessControl access_;
  std::map<std::string, core::Hash256> directory_;
  std::uint32_t committee_target_ = 1;
  Race race_;
};

}  // namespace blocksim::consensus
