// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blocksim/core/bytes.hpp"
#include "blocksim/core/observation.hpp"
#include "blocksim/core/sha256.hpp"

namespace blocksim::core {

// Stake proof: how many coinage units the creator burned for its eased
// difficulty. The coins actually moved appear as a coinage_investment
// observation in the body.
struct StakeMeta {
  std::uint64_t investment = 0;

  friend bool operator==(const StakeMeta&, const StakeMeta&) = default;
};

// Lottery proof carried by committee-based blocks: the winning draw y, the
// material to re-derive it from the creator's public key, and the threshold
// (as a rational) plus relaxation round the creator claims it won under.
struct SortitionMeta {
  Hash256 y{};
  Hash256 proof_eval{};
  Hash256 proof_bind{};
  Hash256 seed_used{};
  std::uint64_t threshold_num = 1;
  std::uint64_t threshold_den = 1;
  std::uint32_t round = 0;

  friend bool operator==(const SortitionMeta&, const SortitionMeta&) = default;
};

using ProofMeta = std::variant<std::monostate, StakeMeta, SortitionMeta>;

struct Block {
  std::uint64_t height = 0;
  Hash256 prev_hash{};
  std::uint64_t timestamp = 0;  // simulated seconds, whole
  std::string miner_id;
  std::vector<Observation> observations;
  ProofMeta proof;
  std::uint64_t nonce = 0;

  friend bool operator==(const Block&, const Block&) = default;
};

// Canonical byte layout (docs/serialization.md). The nonce is the final
// field, so a candidate's hash can be finished from a saved mid-state per
// nonce attempt.
std::vector<std::uint8_t> serialize_block(const Block& b);
std::optional<Block> parse_block(std::span<const std::uint8_t> bytes);

// Size of serialize_block(b) computed without materializing the buffer.
std::size_t serialized_size(const Block& b);

Hash256 block_hash(const Block& b);

// Mid-state over every field except the trailing nonce.
Sha256 hash_prefix_state(const Block& b);
Hash256 hash_with_nonce(const Sha256& prefix, std::uint64_t nonce);

// The shared root every chain starts from. Fixed contents, so every node
// derives the same digest with no coordination.
Block genesis_block();

}  // namespace blocksim::core
