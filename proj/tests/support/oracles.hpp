// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations the tests check the library against.
// Everything here is deliberately written the slow, obvious way and shares no
// code with the implementations under test.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "blocksim/consensus/rules.hpp"
#include "blocksim/core/block.hpp"
#include "blocksim/core/chain_view.hpp"
#include "blocksim/monitor/ingest.hpp"

namespace testsupport {

// OpenSSL-backed SHA-256, the external reference for the in-tree hasher.
blocksim::core::Hash256 sha256_ref(std::span<const std::uint8_t> data);
blocksim::core::Hash256 sha256_ref(std::string_view s);

// Coin model tracking every coin as an individual with its own acquisition
// slice. Quadratic and proud of it; the ledger under test keeps cohorts.
class CoinOracle {
 public:
  void endow(const std::string& label, std::uint64_t coins);
  std::uint64_t balance(const std::string& label) const;
  std::uint64_t coinage(const std::string& label, std::uint64_t now_slice) const;
  std::uint64_t coins_covering(const std::string& label, std::uint64_t units,
                               std::uint64_t now_slice) const;
  void invest(const std::string& label, std::uint64_t coins, std::uint64_t now_slice);
  void reward(const std::string& label, std::uint64_t coins, std::uint64_t now_slice);

 private:
  // Acquisition slice per coin, kept sorted ascending (oldest first).
  std::map<std::string, std::vector<std::uint64_t>> coins_;
};

// Centralized threshold detector: replays the reading stream with global
// knowledge, tracking each node's mean over its sensors' latest values and
// the cluster mean over node means. A crossing is a side change of
// (mean - threshold) once every node has reported at least once.
struct RefCrossing {
  std::uint64_t t = 0;
  int direction = 0;  // +1 up, -1 down
};
std::vector<RefCrossing> reference_crossings(const blocksim::monitor::StreamSet& streams,
                                             double threshold);

// Block assembly for hand-built chains: sorts the body canonically and grinds
// the nonce until the digest meets the (possibly widened) difficulty target.
blocksim::core::Block make_block(const blocksim::core::StoredBlock& parent,
                                 std::uint64_t timestamp, std::string miner,
                                 std::vector<blocksim::core::Observation> obs,
                                 blocksim::core::ProofMeta proof, unsigned nibbles,
                                 std::uint64_t mult_num = 1, std::uint64_t mult_den = 1);

blocksim::core::StoredBlock store(const blocksim::core::Block& b);

blocksim::core::Observation reward_obs(const std::string& miner, std::uint64_t t,
                                       std::uint64_t amount);
blocksim::core::Observation reading_obs(const std::string& sensor, std::uint64_t t, double value);

// Synthetic stream builders, shaped like ingest_csv output: sensor i goes to
// node i mod n_nodes, readings every `cadence` seconds from t = 0 to
// `duration` inclusive.
blocksim::monitor::StreamSet constant_streams(int n_sensors, int n_nodes, double value,
                                              std::uint64_t duration, std::uint64_t cadence);
blocksim::monitor::StreamSet ramp_streams(int n_sensors, int n_nodes, double lo, double hi,
                                          std::uint64_t duration, std::uint64_t cadence);

}  // namespace testsupport
