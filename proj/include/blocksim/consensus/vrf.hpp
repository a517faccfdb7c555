// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "blocksim/core/bytes.hpp"
#include "blocksim/core/rng.hpp"

namespace blocksim::consensus::vrf {

// Verifiable random function stand-in, built from domain-separated SHA-256.
// It has the shape and determinism of a real VRF (keypair, evaluate, verify,
// uniform output) and verification catches any tampering with the seed, the
// public key, or the proof bytes. It is NOT a secure VRF: without asymmetric
// hardness an adversary unbound by the simulation's rules could grind
// evaluations. The simulator only ever runs rule-following nodes plus scripted
// corruption, which this scheme detects; swap in an elliptic-curve VRF behind
// this same interface before trusting it outside the simulator.

struct KeyPair {
  std::array<std::uint8_t, 32> sk{};
  core::Hash256 pk{};
};

struct Proof {
  core::Hash256 y{};         // the lottery draw, uniform over 2^256
  core::Hash256 eval{};      // evaluation token y is derived from
  core::Hash256 bind{};      // binds (pk, seed, eval) together
  core::Hash256 seed_used{};

  friend bool operator==(const Proof&, const Proof&) = default;
};

KeyPair keygen(core::DetRng& rng);
Proof evaluate(const KeyPair& kp, const core::Hash256& seed);
bool verify(const core::Hash256& pk, const core::Hash256& seed, const Proof& proof);

}  // namespace blocksim::consensus::vrf
