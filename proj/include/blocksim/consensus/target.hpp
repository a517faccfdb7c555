// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "blocksim/consensus/rules.hpp"
#include "blocksim/core/bytes.hpp"

namespace blocksim::consensus {

// Difficulty and lottery comparisons, all exact. A digest read big-endian is
// a 256-bit integer; targets are powers of two scaled by small rationals, so
// every check is one cross-multiplied integer comparison in 512 bits.

// digest < 2^(256 - 4*nibbles) * (mult_num / mult_den), i.e. the plain
// leading-zero-nibbles test when the multiplier is 1.
bool hash_meets_target(const core::Hash256& digest, unsigned nibbles, std::uint64_t mult_num,
                       std::uint64_t mult_den);

inline bool hash_meets_target(const core::Hash256& digest, unsigned nibbles) {
  return hash_meets_target(digest, nibbles, 1, 1);
}

// y < 2^256 * (num / den): a draw wins a lottery of probability num/den.
bool lottery_wins(const core::Hash256& y, Rational threshold);

// base * 2^steps, capped at 1/1.
Rational relaxed_threshold(Rational base, std::uint32_t steps);

inline bool threshold_capped(Rational r) { return r == Rational{1, 1}; }

}  // namespace blocksim::consensus
