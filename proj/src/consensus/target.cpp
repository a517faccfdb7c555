// SPDX-License-Identifier: Apache-2.0
#include "blocksim/consensus/target.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace blocksim::consensus {

namespace {

using u512 = boost::multiprecision::uint512_t;

u512 digest_value(const core::Hash256& h) {
  u512 v = 0;
  for (std::uint8_t b : h) {
    v <<= 8;
    v |= b;
  }
  return v;
}

}  // namespace

bool hash_meets_target(const core::Hash256& digest, unsigned nibbles, std::uint64_t mult_num,
                       std::uint64_t mult_den) {
  if (nibbles > 64) nibbles = 64;
  u512 base = u512(1) << (256 - 4 * nibbles);
  return digest_value(digest) * mult_den < base * mult_num;
}

bool lottery_wins(const core::Hash256& y, Rational threshold) {
  u512 full = u512(1) << 256;
  return digest_value(y) * threshold.den < full * threshold.num;
}

Rational relaxed_threshold(Rational base, std::uint32_t steps) {
  if (base.num >= base.den) return {1, 1};
  unsigned __int128 num = base.num;
  for (std::uint32_t i = 0; i < steps; ++i) {
    num <<= 1;
    if (num >= base.den) return {1, 1};
  }
  return {static_cast<std::uint64_t>(num), base.den};
}

}  // namespace blocksim::consensus
