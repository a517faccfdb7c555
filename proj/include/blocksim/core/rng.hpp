// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <string_view>

#include "blocksim/core/sha256.hpp"

namespace blocksim::core {

// Per-node deterministic randomness. The generator is seeded from a digest of
// (run seed, label), so node streams are independent and stable no matter how
// the caller interleaves draws across nodes. Sampling is done with explicit
// rejection instead of std::uniform_int_distribution, whose output is
// implementation-defined and would break run reproducibility across standard
// libraries.
class DetRng {
 public:
  DetRng(std::uint64_t run_seed, std::string_view label) {
    ByteWriter w;
    w.u64(run_seed);
    w.str(label);
    Hash256 d = Sha256::of(w.bytes());
    std::uint64_t s = 0;
    for (int i = 0; i < 8; ++i) s |= static_cast<std::uint64_t>(d[i]) << (8 * i);
    gen_.seed(s);
  }

  std::uint64_t next() { return gen_(); }

  // Uniform draw from [lo, hi], both ends included.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t range = hi - lo + 1;  // hi == UINT64_MAX && lo == 0 not used here
    std::uint64_t limit = range == 0 ? 0 : UINT64_MAX - UINT64_MAX % range;
    if (range == 0) return gen_();
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return lo + v % range;
  }

  void fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t v = gen_();
      for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
        out[i] = static_cast<std::uint8_t>(v >> (8 * b));
      }
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace blocksim::core
