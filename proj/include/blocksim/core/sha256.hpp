// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "blocksim/core/bytes.hpp"

namespace blocksim::core {

// FIPS 180-4 SHA-256, kept in-tree for one reason: the mining loop hashes the
// same block prefix with millions of trailing nonces, and a copyable hasher
// lets us absorb the prefix once and finish each attempt from the saved
// mid-state. The test suite pins this implementation against an external
// reference over a spread of message lengths.
class Sha256 {
 public:
  Sha256();

  void update(std::span<const std::uint8_t> data);
  void update(std::string_view s) {
    update(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()),
                                         s.size()));
  }

  // Non-destructive: pads a copy of the running state, so the same instance
  // can keep absorbing or be finalized repeatedly.
  Hash256 digest() const;

  static Hash256 of(std::span<const std::uint8_t> data) {
    Sha256 h;
    h.update(data);
    return h.digest();
  }

  static Hash256 of(std::string_view s) {
    Sha256 h;
    h.update(s);
    return h.digest();
  }

 private:
  void compress(const std::uint8_t* chunk);

  std::array<std::uint32_t, 8> state_;
  std::array<std::uint8_t, 64> buf_{};
  std::uint64_t total_ = 0;  // bytes absorbed so far
  std::size_t fill_ = 0;     // bytes pending in buf_
};

}  // namespace blocksim::core
