// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace blocksim::consensus {

enum class Method : std::uint8_t { pow, pos, dpow, ppokw };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::pow: return "pow";
    case Method::pos: return "pos";
    case Method::dpow: return "dpow";
    case Method::ppokw: return "ppokw";
  }
  return "unknown";
}

inline std::optional<Method> method_from_string(std::string_view s) {
  if (s == "pow") return Method::pow;
  if (s == "pos") return Method::pos;
  if (s == "dpow") return Method::dpow;
  if (s == "ppokw") return Method::ppokw;
  return std::nullopt;
}

// Exact fraction, kept unreduced. Comparisons cross-multiply in 128 bits, so
// no silent precision loss anywhere in target or lottery math.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

struct ConsensusRules {
  Method method = Method::pow;
  unsigned difficulty_nibbles = 2;
  std::uint64_t block_reward = 1;
  bool allow_empty_blocks = true;
  std::uint64_t max_obs_per_block = 64;
  std::uint64_t prune_depth = 6;

  // Stake parameters. Coin age accrues per wall-clock slice; easing is
  // multiplicative: a draw of v units widens the target by (1 + alpha * v).
  std::uint64_t initial_endowment = 100;
  std::uint64_t slice_seconds = 60;
  Rational pos_alpha{1, 100};

  // Committee parameters for the delegating methods. The sortition threshold
  // is the initial per-node win probability; committee_fraction sets how many
  // winners a race waits for. With committee_scaled_target on, the per-block
  // hash target is widened by n/committee so the expected chain growth
  // matches a same-size cluster where everyone mines.
  Rational sortition_threshold{1, 20};
  Rational committee_fraction{1, 5};
  bool committee_scaled_target = true;
  std::uint64_t ban_window = 3;

  std::uint32_t committee_target(std::uint32_t n_nodes) const {
    std::uint64_t c = (static_cast<std::uint64_t>(n_nodes) * committee_fraction.num +
                       committee_fraction.den - 1) /
                      committee_fraction.den;
    return static_cast<std::uint32_t>(c == 0 ? 1 : c);
  }

  bool uses_lottery() const { return method == Method::dpow || method == Method::ppokw; }
};

}  // namespace blocksim::consensus
