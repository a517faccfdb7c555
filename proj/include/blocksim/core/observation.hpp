// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <tuple>

namespace blocksim::core {

// Payload kinds a block can carry. sensor_reading moves monitoring data,
// coinage_investment is the stake-reset self-transfer, reward is the coin
// grant a block pays its creator.
enum class ObsKind : std::uint8_t {
  sensor_reading = 0,
  coinage_investment = 1,
  reward = 2,
};

inline const char* to_string(ObsKind k) {
  switch (k) {
    case ObsKind::sensor_reading: return "sensor_reading";
    case ObsKind::coinage_investment: return "coinage_investment";
    case ObsKind::reward: return "reward";
  }
  return "unknown";
}

// One entry in a block body. sensor_id doubles as the node label for the two
// coin kinds; value is only meaningful for sensor readings, amount only for
// coin movements.
struct Observation {
  std::string sensor_id;
  std::uint64_t sim_time = 0;
  ObsKind kind = ObsKind::sensor_reading;
  double value = 0.0;
  std::uint64_t amount = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// Identity used for duplicate suppression across blocks: a node re-offers an
// observation until it lands on the canonical chain, and every copy carries
// the same key.
struct ObsKey {
  std::uint8_t kind = 0;
  std::string sensor_id;
  std::uint64_t sim_time = 0;

  friend auto operator<=>(const ObsKey&, const ObsKey&) = default;
};

inline ObsKey key_of(const Observation& o) {
  return ObsKey{static_cast<std::uint8_t>(o.kind), o.sensor_id, o.sim_time};
}

// Canonical in-block order, so two nodes assembling the same set serialize
// identical bodies.
inline bool canonical_less(const Observation& a, const Observation& b) {
  return std::tie(a.sensor_id, a.sim_time, a.kind) < std::tie(b.sensor_id, b.sim_time, b.kind);
}

}  // namespace blocksim::core
