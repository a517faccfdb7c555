// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>
#include <vector>

#include "blocksim/consensus/engine.hpp"
#include "blocksim/core/block.hpp"
#include "blocksim/metrics/metrics.hpp"

namespace blocksim::sim {

// Head comparison probe: "my head is this digest at this height".
struct DataRequest {
  core::Hash256 head{};
  std::uint64_t height = 0;
};

// The canonical blocks the requester is missing (or the full chain when its
// head is unknown to the responder).
struct DataResponse {
  std::vector<core::Block> blocks;
};

// One observation looking for a block: sensor report or stake bid.
struct TransactionMsg {
  core::Observation obs;
};

struct BlockAnnounce {
  core::Block block;
};

struct LotteryAnnounceMsg {
  consensus::LotteryDraw draw;
};

// Acknowledgment that a peer's draw verified.
struct LotteryVerifyMsg {
  std::string about;
  std::uint32_t round = 0;
  bool valid = false;
};

using Payload = std::variant<DataRequest, DataResponse, TransactionMsg, BlockAnnounce,
                             LotteryAnnounceMsg, LotteryVerifyMsg>;

// The variant order matches the metrics wire taxonomy one to one.
inline metrics::Wire wire_of(const Payload& p) {
  return static_cast<metrics::Wire>(p.index());
}

// Canonical serialized size of the payload; this is what the byte counters
// account, identically on the sending and receiving side.
std::size_t payload_bytes(const Payload& p);

struct Message {
  int src = -1;
  int dst = -1;
  double send_time = 0;
  double deliver_time = 0;
  Payload payload;
};

}  // namespace blocksim::sim
