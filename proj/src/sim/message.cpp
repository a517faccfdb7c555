// SPDX-License-Identifier: Apache-2.0
#include "blocksim/sim/message.hpp"

namespace blocksim::sim {
namespace {

// Observation on the wire: kind byte, id string, sim_time, payload word.
std::size_t obs_bytes(const core::Observation& o) {
  return 1 + 4 + o.sensor_id.size() + 8 + 8;
}

struct SizeVisitor {
  std::size_t operator()(const DataRequest&) const {
    return 32 + 8;  // head digest + height
  }
  std::size_t operator()(const DataResponse& r) const {
    std::size_t total = 4;  // block count
    for (const auto& b : r.blocks) total += core::serialized_size(b);
    return total;
  }
  std::size_t operator()(const TransactionMsg& t) const { return obs_bytes(t.obs); }
  std::size_t operator()(const BlockAnnounce& a) const { return core::serialized_size(a.block); }
  std::size_t operator()(const LotteryAnnounceMsg& l) const {
    // label, round, threshold (num/den), proof (y, eval, bind, seed).
    return 4 + l.draw.node.size() + 4 + 8 + 8 + 32 * 4;
  }
  std::size_t operator()(const LotteryVerifyMsg& v) const {
    return 4 + v.about.size() + 4 + 1;
  }
};

}  // namespace

std::size_t payload_bytes(const Payload& p) { return std::visit(SizeVisitor{}, p); }

}  // namespace blocksim::sim
