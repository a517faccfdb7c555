// SPDX-License-Identifier: Apache-2.0
#include "blocksim/core/block.hpp"

namespace blocksim::core {

namespace {

constexpr std::uint32_t kLayoutVersion = 1;

enum ProofTag : std::uint8_t { kProofNone = 0, kProofStake = 1, kProofSortition = 2 };

void write_prefix(ByteWriter& w, const Block& b) {
  w.u32(kLayoutVersion);
  w.u64(b.height);
  w.hash(b.prev_hash);
  w.u64(b.timestamp);
  w.str(b.miner_id);
  w.u32(static_cast<std::uint32_t>(b.observations.size()));
  for (const auto& o : b.observations) {
    w.u8(static_cast<std::uint8_t>(o.kind));
    w.str(o.sensor_id);
    w.u64(o.sim_time);
    if (o.kind == ObsKind::sensor_reading) {
      w.f64bits(o.value);
    } else {
      w.u64(o.amount);
    }
  }
  if (std::holds_alternative<std::monostate>(b.proof)) {
    w.u8(kProofNone);
  } else if (const auto* s = std::get_if<StakeMeta>(&b.proof)) {
    w.u8(kProofStake);
    w.u64(s->investment);
  } else {
    const auto& m = std::get<SortitionMeta>(b.proof);
    w.u8(kProofSortition);
    w.hash(m.y);
    w.hash(m.proof_eval);
    w.hash(m.proof_bind);
    w.hash(m.seed_used);
    w.u64(m.threshold_num);
    w.u64(m.threshold_den);
    w.u32(m.round);
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_block(const Block& b) {
  ByteWriter w;
  write_prefix(w, b);
  w.u64(b.nonce);
  return w.take();
}

std::optional<Block> parse_block(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.u32() != kLayoutVersion) return std::nullopt;

  Block b;
  b.height = r.u64();
  b.prev_hash = r.hash();
  b.timestamp = r.u64();
  b.miner_id = r.str();

  std::uint32_t count = r.u32();
  // Cheap sanity bound: each observation takes at least 13 bytes, so a count
  // that cannot fit in the remaining input is garbage, not a huge alloc.
  if (static_cast<std::uint64_t>(count) * 13 > bytes.size()) return std::nullopt;
  b.observations.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Observation o;
    std::uint8_t kind = r.u8();
    if (kind > static_cast<std::uint8_t>(ObsKind::reward)) return std::nullopt;
    o.kind = static_cast<ObsKind>(kind);
    o.sensor_id = r.str();
    o.sim_time = r.u64();
    if (o.kind == ObsKind::sensor_reading) {
      o.value = r.f64bits();
    } else {
      o.amount = r.u64();
    }
    b.observations.push_back(std::move(o));
  }

  std::uint8_t tag = r.u8();
  switch (tag) {
    case kProofNone:
      b.proof = std::monostate{};
      break;
    case kProofStake: {
      StakeMeta s;
      s.investment = r.u64();
      b.proof = s;
      break;
    }
    case kProofSortition: {
      SortitionMeta m;
      m.y = r.hash();
      m.proof_eval = r.hash();
      m.proof_bind = r.hash();
      m.seed_used = r.hash();
      m.threshold_num = r.u64();
      m.threshold_den = r.u64();
      m.round = r.u32();
      b.proof = m;
      break;
    }
    default:
      return std::nullopt;
  }

  b.nonce = r.u64();
  if (!r.at_end()) return std::nullopt;
  return b;
}

std::size_t serialized_size(const Block& b) {
  std::size_t n = 4 + 8 + 32 + 8;          // version, height, prev, timestamp
  n += 4 + b.miner_id.size();              // miner
  n += 4;                                  // observation count
  for (const auto& o : b.observations) {
    n += 1 + 4 + o.sensor_id.size() + 8 + 8;
  }
  n += 1;  // proof tag
  if (std::holds_alternative<StakeMeta>(b.proof)) {
    n += 8;
  } else if (std::holds_alternative<SortitionMeta>(b.proof)) {
    n += 4 * 32 + 8 + 8 + 4;
  }
  n += 8;  // nonce
  return n;
}

Hash256 block_hash(const Block& b) {
  auto bytes = serialize_block(b);
  return Sha256::of(bytes);
}

Sha256 hash_prefix_state(const Block& b) {
  ByteWriter w;
  write_prefix(w, b);
  Sha256 h;
  h.update(w.bytes());
  return h;
}

Hash256 hash_with_nonce(const Sha256& prefix, std::uint64_t nonce) {
  Sha256 h = prefix;
  std::uint8_t le[8];
  for (int i = 0; i < 8; ++i) le[i] = static_cast<std::uint8_t>(nonce >> (8 * i));
  h.update(std::span<const std::uint8_t>(le, 8));
  return h.digest();
}

Block genesis_block() {
  Block g;
  g.height = 0;
  g.prev_hash = kZeroHash;
  g.timestamp = 0;
  g.miner_id = "genesis";
  g.proof = std::monostate{};
  g.nonce = 0;
  return g;
}

}  // namespace blocksim::core
