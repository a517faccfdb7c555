// SPDX-License-Identifier: Apache-2.0
#include "support/oracles.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cassert>
#include <numeric>
#include <set>
#include <stdexcept>

#include "blocksim/consensus/target.hpp"

namespace testsupport {

using namespace blocksim;

core::Hash256 sha256_ref(std::span<const std::uint8_t> data) {
  core::Hash256 out{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
  assert(len == out.size());
  return out;
}

core::Hash256 sha256_ref(std::string_view s) {
  return sha256_ref(
      std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

void CoinOracle::endow(const std::string& label, std::uint64_t coins) {
  auto& v = coins_[label];
  v.insert(v.end(), coins, 0);
}

std::uint64_t CoinOracle::balance(const std::string& label) const {
  auto it = coins_.find(label);
  return it == coins_.end() ? 0 : it->second.size();
}

std::uint64_t CoinOracle::coinage(const std::string& label, std::uint64_t now_slice) const {
  auto it = coins_.find(label);
  if (it == coins_.end()) return 0;
  std::uint64_t total = 0;
  for (std::uint64_t acquired : it->second) total += now_slice - acquired;
  return total;
}

std::uint64_t CoinOracle::coins_covering(const std::string& label, std::uint64_t units,
                                         std::uint64_t now_slice) const {
  auto it = coins_.find(label);
  if (it == coins_.end() || units == 0) return 0;
  std::uint64_t covered = 0, count = 0;
  for (std::uint64_t acquired : it->second) {  // sorted ascending: oldest first
    covered += now_slice - acquired;
    ++count;
    if (covered >= units) return count;
  }
  throw std::logic_error("coins_covering asked for more units than the coinage held");
}

void CoinOracle::invest(const std::string& label, std::uint64_t coins, std::uint64_t now_slice) {
  auto& v = coins_[label];
  std::uint64_t n = std::min<std::uint64_t>(coins, v.size());
  v.erase(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
  v.insert(v.end(), n, now_slice);
  std::sort(v.begin(), v.end());
}

void CoinOracle::reward(const std::string& label, std::uint64_t coins, std::uint64_t now_slice) {
  auto& v = coins_[label];
  v.insert(v.end(), coins, now_slice);
  std::sort(v.begin(), v.end());
}

std::vector<RefCrossing> reference_crossings(const monitor::StreamSet& streams, double threshold) {
  std::map<int, std::map<std::string, double>> latest;  // node -> sensor -> value
  std::vector<RefCrossing> out;
  bool have_side = false;
  int prev = 0;

  auto side = [&](double x) { return (x > 0) - (x < 0); };

  std::size_t i = 0;
  while (i < streams.rows.size()) {
    // Fold every reading with the same timestamp before checking the mean:
    // simultaneous readings move it as one step, same as the ingest order
    // the simulator replays.
    std::uint64_t t = streams.rows[i].t;
    for (; i < streams.rows.size() && streams.rows[i].t == t; ++i) {
      const auto& row = streams.rows[i];
      latest[streams.sensor_node.at(row.sensor_id)][row.sensor_id] = row.temperature;
    }
    if (latest.size() != streams.monitored_nodes.size()) continue;

    double cluster = 0;
    for (const auto& [node, sensors] : latest) {
      double local = 0;
      for (const auto& [id, v] : sensors) local += v;
      cluster += local / static_cast<double>(sensors.size());
    }
    cluster /= static_cast<double>(latest.size());

    int s = side(cluster - threshold);
    if (have_side && s != prev) out.push_back({t, s > prev ? +1 : -1});
    have_side = true;
    prev = s;
  }
  return out;
}

core::Block make_block(const core::StoredBlock& parent, std::uint64_t timestamp, std::string miner,
                       std::vector<core::Observation> obs, core::ProofMeta proof, unsigned nibbles,
                       std::uint64_t mult_num, std::uint64_t mult_den) {
  core::Block b;
  b.height = parent.block.height + 1;
  b.prev_hash = parent.digest;
  b.timestamp = timestamp;
  b.miner_id = std::move(miner);
  std::sort(obs.begin(), obs.end(), core::canonical_less);
  b.observations = std::move(obs);
  b.proof = std::move(proof);
  for (b.nonce = 0;; ++b.nonce) {
    if (consensus::hash_meets_target(core::block_hash(b), nibbles, mult_num, mult_den)) return b;
  }
}

core::StoredBlock store(const core::Block& b) {
  return core::StoredBlock{b, core::block_hash(b), core::serialized_size(b)};
}

core::Observation reward_obs(const std::string& miner, std::uint64_t t, std::uint64_t amount) {
  core::Observation o;
  o.sensor_id = miner;
  o.sim_time = t;
  o.kind = core::ObsKind::reward;
  o.amount = amount;
  return o;
}

core::Observation reading_obs(const std::string& sensor, std::uint64_t t, double value) {
  core::Observation o;
  o.sensor_id = sensor;
  o.sim_time = t;
  o.kind = core::ObsKind::sensor_reading;
  o.value = value;
  return o;
}

namespace {

monitor::StreamSet shaped_streams(int n_sensors, int n_nodes, std::uint64_t duration,
                                  std::uint64_t cadence, auto&& value_at) {
  monitor::StreamSet s;
  for (int i = 0; i < n_sensors; ++i) {
    std::string id = "s" + std::to_string(i);
    s.sensors.push_back(id);
    s.sensor_node[id] = i % n_nodes;
    s.monitored_nodes.insert(i % n_nodes);
  }
  for (std::uint64_t t = 0; t <= duration; t += cadence) {
    for (int i = 0; i < n_sensors; ++i) {
      s.rows.push_back({s.sensors[static_cast<std::size_t>(i)], t, value_at(t, i)});
    }
  }
  return s;
}

}  // namespace

monitor::StreamSet constant_streams(int n_sensors, int n_nodes, double value,
                                    std::uint64_t duration, std::uint64_t cadence) {
  return shaped_streams(n_sensors, n_nodes, duration, cadence,
                        [&](std::uint64_t, int) { return value; });
}

monitor::StreamSet ramp_streams(int n_sensors, int n_nodes, double lo, double hi,
                                std::uint64_t duration, std::uint64_t cadence) {
  return shaped_streams(n_sensors, n_nodes, duration, cadence, [&](std::uint64_t t, int i) {
    double frac = static_cast<double>(t) / static_cast<double>(duration);
    return lo + (hi - lo) * frac + 0.01 * i;  // small per-sensor offset
  });
}

}  // namespace testsupport
