// SPDX-License-Identifier: Apache-2.0
#include "blocksim/sim/node.hpp"

#include <algorithm>
#include <cmath>

#include "blocksim/consensus/target.hpp"
#include "blocksim/core/validate.hpp"

namespace blocksim::sim {
namespace {

constexpr std::size_t kMaxOrphans = 64;

std::string endpoint_of(std::size_t index) {
  return "10.0." + std::to_string(index / 256) + "." + std::to_string(index % 256) + ":" +
         std::to_string(9000 + index);
}

// A corrupted block must fail proof validation everywhere: breaking the
// lottery proof is deterministic, a nonce flip leaves the hash target to
// chance, so prefer the proof when there is one.
void corrupt_block(core::Block& b) {
  if (auto* meta = std::get_if<core::SortitionMeta>(&b.proof)) {
    meta->y[0] ^= 0xff;
  } else {
    b.nonce ^= 1;
  }
}

}  // namespace

NodeRuntime::NodeRuntime(int index, std::string label, const consensus::ConsensusRules& rules,
                         std::uint64_t run_seed, const std::vector<std::string>& cluster,
                         double event_threshold, const std::set<std::string>& monitored,
                         NetContext& net)
    : idx_(index),
      label_(std::move(label)),
      rules_(rules),
      cluster_(cluster),
      net_(net),
      rng_(run_seed, label_),
      engine_(consensus::make_engine(rules_, label_, cluster_, rng_)),
      metrics_(label_, net.window_seconds(), net.duration()),
      monitor_(label_, event_threshold, monitored) {
  for (std::size_t i = 0; i < cluster_.size(); ++i) {
    address_book_bytes_ += cluster_[i].size() + endpoint_of(i).size();
  }
}

void NodeRuntime::start(double now) {
  engine_->on_canonical_rebuild(chain_.canonical_path());
  begin_race(now);
}

std::uint64_t NodeRuntime::memory_bytes() const {
  return chain_.chain_weight_bytes() + address_book_bytes_ + engine_->state_bytes(chain_);
}

void NodeRuntime::send_to(int dst, Payload payload, double now) {
  metrics_.on_message(metrics::Dir::out, wire_of(payload), payload_bytes(payload), now);
  net_.send(idx_, dst, std::move(payload), now);
}

void NodeRuntime::broadcast_payload(Payload payload, double now) {
  if (cluster_.size() <= 1) return;
  const auto wire = wire_of(payload);
  const auto bytes = payload_bytes(payload);
  for (std::size_t i = 0; i + 1 < cluster_.size(); ++i) {
    metrics_.on_message(metrics::Dir::out, wire, bytes, now);
  }
  net_.broadcast(idx_, std::move(payload), now);
}

bool NodeRuntime::pool_put(const core::Observation& obs, bool overwrite) {
  const auto key = core::key_of(obs);
  if (included_.count(key) > 0) return false;
  auto [it, fresh] = seen_txs_.try_emplace(key, obs);
  if (!fresh) {
    if (!overwrite || it->second == obs) return false;
    it->second = obs;
  }
  pool_dirty_ = true;
  return true;
}

// --- races and mining ------------------------------------------------------

void NodeRuntime::begin_race(double now) {
  ++race_id_;  // invalidates every scheduled callback of the old race
  mining_ = false;
  if (!active(now)) return;

  auto start = engine_->begin_race(chain_, now, rng_);
  for (auto& obs : start.transactions) {
    pool_put(obs, true);
    broadcast_payload(TransactionMsg{obs}, now);
  }
  if (start.announce) broadcast_payload(LotteryAnnounceMsg{*start.announce}, now);
  if (start.arm_timeout) {
    net_.schedule_lottery_timeout(idx_, now + net_.lottery_wait(), race_id_);
  }
  update_mining(now);
}

void NodeRuntime::update_mining(double now) {
  if (!active(now)) {
    mining_ = false;
    return;
  }
  auto plan = engine_->mining_plan();
  if (plan.mining && !mining_) {
    mining_ = true;
    plan_ = plan;
    start_mining(now);
  } else if (!plan.mining) {
    mining_ = false;
  }
}

void NodeRuntime::start_mining(double now) {
  mine_start_ = now;
  rebuild_candidate(now);
  net_.schedule_mining_slice(idx_, now, race_id_, 0);
}

void NodeRuntime::rebuild_candidate(double now) {
  const auto& head = chain_.head();
  candidate_ = core::Block{};
  candidate_.height = head.block.height + 1;
  candidate_.prev_hash = head.digest;
  candidate_.timestamp = static_cast<std::uint64_t>(now);
  candidate_.miner_id = label_;
  candidate_.proof = engine_->proof_meta();

  // Pool sweep. Stake bids are priced for exactly one height: too old can
  // never be included again and is dropped, too new waits its turn.
  std::vector<core::Observation> body;
  std::optional<core::Observation> own_bid;
  for (auto it = seen_txs_.begin(); it != seen_txs_.end();) {
    const auto& obs = it->second;
    if (obs.kind == core::ObsKind::coinage_investment && obs.sim_time < candidate_.height) {
      it = seen_txs_.erase(it);
      continue;
    }
    if (included_.count(it->first) == 0 &&
        (obs.kind != core::ObsKind::coinage_investment || obs.sim_time == candidate_.height)) {
      if (obs.kind == core::ObsKind::coinage_investment && obs.sensor_id == label_) {
        own_bid = obs;
      } else {
        body.push_back(obs);
      }
    }
    ++it;
  }
  std::size_t cap = std::max<std::uint64_t>(rules_.max_obs_per_block, 2) - 1;
  if (own_bid) cap -= 1;
  if (body.size() > cap) body.resize(cap);
  if (own_bid) body.push_back(*own_bid);
  std::sort(body.begin(), body.end(), core::canonical_less);

  core::Observation reward;
  reward.sensor_id = label_;
  reward.sim_time = candidate_.timestamp;
  reward.kind = core::ObsKind::reward;
  reward.amount = rules_.block_reward;
  body.push_back(std::move(reward));

  candidate_.observations = std::move(body);
  candidate_.nonce = 0;
  prefix_state_ = core::hash_prefix_state(candidate_);
  // Start the scan at a seeded offset: two runs that differ only in seed
  // would otherwise grind identical nonce sequences over identical bodies
  // and find the very same blocks.
  nonce_next_ = rng_.next();
  pool_dirty_ = false;
}

void NodeRuntime::on_mining_slice(std::uint64_t race, std::uint64_t slice, double now) {
  if (race != race_id_ || !mining_) return;
  if (!active(now)) {
    mining_ = false;
    return;
  }
  if (pool_dirty_) rebuild_candidate(now);

  const double rate = net_.hash_rate();
  const double span = net_.duration() - mine_start_;
  const double slice_end = std::min(static_cast<double>(slice + 1), span);
  const auto first = static_cast<std::uint64_t>(static_cast<double>(slice) * rate);
  const auto last = static_cast<std::uint64_t>(slice_end * rate);

  for (std::uint64_t j = first; j < last; ++j) {
    const double t_attempt = mine_start_ + static_cast<double>(j + 1) / rate;
    metrics_.on_mining(1, 1.0 / rate, t_attempt);
    const std::uint64_t nonce = nonce_next_++;
    const auto digest = core::hash_with_nonce(prefix_state_, nonce);
    if (consensus::hash_meets_target(digest, rules_.difficulty_nibbles, plan_.mult_num,
                                     plan_.mult_den)) {
      pending_nonce_ = nonce;
      net_.schedule_block_found(idx_, t_attempt, race_id_);
      return;
    }
  }
  if (mine_start_ + static_cast<double>(slice + 1) < net_.duration()) {
    net_.schedule_mining_slice(idx_, mine_start_ + static_cast<double>(slice + 1), race_id_,
                               slice + 1);
  } else {
    mining_ = false;
  }
}

void NodeRuntime::on_block_found(std::uint64_t race, double now) {
  if (race != race_id_ || !mining_ || !active(now)) return;

  core::Block block = candidate_;
  block.nonce = pending_nonce_;

  if (fault_at_ && !fault_spent_ && now >= *fault_at_) {
    fault_spent_ = true;
    core::Block bad = block;
    corrupt_block(bad);
    broadcast_payload(BlockAnnounce{std::move(bad)}, now);
    // The node believes it published and keeps hashing the same candidate.
    mine_start_ = now;
    net_.schedule_mining_slice(idx_, now, race_id_, 0);
    return;
  }

  const auto old_head = chain_.head_digest();
  if (!insert_and_cascade(block, now, true, -1)) {
    throw InvariantError("node " + label_ + " could not store its own block");
  }
  broadcast_payload(BlockAnnounce{std::move(block)}, now);
  if (chain_.head_digest() != old_head) on_head_changed(old_head, now);
}

void NodeRuntime::on_lottery_timeout(std::uint64_t race, double now) {
  if (race != race_id_ || !active(now)) return;
  auto out = engine_->on_lottery_timeout(chain_, rng_);
  if (out.announce) broadcast_payload(LotteryAnnounceMsg{*out.announce}, now);
  if (out.arm_timeout) {
    net_.schedule_lottery_timeout(idx_, now + net_.lottery_wait(), race_id_);
  }
  update_mining(now);
}

// --- block intake -----------------------------------------------------------

bool NodeRuntime::insert_and_cascade(const core::Block& b, double now, bool own, int announcer) {
  const auto digest = core::block_hash(b);
  if (chain_.contains(digest)) return false;

  const auto* parent = chain_.find(b.prev_hash);
  if (parent == nullptr) {
    if (!own && orphan_digests_.size() < kMaxOrphans && orphan_digests_.count(digest) == 0) {
      orphan_digests_.insert(digest);
      orphans_[b.prev_hash].emplace_back(b, digest);
      if (announcer >= 0 && active(now)) {
        send_to(announcer, DataRequest{chain_.head_digest(), chain_.head_height()}, now);
      }
    }
    return false;
  }

  const auto verdict = engine_->validate_block(chain_, *parent, b);
  if (!verdict.accepted) {
    if (own) {
      throw InvariantError("node " + label_ + " built an invalid block: " +
                           core::to_string(verdict.reason));
    }
    // A broken proof is evidence against the creator; a bad link or
    // timestamp is just a block this node cannot use.
    if (verdict.reason == core::RejectReason::bad_proof) engine_->flag_misbehavior(b.miner_id);
    return false;
  }

  if (!chain_.insert(b, digest)) {
    throw InvariantError("chain store rejected a validated block");
  }
  metrics_.on_block_stored(own, now);

  auto waiting = orphans_.find(digest);
  if (waiting != orphans_.end()) {
    auto children = std::move(waiting->second);
    orphans_.erase(waiting);
    for (auto& [child, child_digest] : children) {
      orphan_digests_.erase(child_digest);
      insert_and_cascade(child, now, false, -1);
    }
  }
  return true;
}

void NodeRuntime::absorb_canonical_block(const core::StoredBlock& sb) {
  for (const auto& obs : sb.block.observations) {
    if (obs.kind == core::ObsKind::reward) continue;
    const auto key = core::key_of(obs);
    seen_txs_[key] = obs;
    included_.insert(key);
    if (outstanding_report_ && *outstanding_report_ == key) outstanding_report_.reset();
  }
  monitor_.apply_block(sb.block);
}

void NodeRuntime::on_head_changed(const core::Hash256& old_head, double now) {
  const auto& head = chain_.head();
  if (head.block.prev_hash == old_head) {
    absorb_canonical_block(head);
    engine_->on_canonical_extend(head);
  } else {
    const auto path = chain_.canonical_path();
    included_.clear();
    monitor_.reset();
    for (const auto* sb : path) absorb_canonical_block(*sb);
    engine_->on_canonical_rebuild(path);
  }
  chain_.prune(rules_.prune_depth);
  pool_dirty_ = true;
  begin_race(now);
}

// --- message handlers -------------------------------------------------------

void NodeRuntime::on_message(const Message& m, double now) {
  metrics_.on_message(metrics::Dir::in, wire_of(m.payload), payload_bytes(m.payload), now);
  std::visit([&](const auto& payload) { handle(payload, m.src, now); }, m.payload);
}

void NodeRuntime::handle(const DataRequest& req, int src, double now) {
  if (!active(now)) return;
  if (req.head == chain_.head_digest()) return;

  std::uint64_t low = 1;
  if (chain_.contains(req.head)) {
    low = req.height > rules_.prune_depth ? req.height - rules_.prune_depth : 1;
  }
  const auto path = chain_.canonical_path();
  if (low >= path.size()) return;

  DataResponse resp;
  for (std::size_t h = low; h < path.size(); ++h) resp.blocks.push_back(path[h]->block);
  send_to(src, std::move(resp), now);
}

void NodeRuntime::handle(const DataResponse& resp, int src, double now) {
  const auto old_head = chain_.head_digest();
  for (const auto& b : resp.blocks) insert_and_cascade(b, now, false, src);
  if (chain_.head_digest() != old_head) on_head_changed(old_head, now);
}

void NodeRuntime::handle(const TransactionMsg& tx, int, double) {
  if (tx.obs.kind == core::ObsKind::reward) return;
  pool_put(tx.obs, true);
}

void NodeRuntime::handle(const BlockAnnounce& ann, int src, double now) {
  const auto old_head = chain_.head_digest();
  insert_and_cascade(ann.block, now, false, src);
  if (chain_.head_digest() != old_head) on_head_changed(old_head, now);
}

void NodeRuntime::handle(const LotteryAnnounceMsg& ann, int src, double now) {
  const auto verdict = engine_->on_lottery_announce(chain_, ann.draw);
  if (verdict.valid && active(now)) {
    send_to(src, LotteryVerifyMsg{ann.draw.node, ann.draw.round, true}, now);
  }
  if (verdict.became_ready) update_mining(now);
}

void NodeRuntime::handle(const LotteryVerifyMsg&, int, double) {
  // Courtesy acknowledgment; nothing gates on it.
}

// --- local stream and timers -----------------------------------------------

void NodeRuntime::on_sensor_reading(const std::string& sensor_id, double value, double now) {
  if (!active(now)) return;
  monitor_.observe(sensor_id, value);

  const bool must_sync = !monitor_.self_synced();
  const bool drifted = monitor_.check() == monitor::NodeMonitor::Check::violation;
  if (!(must_sync || drifted) || outstanding_report_) return;

  core::Observation report;
  report.sensor_id = label_;
  report.sim_time = static_cast<std::uint64_t>(now);
  report.kind = core::ObsKind::sensor_reading;
  report.value = monitor_.local_value();
  const auto key = core::key_of(report);
  if (included_.count(key) > 0 || seen_txs_.count(key) > 0) return;

  pool_put(report, false);
  broadcast_payload(TransactionMsg{std::move(report)}, now);
  outstanding_report_ = key;
}

void NodeRuntime::on_poll_tick(std::uint64_t tick, double now) {
  if (!active(now)) return;
  const auto n = cluster_.size();
  if (n <= 1) return;
  const auto slot = static_cast<int>((tick - 1) % (n - 1));
  const int peer = slot < idx_ ? slot : slot + 1;
  send_to(peer, DataRequest{chain_.head_digest(), chain_.head_height()}, now);
}

void NodeRuntime::on_window_tick(std::size_t window_index, double) {
  metrics_.on_memory_sample(memory_bytes(),
                            static_cast<double>(window_index) * net_.window_seconds());
}

void NodeRuntime::finalize() {
  std::vector<std::uint64_t> timestamps;
  for (const auto* sb : chain_.canonical_path()) timestamps.push_back(sb->block.timestamp);
  metrics_.finalize(timestamps);
}

}  // namespace blocksim::sim
