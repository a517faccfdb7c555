// SPDX-License-Identifier: Apache-2.0
#include "blocksim/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace blocksim::metrics {

const char* to_string(Wire w) {
  switch (w) {
    case Wire::data_request: return "data_request";
    case Wire::data_response: return "data_response";
    case Wire::transaction: return "transaction";
    case Wire::block_announce: return "block_announce";
    case Wire::lottery_announce: return "lottery_announce";
    case Wire::lottery_verify: return "lottery_verify";
  }
  return "unknown";
}

MetricsSink::MetricsSink(std::string node_label, double window_seconds, double duration)
    : label_(std::move(node_label)), window_(window_seconds), duration_(duration) {
  std::size_t n = window_ > 0 ? static_cast<std::size_t>(std::ceil(duration / window_)) : 1;
  if (n == 0) n = 1;
  rows_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows_[i].window_start = static_cast<double>(i) * window_;
    rows_[i].window_end = std::min(duration_, rows_[i].window_start + window_);
  }
}

WindowRow& MetricsSink::row_at(double t) {
  std::size_t i = window_ > 0 && t > 0 ? static_cast<std::size_t>(t / window_) : 0;
  // Post-duration deliveries (the drain) land in the final window.
  if (i >= rows_.size()) i = rows_.size() - 1;
  return rows_[i];
}

void MetricsSink::on_message(Dir d, Wire w, std::size_t bytes, double t) {
  WindowRow& r = row_at(t);
  auto idx = static_cast<std::size_t>(w);
  if (d == Dir::out) {
    r.msgs_out[idx] += 1;
    r.bytes_out[idx] += bytes;
  } else {
    r.msgs_in[idx] += 1;
    r.bytes_in[idx] += bytes;
  }
}

void MetricsSink::on_mining(std::uint64_t attempts, double seconds, double t) {
  WindowRow& r = row_at(t);
  r.cpu_attempts += attempts;
  r.mining_time += seconds;
}

void MetricsSink::on_block_stored(bool own, double t) {
  WindowRow& r = row_at(t);
  r.blocks_total += 1;
  if (own) r.blocks_created += 1;
}

void MetricsSink::on_memory_sample(std::uint64_t bytes, double t) {
  row_at(t).memory_bytes = bytes;
}

void MetricsSink::finalize(const std::vector<std::uint64_t>& canonical_timestamps) {
  std::vector<double> gap_sum(rows_.size(), 0.0);
  std::vector<std::uint64_t> gap_count(rows_.size(), 0);
  for (std::size_t i = 1; i < canonical_timestamps.size(); ++i) {
    double t = static_cast<double>(canonical_timestamps[i]);
    std::size_t w = window_ > 0 ? static_cast<std::size_t>(t / window_) : 0;
    if (w >= rows_.size()) w = rows_.size() - 1;
    gap_sum[w] += t - static_cast<double>(canonical_timestamps[i - 1]);
    gap_count[w] += 1;
  }
  for (std::size_t w = 0; w < rows_.size(); ++w) {
    rows_[w].block_time = gap_count[w] > 0 ? gap_sum[w] / static_cast<double>(gap_count[w]) : 0.0;
  }
  // Carry the memory level into windows that closed without a fresh sample.
  for (std::size_t w = 1; w < rows_.size(); ++w) {
    if (rows_[w].memory_bytes == 0) rows_[w].memory_bytes = rows_[w - 1].memory_bytes;
  }
}

void MetricsSink::write_csv_header(std::ostream& os) {
  os << "node,window_start,window_end";
  const char* dirs[2] = {"out", "in"};
  for (const char* unit : {"msgs", "bytes"}) {
    for (const char* dir : dirs) {
      for (std::size_t w = 0; w < kWireCount; ++w) {
        os << ',' << unit << '_' << dir << '_' << to_string(static_cast<Wire>(w));
      }
    }
  }
  os << ",blocks_created,blocks_total,mining_time,block_time,memory_bytes,cpu_attempts\n";
}

void MetricsSink::write_csv(std::ostream& os) const {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  for (const auto& r : rows_) {
    os << label_ << ',' << num(r.window_start) << ',' << num(r.window_end);
    for (const auto* arr : {&r.msgs_out, &r.msgs_in}) {
      for (std::uint64_t v : *arr) os << ',' << v;
    }
    for (const auto* arr : {&r.bytes_out, &r.bytes_in}) {
      for (std::uint64_t v : *arr) os << ',' << v;
    }
    os << ',' << r.blocks_created << ',' << r.blocks_total << ',' << num(r.mining_time) << ','
       << num(r.block_time) << ',' << r.memory_bytes << ',' << r.cpu_attempts << '\n';
  }
}

MetricsSink::Totals MetricsSink::totals() const {
  Totals t;
  for (const auto& r : rows_) {
    for (std::size_t w = 0; w < kWireCount; ++w) {
      t.msgs_out += r.msgs_out[w];
      t.msgs_in += r.msgs_in[w];
      t.bytes_out += r.bytes_out[w];
      t.bytes_in += r.bytes_in[w];
      t.bytes_out_by_wire[w] += r.bytes_out[w];
    }
    t.blocks_created += r.blocks_created;
    t.blocks_total += r.blocks_total;
    t.mining_time += r.mining_time;
    t.cpu_attempts += r.cpu_attempts;
  }
  t.memory_final = rows_.empty() ? 0 : rows_.back().memory_bytes;
  return t;
}

std::vector<SummaryRow> summarize(const std::string& method, int n_nodes,
                                  const std::vector<MetricsSink::Totals>& nodes,
                                  double chain_block_time) {
  auto mean_of = [&](auto field) {
    double sum = 0;
    for (const auto& n : nodes) sum += static_cast<double>(field(n));
    return nodes.empty() ? 0.0 : sum / static_cast<double>(nodes.size());
  };

  std::vector<SummaryRow> rows;
  auto add = [&](std::string metric, double mean) {
    rows.push_back(SummaryRow{method, n_nodes, std::move(metric), mean});
  };

  using T = MetricsSink::Totals;
  add("block_time", chain_block_time);
  add("blocks_created", mean_of([](const T& t) { return t.blocks_created; }));
  add("blocks_total", mean_of([](const T& t) { return t.blocks_total; }));
  add("bytes_in", mean_of([](const T& t) { return t.bytes_in; }));
  add("bytes_out", mean_of([](const T& t) { return t.bytes_out; }));
  for (std::size_t w = 0; w < kWireCount; ++w) {
    add(std::string("bytes_out_") + to_string(static_cast<Wire>(w)),
        mean_of([w](const T& t) { return t.bytes_out_by_wire[w]; }));
  }
  add("cpu_attempts", mean_of([](const T& t) { return t.cpu_attempts; }));
  add("memory_bytes", mean_of([](const T& t) { return t.memory_final; }));
  add("mining_time", mean_of([](const T& t) { return t.mining_time; }));
  add("msgs_in", mean_of([](const T& t) { return t.msgs_in; }));
  add("msgs_out", mean_of([](const T& t) { return t.msgs_out; }));

  std::sort(rows.begin(), rows.end(),
            [](const SummaryRow& a, const SummaryRow& b) { return a.metric < b.metric; });
  return rows;
}

}  // namespace blocksim::metrics
