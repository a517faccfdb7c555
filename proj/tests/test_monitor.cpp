// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "blocksim/monitor/ingest.hpp"
#include "blocksim/monitor/monitor.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace blocksim;
using testsupport::reading_obs;

namespace {

core::Block synced_block(const core::StoredBlock& parent, std::uint64_t ts,
                         std::vector<core::Observation> obs) {
  return testsupport::make_block(parent, ts, "m", std::move(obs), std::monostate{}, 0);
}

struct TempCsv {
  std::string path;
  explicit TempCsv(const std::string& body) {
    static int counter = 0;
    path = "monitor_test_tmp_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path, std::ios::binary);
    out << body;
  }
  ~TempCsv() { std::remove(path.c_str()); }
};

monitor::IngestError expect_error(const std::string& body, int n_nodes = 2) {
  TempCsv f(body);
  auto r = monitor::ingest_csv(f.path, n_nodes);
  REQUIRE(std::holds_alternative<monitor::IngestError>(r));
  return std::get<monitor::IngestError>(r);
}

}  // namespace

TEST_CASE("a node reports only when its own drift could move the mean across") {
  monitor::NodeMonitor mon("n0", 15.0, {"n0", "n1"});
  CHECK(mon.check() == monitor::NodeMonitor::Check::idle);

  mon.observe("s0", 12.0);
  CHECK(mon.has_value());
  CHECK(mon.check() == monitor::NodeMonitor::Check::idle);  // not yet synced

  core::Block b;
  b.observations = {reading_obs("n0", 5, 12.0), reading_obs("n1", 5, 8.0)};
  mon.apply_block(b);
  CHECK(mon.covered());
  CHECK(mon.self_synced());
  CHECK(mon.estimate() == doctest::Approx(10.0));
  CHECK(mon.check() == monitor::NodeMonitor::Check::safe);

  // e = 10, drifting to 18 puts u = 10 + (18 - 12) = 16 on the far side.
  mon.observe("s0", 18.0);
  CHECK(mon.check() == monitor::NodeMonitor::Check::violation);

  // Landing exactly on the threshold also counts: u = 10 + (17 - 12) = 15.
  mon.observe("s0", 17.0);
  CHECK(mon.check() == monitor::NodeMonitor::Check::violation);

  // Once the chain carries the new value the estimate itself moves and the
  // same local value is safe again: e = 13, u = 13.
  core::Block b2;
  b2.observations = {reading_obs("n0", 9, 18.0)};
  mon.apply_block(b2);
  mon.observe("s0", 18.0);
  CHECK(mon.estimate() == doctest::Approx(13.0));
  CHECK(mon.check() == monitor::NodeMonitor::Check::safe);

  // The local value is the mean over this node's sensors.
  mon.observe("s1", 24.0);  // local mean (18 + 24) / 2 = 21, u = 13 + 3 = 16
  CHECK(mon.check() == monitor::NodeMonitor::Check::violation);

  mon.reset();
  CHECK(mon.check() == monitor::NodeMonitor::Check::idle);
}

TEST_CASE("apply_block folds only monitored reading observations") {
  monitor::NodeMonitor mon("n0", 10.0, {"n0", "n1"});
  core::Block b;
  b.observations = {
      reading_obs("n0", 1, 4.0),
      reading_obs("zz", 1, 99.0),                              // not a cluster label
      {"n1", 1, core::ObsKind::coinage_investment, 0.0, 50},   // wrong kind
      {"n1", 1, core::ObsKind::reward, 0.0, 1},
  };
  mon.apply_block(b);
  CHECK(!mon.covered());  // n1 never synced
  CHECK(mon.estimate() == doctest::Approx(4.0));

  core::Block b2;
  b2.observations = {reading_obs("n0", 2, 6.0), reading_obs("n1", 2, 8.0)};
  mon.apply_block(b2);  // later value overwrites
  CHECK(mon.covered());
  CHECK(mon.estimate() == doctest::Approx(7.0));
}

TEST_CASE("chain replay reports each threshold crossing exactly once") {
  std::set<std::string> monitored{"n0", "n1", "n2"};
  const double threshold = 15.0;

  std::vector<core::StoredBlock> chain;
  chain.push_back(testsupport::store(core::genesis_block()));
  auto extend = [&](std::uint64_t ts, std::vector<core::Observation> obs) {
    chain.push_back(testsupport::store(synced_block(chain.back(), ts, std::move(obs))));
  };

  extend(10, {reading_obs("n0", 8, 10.0), reading_obs("n1", 8, 12.0)});  // not covered
  extend(20, {reading_obs("n2", 18, 11.0)});                             // covered, e = 11
  extend(30, {reading_obs("n0", 28, 25.0)});                             // e = 16, up
  extend(40, {});                                                        // unchanged
  extend(50, {reading_obs("n0", 48, 10.0)});                             // e = 11, down
  extend(60, {reading_obs("n1", 58, 13.0)});                             // e ~ 11.3, same side

  std::vector<const core::StoredBlock*> path;
  for (const auto& sb : chain) path.push_back(&sb);

  auto events = monitor::detect_global_event(path, threshold, monitored);
  REQUIRE(events.size() == 2);
  CHECK(events[0].sim_time == 30);
  CHECK(events[0].direction == +1);
  CHECK(events[0].estimate == doctest::Approx(16.0));
  CHECK(events[1].sim_time == 50);
  CHECK(events[1].direction == -1);
  CHECK(events[1].estimate == doctest::Approx(11.0));

  // The first covered evaluation sets the reference side, it is not itself a
  // crossing even though the estimate starts below the threshold.
  auto above = monitor::detect_global_event(path, 5.0, monitored);
  CHECK(above.empty());

  // Nothing to monitor means nothing to report.
  CHECK(monitor::detect_global_event(path, threshold, {}).empty());

  std::ostringstream os;
  monitor::write_events_csv(os, events);
  CHECK(os.str() ==
        "sim_time,direction,estimate\n"
        "30,up,16.000000\n"
        "50,down,11.000000\n");
}

TEST_CASE("csv ingest deals sensors round-robin and normalizes time") {
  TempCsv f(
      "sensor_id,timestamp,temperature\n"
      "a,100,20.0\n"
      "b,101,21.5\n"
      "c,102,19.0\n"
      "a,160,20.5\n");
  auto r = monitor::ingest_csv(f.path, 2);
  REQUIRE(std::holds_alternative<monitor::StreamSet>(r));
  const auto& set = std::get<monitor::StreamSet>(r);

  CHECK(set.sensors == std::vector<std::string>{"a", "b", "c"});
  CHECK(set.sensor_node.at("a") == 0);
  CHECK(set.sensor_node.at("b") == 1);
  CHECK(set.sensor_node.at("c") == 0);
  CHECK(set.monitored_nodes == std::set<int>{0, 1});

  REQUIRE(set.rows.size() == 4);
  CHECK(set.rows[0].sensor_id == "a");
  CHECK(set.rows[0].t == 0);
  CHECK(set.rows[1].t == 1);
  CHECK(set.rows[2].t == 2);
  CHECK(set.rows[3].t == 60);
  CHECK(set.rows[1].temperature == doctest::Approx(21.5));

  // More nodes than sensors leaves the high ordinals without a stream.
  auto wide = monitor::ingest_csv(f.path, 8);
  REQUIRE(std::holds_alternative<monitor::StreamSet>(wide));
  CHECK(std::get<monitor::StreamSet>(wide).monitored_nodes == std::set<int>{0, 1, 2});
}

TEST_CASE("csv ingest accepts the usual ISO-8601 shapes") {
  // 01:00+01:00 resolves to the same UTC instant as 00:00Z, which trips the
  // per-sensor strictly-increasing rule: offsets really are folded in.
  TempCsv f(
      "sensor_id,timestamp,temperature\n"
      "a,2026-03-01T00:00:00Z,1.0\n"
      "a,2026-03-01T01:00:00+01:00,2.0\n");
  auto r = monitor::ingest_csv(f.path, 1);
  REQUIRE(std::holds_alternative<monitor::IngestError>(r));
  CHECK(std::get<monitor::IngestError>(r).line == 3);

  TempCsv ok(
      "sensor_id,timestamp,temperature\n"
      "a,2026-03-01T00:00:00Z,1.0\n"
      "a,2026-03-01T02:00:00+01:00,2.0\n"
      "b,2026-03-01 00:01:30,3.0\n"
      "b,2026-03-01T00:02:30.75Z,4.0\n");
  auto r2 = monitor::ingest_csv(ok.path, 1);
  REQUIRE(std::holds_alternative<monitor::StreamSet>(r2));
  const auto& set = std::get<monitor::StreamSet>(r2);
  REQUIRE(set.rows.size() == 4);
  CHECK(set.rows[0].t == 0);    // 00:00:00Z
  CHECK(set.rows[1].t == 90);   // space separator
  CHECK(set.rows[2].t == 150);  // fractional seconds floored
  CHECK(set.rows[3].t == 3600); // +01:00 offset folded into UTC
  CHECK(set.rows[3].sensor_id == "a");
}

TEST_CASE("csv ingest reports the offending line") {
  CHECK(expect_error("").line == 0);
  CHECK(expect_error("").what == "empty file");
  CHECK(expect_error("id,time,temp\n").line == 1);

  auto missing = monitor::ingest_csv("no_such_file.csv", 2);
  REQUIRE(std::holds_alternative<monitor::IngestError>(missing));
  CHECK(std::get<monitor::IngestError>(missing).line == 0);

  std::string header = "sensor_id,timestamp,temperature\n";
  auto e = expect_error(header + "a,1,20.0\nb,2\n");
  CHECK(e.line == 3);
  CHECK(e.what == "expected 3 fields, got 2");

  e = expect_error(header + "a,yesterday,20.0\n");
  CHECK(e.line == 2);
  CHECK(e.what == "unparseable timestamp 'yesterday'");

  e = expect_error(header + "a,2026-13-01T00:00:00Z,20.0\n");
  CHECK(e.line == 2);

  e = expect_error(header + "a,1,warm\n");
  CHECK(e.what == "temperature 'warm' is not a finite number");

  e = expect_error(header + "a,1,nan\n");
  CHECK(e.line == 2);

  e = expect_error(header + "a,5,20.0\na,5,20.1\n");
  CHECK(e.line == 3);
  CHECK(e.what == "non-increasing timestamp for sensor a");

  e = expect_error(header + ",1,20.0\n");
  CHECK(e.what == "empty sensor_id");
}

TEST_CASE("the percentile threshold uses nearest-rank") {
  monitor::StreamSet set;
  for (int i = 1; i <= 10; ++i) {
    set.rows.push_back({"s", static_cast<std::uint64_t>(i), static_cast<double>(i)});
  }
  CHECK(monitor::temperature_percentile(set, 75.0) == doctest::Approx(8.0));
  CHECK(monitor::temperature_percentile(set, 100.0) == doctest::Approx(10.0));
  CHECK(monitor::temperature_percentile(set, 0.0) == doctest::Approx(1.0));
  CHECK(monitor::temperature_percentile(set, 10.0) == doctest::Approx(1.0));
  CHECK(monitor::temperature_percentile(set, 11.0) == doctest::Approx(2.0));
  CHECK(monitor::temperature_percentile({}, 75.0) == doctest::Approx(0.0));
}
