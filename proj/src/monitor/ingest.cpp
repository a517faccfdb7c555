// SPDX-License-Identifier: Apache-2.0
#include "blocksim/monitor/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>

namespace blocksim::monitor {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's civil
// calendar arithmetic).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? 9u : static_cast<unsigned>(-3))) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    v = v * 10 + static_cast<unsigned>(s[i] - '0');
  }
  out = v;
  return true;
}

// Plain integer seconds, or ISO-8601 `YYYY-MM-DD[T ]HH:MM:SS[.frac][Z|±HH[:]MM]`.
// Fractional seconds are floored; a missing zone means UTC.
bool parse_timestamp(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;

  bool plain = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(std::isdigit(static_cast<unsigned char>(s[i])) || (i == 0 && s[i] == '-'))) {
      plain = false;
      break;
    }
  }
  if (plain) {
    errno = 0;
    char* end = nullptr;
    std::string tmp(s);
    long long v = std::strtoll(tmp.c_str(), &end, 10);
    if (errno != 0 || end == tmp.c_str() || *end != '\0') return false;
    out = v;
    return true;
  }

  unsigned year, mon, day, hh, mm, ss;
  if (!parse_fixed_uint(s, 0, 4, year) || s.size() < 19) return false;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
      s[16] != ':') {
    return false;
  }
  if (!parse_fixed_uint(s, 5, 2, mon) || !parse_fixed_uint(s, 8, 2, day) ||
      !parse_fixed_uint(s, 11, 2, hh) || !parse_fixed_uint(s, 14, 2, mm) ||
      !parse_fixed_uint(s, 17, 2, ss)) {
    return false;
  }
  if (mon < 1 || mon > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 60) return false;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    std::size_t digits = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      ++pos;
      ++digits;
    }
    if (digits == 0) return false;
  }

  std::int64_t offset = 0;
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      ++pos;
      unsigned oh, om = 0;
      if (!parse_fixed_uint(s, pos, 2, oh)) return false;
      pos += 2;
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (pos + 2 <= s.size()) {
        if (!parse_fixed_uint(s, pos, 2, om)) return false;
        pos += 2;
      }
      offset = static_cast<std::int64_t>(oh) * 3600 + static_cast<std::int64_t>(om) * 60;
      if (c == '-') offset = -offset;
    } else {
      return false;
    }
  }
  if (pos != s.size()) return false;

  out = days_from_civil(year, mon, day) * 86400 + hh * 3600 + mm * 60 + ss - offset;
  return true;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::variant<StreamSet, IngestError> ingest_csv(const std::string& path, int n_nodes) {
  std::ifstream in(path);
  if (!in) return IngestError{0, "cannot open " + path};

  struct RawRow {
    std::string sensor_id;
    std::int64_t t;
    double temperature;
    std::size_t order;
  };
  std::vector<RawRow> raw;
  std::map<std::string, std::int64_t> last_t;

  StreamSet set;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    if (!header_seen) {
      if (line != "sensor_id,timestamp,temperature") {
        return IngestError{line_no, "expected header sensor_id,timestamp,temperature"};
      }
      header_seen = true;
      continue;
    }

    auto fields = split_fields(line);
    if (fields.size() != 3) {
      return IngestError{line_no, "expected 3 fields, got " + std::to_string(fields.size())};
    }
    std::string id(fields[0]);
    if (id.empty()) return IngestError{line_no, "empty sensor_id"};

    std::int64_t t;
    if (!parse_timestamp(fields[1], t)) {
      return IngestError{line_no, "unparseable timestamp '" + std::string(fields[1]) + "'"};
    }

    std::string temp_s(fields[2]);
    errno = 0;
    char* end = nullptr;
    double temp = std::strtod(temp_s.c_str(), &end);
    if (errno != 0 || end == temp_s.c_str() || *end != '\0' || !std::isfinite(temp)) {
      return IngestError{line_no, "temperature '" + temp_s + "' is not a finite number"};
    }

    auto seen = last_t.find(id);
    if (seen == last_t.end()) {
      set.sensors.push_back(id);
      last_t[id] = t;
    } else {
      if (t <= seen->second) {
        return IngestError{line_no, "non-increasing timestamp for sensor " + id};
      }
      seen->second = t;
    }
    raw.push_back(RawRow{std::move(id), t, temp, raw.size()});
  }
  if (!header_seen) return IngestError{0, "empty file"};

  if (!raw.empty()) {
    std::int64_t t0 = raw[0].t;
    for (const auto& r : raw) t0 = std::min(t0, r.t);
    std::sort(raw.begin(), raw.end(), [](const RawRow& a, const RawRow& b) {
      return a.t != b.t ? a.t < b.t : a.order < b.order;
    });
    set.rows.reserve(raw.size());
    for (auto& r : raw) {
      set.rows.push_back(
          SensorRow{std::move(r.sensor_id), static_cast<std::uint64_t>(r.t - t0), r.temperature});
    }
  }

  for (std::size_t i = 0; i < set.sensors.size(); ++i) {
    int node = n_nodes > 0 ? static_cast<int>(i % static_cast<std::size_t>(n_nodes)) : 0;
    set.sensor_node[set.sensors[i]] = node;
    set.monitored_nodes.insert(node);
  }
  return set;
}

double temperature_percentile(const StreamSet& streams, double pct) {
  if (streams.rows.empty()) return 0;
  std::vector<double> temps;
  temps.reserve(streams.rows.size());
  for (const auto& r : streams.rows) temps.push_back(r.temperature);
  std::sort(temps.begin(), temps.end());
  double rank = pct / 100.0 * static_cast<double>(temps.size());
  std::size_t idx = rank <= 1 ? 0 : static_cast<std::size_t>(std::ceil(rank)) - 1;
  if (idx >= temps.size()) idx = temps.size() - 1;
  return temps[idx];
}

}  // namespace blocksim::monitor
