#include "qpc/stats_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "qpc/config.hpp"
#include "qpc/errors.hpp"

namespace qpc {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(std::string_view text, const std::string& field) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError(field, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_u64(std::string_view text, const std::string& field) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError(field, "not a count: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto at = line.find(sep, start);
    out.push_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

constexpr std::string_view kCsvHeader = "name,estimate,ci_low,ci_high,target,trials";

}  // namespace

json metric_to_json(const Metric& m) {
  return json{{"name", m.name},
              {"successes", m.successes},
              {"trials", m.trials},
              {"estimate", m.estimate},
              {"ci_low", m.ci_low},
              {"ci_high", m.ci_high},
              {"target", m.target ? json(*m.target) : json(nullptr)}};
}

Metric metric_from_json(const json& doc) {
  Metric m;
  m.name = doc.at("name").get<std::string>();
  m.successes = doc.at("successes").get<std::uint64_t>();
  m.trials = doc.at("trials").get<std::uint64_t>();
  m.estimate = doc.at("estimate").get<double>();
  m.ci_low = doc.at("ci_low").get<double>();
  m.ci_high = doc.at("ci_high").get<double>();
  if (!doc.at("target").is_null()) m.target = doc.at("target").get<double>();
  return m;
}

json stats_to_json(const TrialStats& stats) {
  json counters = json::object();
  for (const auto& f : counter_fields()) counters[std::string(f.name)] = stats.counters.*f.member;
  for (std::size_t s = 1; s < stats.counters.detected_at.size(); ++s) {
    counters["detected_step" + std::to_string(s)] = stats.counters.detected_at[s];
  }
  json metrics = json::array();
  for (const auto& m : stats.metrics) metrics.push_back(metric_to_json(m));
  return json{{"schema_version", kStatsSchemaVersion},
              {"scenario", scenario_to_json(stats.scenario)},
              {"counters", counters},
              {"metrics", metrics}};
}

TrialStats stats_from_json(const json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kStatsSchemaVersion) {
      throw ConfigError("schema_version", "unsupported stats schema version");
    }
    TrialStats stats;
    stats.scenario = scenario_from_json(doc.at("scenario"));
    const auto& counters = doc.at("counters");
    for (const auto& f : counter_fields()) stats.counters.*f.member = counters.at(std::string(f.name)).get<std::uint64_t>();
    for (std::size_t s = 1; s < stats.counters.detected_at.size(); ++s) {
      stats.counters.detected_at[s] = counters.at("detected_step" + std::to_string(s)).get<std::uint64_t>();
    }
    for (const auto& m : doc.at("metrics")) stats.metrics.push_back(metric_from_json(m));
    return stats;
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("malformed stats document: ") + e.what());
  }
}

std::string metrics_to_csv(const std::vector<Metric>& metrics) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& m : metrics) {
    out << m.name << ',' << format_double(m.estimate) << ',' << format_double(m.ci_low) << ','
        << format_double(m.ci_high) << ',' << (m.target ? format_double(*m.target) : "") << ',' << m.trials << '\n';
  }
  return out.str();
}

std::vector<Metric> metrics_from_csv(std::string_view text) {
  std::vector<Metric> out;
  bool header = true;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw ConfigError("csv", "unexpected header '" + std::string(line) + "'");
      header = false;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 6) throw ConfigError("csv", "expected 6 columns in '" + std::string(line) + "'");
    Metric m;
    m.name = std::string(cells[0]);
    m.estimate = parse_double(cells[1], "csv.estimate");
    m.ci_low = parse_double(cells[2], "csv.ci_low");
    m.ci_high = parse_double(cells[3], "csv.ci_high");
    if (!cells[4].empty()) m.target = parse_double(cells[4], "csv.target");
    m.trials = parse_u64(cells[5], "csv.trials");
    m.successes = static_cast<std::uint64_t>(std::llround(m.estimate * static_cast<double>(m.trials)));
    out.push_back(std::move(m));
  }
  if (header) throw ConfigError("csv", "missing header");
  return out;
}

}  // namespace qpc
