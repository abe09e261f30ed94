#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpc/protocol.hpp"

namespace qpc {

struct SuiteOptions {
  std::uint64_t seed = 20241016;
  unsigned jobs = 1;
  FaultInjection fault = FaultInjection::None;
  std::vector<int> criteria;  // empty = all
};

enum class Relation { Within, Below };

struct SuiteRow {
  std::string name;
  std::string metric;
  double observed = 0.0;
  double target = 0.0;
  double tolerance = 0.0;  // Within: |observed - target| <= tolerance; Below: observed < target
  Relation relation = Relation::Within;
  std::uint64_t trials = 0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<SuiteRow> rows;
  double seconds = 0.0;  // wall time; not serialized

  bool pass() const;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  FaultInjection fault = FaultInjection::None;
  std::vector<CriterionResult> criteria;

  bool pass() const;
};

std::vector<std::string> available_suites();

// Throws ConfigError("suite") for an unknown name. Results depend only on
// (name, seed, fault, criteria), never on jobs.
SuiteReport run_suite(std::string_view name, const SuiteOptions& options);

// Single criterion of the paper_tables battery (1..9).
CriterionResult run_criterion(int id, const SuiteOptions& options);

nlohmann::json report_to_json(const SuiteReport& report);
std::string format_table(const SuiteReport& report, bool with_timing = true);

// Exact detection probability of c X/Z check rounds against |0...0> claimed as
// Psi_1 (n = 3), by enumerating every basis choice and oracle outcome. Returns
// (numerator, denominator).
std::pair<std::uint64_t, std::uint64_t> exhaustive_fake_state_detection(int c);

// Largest total variation distance between the analytic sampler and the
// statevector oracle over every spec of size n, both bases and every non-empty
// particle subset.
double max_sampler_tvd(int n, std::uint64_t samples, std::uint64_t seed, unsigned jobs);

}  // namespace qpc
