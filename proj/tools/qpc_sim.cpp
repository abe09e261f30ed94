// qpc_sim: scenario runner, acceptance suite and transcript dump.
//
// Exit codes: 0 ok, 1 usage/config, 2 runtime, 3 suite failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include "qpc/config.hpp"
#include "qpc/errors.hpp"
#include "qpc/harness.hpp"
#include "qpc/stats_io.hpp"
#include "qpc/suite.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;
constexpr int kSuiteFailed = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int report_error(std::string_view category, const std::string& message, const std::string& field = {}) {
  nlohmann::json err{{"error", category}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  std::cerr << err.dump() << '\n';
  return category == "runtime" ? kRuntime : kUsage;
}

void emit(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + *path + "'");
  out << text;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << seed << '\n';
  return seed;
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

int cmd_run(const RunArgs& a) {
  auto doc = qpc::load_config(a.config);
  auto& s = doc.scenario;
  if (a.trials) s.trials = *a.trials;
  if (a.seed) {
    s.seed = *a.seed;
  } else if (!doc.has_seed) {
    s.seed = fresh_seed();
  }
  s.validate();
  const auto format = a.format ? qpc::output_format_from_string(*a.format) : doc.output.format;
  const auto out = a.out ? a.out : doc.output.path;

  const auto stats = qpc::run_scenario(s, a.jobs);
  if (format == qpc::OutputFormat::Csv) {
    emit(qpc::metrics_to_csv(stats.metrics), out);
  } else {
    emit(qpc::stats_to_json(stats).dump(2) + "\n", out);
  }
  return kOk;
}

struct SuiteArgs {
  std::string name;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
  std::optional<std::string> out;
  std::optional<std::string> fault;
  std::vector<int> criteria;
};

int cmd_suite(const SuiteArgs& a) {
  qpc::SuiteOptions opts;
  opts.seed = a.seed ? *a.seed : fresh_seed();
  opts.jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  opts.criteria = a.criteria;
  if (a.fault) {
    if (*a.fault != "txor") throw UsageError("--inject-fault accepts only 'txor'");
    opts.fault = qpc::FaultInjection::BrokenPad;
  }
  const auto report = qpc::run_suite(a.name, opts);
  std::cout << qpc::format_table(report);
  if (a.out) emit(qpc::report_to_json(report).dump(2) + "\n", a.out);
  return report.pass() ? kOk : kSuiteFailed;
}

struct TranscriptArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

int cmd_transcript(const TranscriptArgs& a) {
  auto doc = qpc::load_config(a.config);
  auto& s = doc.scenario;
  if (s.trials != 1) throw UsageError("transcript needs a scenario with trials = 1");
  if (a.seed) {
    s.seed = *a.seed;
  } else if (!doc.has_seed) {
    s.seed = fresh_seed();
  }
  const auto run = qpc::run_trial(s, 0, true);
  emit(run.transcript.to_json().dump(2) + "\n", a.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiparty quantum private comparison simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a scenario config and emit statistics");
  run->add_option("--config", run_args.config, "Scenario config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--trials", run_args.trials, "Override the trial count")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_args.seed, "Root seed");
  run->add_option("--jobs", run_args.jobs, "Worker threads (0 = all cores)");
  run->add_option("--out", run_args.out, "Output path (default stdout)");
  run->add_option("--format", run_args.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  SuiteArgs suite_args;
  auto* suite = app.add_subcommand("suite", "Run a built-in acceptance suite");
  suite->add_option("name", suite_args.name, "Suite name")->required();
  suite->add_option("--seed", suite_args.seed, "Root seed");
  suite->add_option("--jobs", suite_args.jobs, "Worker threads (0 = all cores)");
  suite->add_option("--out", suite_args.out, "Write the JSON report here");
  suite->add_option("--inject-fault", suite_args.fault, "Deliberately break a component (txor)");
  suite->add_option("--criteria", suite_args.criteria, "Run only these criteria")->delimiter(',');

  TranscriptArgs tr_args;
  auto* transcript = app.add_subcommand("transcript", "Dump the full transcript of a single run");
  transcript->add_option("--config", tr_args.config, "Scenario config with trials = 1")
      ->required()
      ->check(CLI::ExistingFile);
  transcript->add_option("--seed", tr_args.seed, "Root seed");
  transcript->add_option("--out", tr_args.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what());
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*suite) return cmd_suite(suite_args);
    return cmd_transcript(tr_args);
  } catch (const UsageError& e) {
    return report_error("usage", e.what());
  } catch (const qpc::ConfigError& e) {
    return report_error("config", e.what(), e.field());
  } catch (const std::exception& e) {
    return report_error("runtime", e.what());
  }
}
