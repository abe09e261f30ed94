// Acceptance runner: one line per criterion, nonzero exit if any fails.
//
//   qpc_acceptance [--criterion N] [--seed S] [--jobs J] [--verbose]

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "qpc/suite.hpp"

namespace {

void print_rows(const qpc::CriterionResult& c) {
  for (const auto& r : c.rows) {
    std::cout << "    " << (r.pass ? "ok  " : "BAD ") << r.name << ": " << r.metric << " = " << r.observed
              << (r.relation == qpc::Relation::Below ? " < " : " vs ") << r.target;
    if (r.relation == qpc::Relation::Within) std::cout << " +- " << r.tolerance;
    if (r.trials) std::cout << " (" << r.trials << " trials)";
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int criterion = 0;
  qpc::SuiteOptions opts;
  bool verbose = false;
  app.add_option("--criterion", criterion, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--seed", opts.seed, "Root seed");
  app.add_option("--jobs", opts.jobs, "Worker threads");
  app.add_flag("--verbose", verbose, "Print every row");
  CLI11_PARSE(app, argc, argv);

  if (criterion) opts.criteria = {criterion};
  const auto report = qpc::run_suite("paper_tables", opts);
  for (const auto& c : report.criteria) {
    std::cout << (c.pass() ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << '\n';
    if (verbose || !c.pass()) print_rows(c);
  }
  return report.pass() ? 0 : 1;
}
