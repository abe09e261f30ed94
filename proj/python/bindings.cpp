#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpc/config.hpp"
#include "qpc/errors.hpp"
#include "qpc/ghz.hpp"
#include "qpc/harness.hpp"
#include "qpc/stats_io.hpp"
#include "qpc/suite.hpp"

namespace py = pybind11;

namespace {

qpc::Basis parse_basis(const std::string& b) {
  if (b == "Z" || b == "z") return qpc::Basis::Z;
  if (b == "X" || b == "x") return qpc::Basis::X;
  throw qpc::ContractError("basis must be 'Z' or 'X'");
}

qpc::ParticleSet to_set(const std::vector<int>& ks, int n) {
  qpc::ParticleSet set = 0;
  for (int k : ks) {
    if (k < 1 || k > n) throw qpc::RangeError("particle index out of range");
    set |= qpc::ParticleSet{1} << (k - 1);
  }
  return set;
}

py::dict spec_dict(const qpc::GhzSpec& s) {
  py::dict d;
  d["n"] = s.size();
  d["index"] = qpc::index_of(s);
  d["q"] = s.q_bits();
  d["delta"] = s.delta();
  d["ket"] = s.ket();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core bindings for the QPC simulator; JSON documents cross the boundary as strings.";

  py::register_exception<qpc::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<qpc::RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<qpc::StateError>(m, "StateError", PyExc_RuntimeError);
  py::register_exception<qpc::ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<qpc::CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);

  m.def("ghz_spec", [](std::uint64_t index, int n) { return spec_dict(qpc::ghz_from_index(index, n)); },
        py::arg("index"), py::arg("n"));
  m.def("family_size", &qpc::family_size, py::arg("n"));
  m.def(
      "x_expansion",
      [](std::uint64_t index, int n) {
        std::vector<std::pair<std::string, int>> out;
        for (const auto& t : qpc::x_expansion(qpc::ghz_from_index(index, n))) out.emplace_back(t.label(n), t.sign);
        return out;
      },
      py::arg("index"), py::arg("n"));
  m.def(
      "t_xor", [](std::uint64_t index, int n, int i, int j) { return qpc::t_xor(qpc::ghz_from_index(index, n), i, j); },
      py::arg("index"), py::arg("n"), py::arg("i"), py::arg("j"));
  m.def(
      "sample_measurement",
      [](std::uint64_t index, int n, const std::vector<int>& particles, const std::string& basis, std::uint64_t seed) {
        qpc::RandomStream rng(seed);
        const auto o = qpc::sample_measurement(qpc::ghz_from_index(index, n), to_set(particles, n), parse_basis(basis), rng);
        std::vector<int> bits;
        for (int k : particles) bits.push_back(o.bit(k));
        return bits;
      },
      py::arg("index"), py::arg("n"), py::arg("particles"), py::arg("basis"), py::arg("seed"));
  m.def("closed_form", &qpc::closed_form, py::arg("kind"), py::arg("param"));
  m.def(
      "wilson",
      [](std::uint64_t k, std::uint64_t trials) {
        const auto ci = qpc::wilson(k, trials);
        return std::pair{ci.low, ci.high};
      },
      py::arg("successes"), py::arg("trials"));

  m.def(
      "run_scenario_json",
      [](const std::string& config, unsigned jobs) {
        const auto doc = qpc::parse_config(nlohmann::json::parse(config));
        qpc::TrialStats stats;
        {
          py::gil_scoped_release release;
          stats = qpc::run_scenario(doc.scenario, jobs);
        }
        return qpc::stats_to_json(stats).dump();
      },
      py::arg("config"), py::arg("jobs") = 1);
  m.def(
      "stats_to_csv",
      [](const std::string& stats) { return qpc::metrics_to_csv(qpc::stats_from_json(nlohmann::json::parse(stats)).metrics); },
      py::arg("stats"));
  m.def(
      "transcript_json",
      [](const std::string& config) {
        const auto doc = qpc::parse_config(nlohmann::json::parse(config));
        if (doc.scenario.trials != 1) throw qpc::ConfigError("trials", "transcript needs trials = 1");
        return qpc::run_trial(doc.scenario, 0, true).transcript.to_json().dump();
      },
      py::arg("config"));
  m.def(
      "run_suite_json",
      [](const std::string& name, std::uint64_t seed, unsigned jobs, const std::vector<int>& criteria) {
        qpc::SuiteOptions opts;
        opts.seed = seed;
        opts.jobs = jobs;
        opts.criteria = criteria;
        qpc::SuiteReport report;
        {
          py::gil_scoped_release release;
          report = qpc::run_suite(name, opts);
        }
        return qpc::report_to_json(report).dump();
      },
      py::arg("name"), py::arg("seed"), py::arg("jobs") = 1, py::arg("criteria") = std::vector<int>{});
}
