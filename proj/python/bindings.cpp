// Python bindings for the core operations. Structured data crosses the
// boundary as plain lists; whole scenarios and traces travel as JSON text so
// the Python side stays dependency-free and schema changes live in one place.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dpffd/consensus.hpp"
#include "dpffd/experiment.hpp"
#include "dpffd/fault.hpp"
#include "dpffd/pf.hpp"
#include "dpffd/plot.hpp"
#include "dpffd/scenario.hpp"
#include "dpffd/tank.hpp"
#include "dpffd/trace.hpp"

namespace py = pybind11;
using namespace dpffd;

namespace {

FaultProfile make_profile(const std::string& kind, double c, long onset_step) {
  FaultProfile p;
  if (kind == "abrupt")
    p.kind = FaultShape::Abrupt;
  else if (kind == "incipient")
    p.kind = FaultShape::Incipient;
  else
    throw py::value_error("profile kind must be 'abrupt' or 'incipient'");
  p.c = c;
  p.onset_step = onset_step;
  return p;
}

Topology make_topology(int nodes, const std::vector<std::pair<int, int>>& edges) {
  Topology t;
  t.nodes = nodes;
  t.edges = edges;
  return t;
}

RunMode parse_mode(const std::string& mode) {
  if (mode == "distributed") return RunMode::Distributed;
  if (mode == "centralized") return RunMode::Centralized;
  throw py::value_error("mode must be 'distributed' or 'centralized'");
}

}  // namespace

PYBIND11_MODULE(_dpffd, m) {
  m.doc() = "Distributed particle-filtering fault diagnosis core";

  py::register_exception<DegenerateWeightsError>(m, "DegenerateWeightsError");
  py::register_exception<TopologyError>(m, "TopologyError");
  py::register_exception<ScenarioError>(m, "ScenarioError");
  py::register_exception<NumericDivergenceError>(m, "NumericDivergenceError");

  // pf-core primitives
  m.def("normalize_weights", &normalize_weights, py::arg("weights"),
        "Scale non-negative weights to sum to 1.");
  m.def(
      "systematic_resample",
      [](const std::vector<Vec>& particles, const Vec& weights, std::uint64_t seed) {
        ParticleSet set{particles, weights};
        RandomStream stream(seed);
        ParticleSet out = systematic_resample(set, stream);
        return py::make_tuple(out.particles, out.weights);
      },
      py::arg("particles"), py::arg("weights"), py::arg("seed"),
      "Systematic resampling; returns (particles, uniform_weights).");
  m.def(
      "mmse_estimate",
      [](const std::vector<Vec>& particles, const Vec& weights) {
        return mmse_estimate(ParticleSet{particles, weights});
      },
      py::arg("particles"), py::arg("weights"),
      "Componentwise weighted average of the particles.");

  // fault augmentation pieces
  m.def(
      "beta",
      [](const std::string& kind, double c, long onset_step, long k) {
        return beta(make_profile(kind, c, onset_step), k);
      },
      py::arg("kind"), py::arg("c"), py::arg("onset_step"), py::arg("k"),
      "Fault occurrence profile value at step k.");
  m.def(
      "phi",
      [](double v1, double v2) {
        const BinaryState b = phi(v1, v2);
        return py::make_tuple(b.b1(), b.b2());
      },
      py::arg("v1"), py::arg("v2"),
      "Snap a perturbed binary vector to the nearer of e1=[1,0] / e2=[0,1].");

  // consensus
  m.def(
      "metropolis_weights",
      [](int nodes, const std::vector<std::pair<int, int>>& edges) {
        return metropolis_weights(make_topology(nodes, edges));
      },
      py::arg("nodes"), py::arg("edges"),
      "Metropolis weight matrix for an undirected connected graph (0-based edges).");
  m.def(
      "run_consensus",
      [](std::vector<Vec> values, const Matrix& weights, int max_iterations, double tolerance) {
        ConsensusResult r =
            run_consensus(std::move(values), weights, ConsensusConfig{max_iterations, tolerance});
        return py::make_tuple(r.values, r.iterations, r.converged);
      },
      py::arg("values"), py::arg("weights"), py::arg("max_iterations") = 50,
      py::arg("tolerance") = 1e-8,
      "Synchronous average consensus; returns (values, iterations, converged).");

  // tank plant
  m.def("flow_rate", &flow_rate, py::arg("x_from"), py::arg("x_to"), py::arg("mu"), py::arg("Sp"),
        py::arg("g"), "Torricelli inter-tank flow rate (m/s of level).");
  m.def("leak_rate", &leak_rate, py::arg("x"), py::arg("mu"), py::arg("Sp"), py::arg("Sc"),
        py::arg("g"), "Leak outflow rate at one tank (m/s of level).");

  // scenarios, experiments, traces (JSON text at the boundary)
  m.def(
      "nine_tank_scenario",
      [] { return scenario_to_json_text(Scenario::nine_tank_default()); },
      "Nine-tank benchmark scenario as JSON text.");
  m.def(
      "validate_scenario",
      [](const std::string& json_text) { scenario_from_json_text(json_text).validate(); },
      py::arg("scenario_json"), "Raises ScenarioError if the scenario is invalid.");
  m.def(
      "run_experiment",
      [](const std::string& scenario_json, const std::string& mode) {
        RunTrace t = run_experiment(scenario_from_json_text(scenario_json), parse_mode(mode));
        return trace_to_json_text(t);
      },
      py::arg("scenario_json"), py::arg("mode") = "distributed",
      py::call_guard<py::gil_scoped_release>(),
      "Run the truth simulator plus filter; returns the trace as JSON text.");
  m.def(
      "trace_to_csv",
      [](const std::string& trace_json) { return trace_to_csv(trace_from_json_text(trace_json)); },
      py::arg("trace_json"), "Convert a JSON trace to the CSV schema.");
  m.def(
      "compare_traces",
      [](const std::string& trace_a, const std::string& trace_b) {
        ComparisonReport r =
            compare_traces(trace_from_json_text(trace_a), trace_from_json_text(trace_b));
        py::dict d;
        d["max_estimate_deviation"] = r.max_estimate_deviation;
        d["mean_estimate_deviation"] = r.mean_estimate_deviation;
        d["max_prob_deviation"] = r.max_prob_deviation;
        d["mean_prob_deviation"] = r.mean_prob_deviation;
        py::list deltas;
        for (const AlarmDelta& a : r.alarm_deltas) {
          py::dict e;
          e["mode"] = a.mode;
          e["first_crossing_a"] = a.first_crossing_a;
          e["first_crossing_b"] = a.first_crossing_b;
          deltas.append(e);
        }
        d["alarm_deltas"] = deltas;
        return d;
      },
      py::arg("trace_a_json"), py::arg("trace_b_json"),
      "Deviation metrics between two traces of equal duration.");
  m.def(
      "write_trace_plots",
      [](const std::string& trace_json, const std::string& out_dir,
         const std::vector<int>& fault_tanks, const std::vector<long>& onsets) {
        return write_trace_plots(trace_from_json_text(trace_json), out_dir, fault_tanks, onsets);
      },
      py::arg("trace_json"), py::arg("out_dir"), py::arg("fault_tanks"), py::arg("onsets"),
      "Write SVG probability/level plots; returns the file paths.");
}
