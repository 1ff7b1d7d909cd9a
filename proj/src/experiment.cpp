#include "dpffd/experiment.hpp"

#include <optional>

namespace dpffd {

RunTrace run_experiment(const Scenario& scenario, RunMode mode) {
  scenario.validate();

  const PlantConfig plant = make_plant_config(scenario);
  const AugmentedModel model = make_filter_model(scenario);
  const std::vector<DetectorNode> nodes = make_detector_nodes(scenario);

  RandomStream plant_stream = RandomStream::derived(scenario.seed, "plant");
  std::vector<RandomStream> meas_streams;
  for (const DetectorNode& n : nodes)
    meas_streams.push_back(
        RandomStream::derived(scenario.seed, "measure-" + std::to_string(n.id)));

  RunTrace trace;
  trace.node_count = mode == RunMode::Distributed ? static_cast<int>(nodes.size()) : 1;
  trace.mode_count = model.mode_count();
  trace.state_dim = model.n_x;
  trace.alpha = scenario.filter.alpha;
  trace.Ts = scenario.params.Ts;

  std::optional<Network> net;
  std::optional<CentralizedFilter> central;
  if (mode == RunMode::Distributed)
    net.emplace(model, scenario.params.x0, nodes, scenario.topology, scenario.filter,
                scenario.seed);
  else
    central.emplace(model, scenario.params.x0, nodes, scenario.filter, scenario.seed);

  Vec x = scenario.params.x0;
  for (long k = 1; k <= scenario.steps; ++k) {
    // transition from k-1 to k gates faults by beta(k-1)
    x = plant_step(x, k - 1, plant, plant_stream);
    std::vector<Vec> z(nodes.size());
    for (std::size_t I = 0; I < nodes.size(); ++I)
      z[I] = measure(x, nodes[I].selector, nodes[I].meas_variance, meas_streams[I]);

    TraceStep ts;
    ts.k = k;
    ts.time_s = static_cast<double>(k) * scenario.params.Ts;
    ts.truth = x;

    if (mode == RunMode::Distributed) {
      StepResult r = net->step(k, z);
      ts.consensus_iterations = r.consensus_iterations;
      for (std::size_t I = 0; I < nodes.size(); ++I) {
        ts.estimates.emplace_back(r.estimates[I].begin(),
                                  r.estimates[I].begin() + model.n_x);
        ts.fail_probs.push_back(r.fail_probs[I]);
        std::vector<int> flags;
        for (double p : r.fail_probs[I])
          flags.push_back(check_alarm(p, scenario.filter.alpha) ? 1 : 0);
        ts.alarm.push_back(std::move(flags));
      }
      for (const AlarmEvent& e : r.alarms) trace.events.push_back(e);
    } else {
      CentralizedStepResult r = central->step(k, z);
      ts.estimates.emplace_back(r.estimate.begin(), r.estimate.begin() + model.n_x);
      ts.fail_probs.push_back(r.fail_probs);
      std::vector<int> flags;
      for (double p : r.fail_probs)
        flags.push_back(check_alarm(p, scenario.filter.alpha) ? 1 : 0);
      ts.alarm.push_back(std::move(flags));
      for (const AlarmEvent& e : r.alarms) trace.events.push_back(e);
    }
    trace.steps.push_back(std::move(ts));
  }
  return trace;
}

}  // namespace dpffd
