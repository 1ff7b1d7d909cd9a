#include <cmath>

#include "doctest.h"
#include "dpffd/experiment.hpp"
#include "dpffd/runtime.hpp"
#include "dpffd/scenario.hpp"

using namespace dpffd;

namespace {

Scenario small_scenario(long steps = 20, int particles = 64) {
  Scenario s = Scenario::nine_tank_default();
  s.steps = steps;
  s.filter.particle_count = particles;
  s.filter.consensus.tolerance = 1e-12;
  for (auto& f : s.faults) f.profile.onset_step = steps - 1;
  s.filter.consensus.max_iterations = 100;
  s.seed = 99;
  return s;
}

}  // namespace

TEST_CASE("local_log_likelihood: closed forms") {
  DetectorNode node{1, {0, 1, 2}, 0.2};
  Vec particle{1.0, 2.0, 3.0};

  // zero residual: -(3/2) log(2*pi*0.2) = -(3/2) log(0.4*pi)
  const double peak = local_log_likelihood(node, {1.0, 2.0, 3.0}, particle);
  CHECK(peak == doctest::Approx(-1.5 * std::log(0.4 * 3.14159265358979323846)).epsilon(1e-12));

  // residual norm^2 = 2a drops exactly 1 below the peak
  const double off = local_log_likelihood(node, {1.0 + std::sqrt(2.0 * 0.2), 2.0, 3.0}, particle);
  CHECK(peak - off == doctest::Approx(1.0).epsilon(1e-12));

  // doubling the residual quadruples the quadratic penalty
  const double r1 = peak - local_log_likelihood(node, {1.1, 2.0, 3.0}, particle);
  const double r2 = peak - local_log_likelihood(node, {1.2, 2.0, 3.0}, particle);
  CHECK(r2 == doctest::Approx(4.0 * r1).epsilon(1e-10));
}

TEST_CASE("check_alarm: threshold boundary alarms") {
  CHECK_FALSE(check_alarm(0.0, 0.9));
  CHECK(check_alarm(1.0, 0.9));
  CHECK(check_alarm(0.9, 0.9));  // < alpha is normal, so >= alpha alarms
}

TEST_CASE("network step: weights normalized, nodes agree, particles synchronized") {
  Scenario s = small_scenario();
  const AugmentedModel model = make_filter_model(s);
  const auto nodes = make_detector_nodes(s);
  Network net(model, s.params.x0, nodes, s.topology, s.filter, s.seed);

  PlantConfig plant = make_plant_config(s);
  RandomStream plant_stream = RandomStream::derived(s.seed, "plant");
  std::vector<RandomStream> meas;
  for (const auto& n : nodes)
    meas.push_back(RandomStream::derived(s.seed, "measure-" + std::to_string(n.id)));

  Vec x = s.params.x0;
  for (long k = 1; k <= 15; ++k) {
    x = plant_step(x, k - 1, plant, plant_stream);
    std::vector<Vec> z;
    for (std::size_t I = 0; I < nodes.size(); ++I)
      z.push_back(measure(x, nodes[I].selector, nodes[I].meas_variance, meas[I]));
    StepResult r = net.step(k, z);

    for (const Vec& w : r.post_weights) {
      double sum = 0.0;
      for (double wi : w) sum += wi;
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    for (std::size_t I = 1; I < nodes.size(); ++I) {
      for (std::size_t d = 0; d < r.estimates[0].size(); ++d)
        CHECK(std::abs(r.estimates[I][d] - r.estimates[0][d]) < 1e-9);
      for (std::size_t j = 0; j < r.fail_probs[0].size(); ++j) {
        CHECK(r.fail_probs[I][j] >= 0.0);
        CHECK(r.fail_probs[I][j] <= 1.0);
        CHECK(std::abs(r.fail_probs[I][j] - r.fail_probs[0][j]) < 1e-9);
      }
      // byte-identical particle arrays across nodes at the step boundary
      CHECK(net.particles(static_cast<int>(I)).particles == net.particles(0).particles);
    }
  }
}

TEST_CASE("distributed weights match centralized stacked-measurement weights") {
  Scenario s = small_scenario();
  const AugmentedModel model = make_filter_model(s);
  const auto nodes = make_detector_nodes(s);
  Network net(model, s.params.x0, nodes, s.topology, s.filter, s.seed);
  CentralizedFilter central(model, s.params.x0, nodes, s.filter, s.seed);

  PlantConfig plant = make_plant_config(s);
  RandomStream plant_stream = RandomStream::derived(s.seed, "plant");
  std::vector<RandomStream> meas;
  for (const auto& n : nodes)
    meas.push_back(RandomStream::derived(s.seed, "measure-" + std::to_string(n.id)));

  Vec x = s.params.x0;
  for (long k = 1; k <= 15; ++k) {
    x = plant_step(x, k - 1, plant, plant_stream);
    std::vector<Vec> z;
    for (std::size_t I = 0; I < nodes.size(); ++I)
      z.push_back(measure(x, nodes[I].selector, nodes[I].meas_variance, meas[I]));
    StepResult r = net.step(k, z);
    CentralizedStepResult c = central.step(k, z);
    for (const Vec& w : r.post_weights)
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double rel = std::abs(w[i] - c.post_weights[i]) /
                           std::max(c.post_weights[i], 1e-300);
        CHECK(rel < 1e-9);
      }
  }
}

TEST_CASE("single-node network is exactly the centralized bootstrap update") {
  Scenario s = small_scenario();
  s.nodes = {s.nodes[0]};
  s.topology = Topology::complete(1);
  const AugmentedModel model = make_filter_model(s);
  const auto nodes = make_detector_nodes(s);
  Network net(model, s.params.x0, nodes, s.topology, s.filter, s.seed);
  CentralizedFilter central(model, s.params.x0, nodes, s.filter, s.seed);

  PlantConfig plant = make_plant_config(s);
  RandomStream plant_stream = RandomStream::derived(s.seed, "plant");
  RandomStream meas = RandomStream::derived(s.seed, "measure-1");

  Vec x = s.params.x0;
  for (long k = 1; k <= 10; ++k) {
    x = plant_step(x, k - 1, plant, plant_stream);
    std::vector<Vec> z{measure(x, nodes[0].selector, nodes[0].meas_variance, meas)};
    StepResult r = net.step(k, z);
    CentralizedStepResult c = central.step(k, z);
    CHECK(r.post_weights[0] == c.post_weights);  // bit-identical
    CHECK(r.estimates[0] == c.estimate);
    CHECK(r.fail_probs[0] == c.fail_probs);
  }
}

TEST_CASE("identical log-likelihoods across nodes are a consensus fixed point") {
  // all nodes observe the same thing -> fused value is N times the local one
  Scenario s = small_scenario();
  for (auto& n : s.nodes) n.tanks = {4, 5, 6};
  const AugmentedModel model = make_filter_model(s);
  const auto nodes = make_detector_nodes(s);
  Network net(model, s.params.x0, nodes, s.topology, s.filter, s.seed);
  CentralizedFilter central(model, s.params.x0, nodes, s.filter, s.seed);

  Vec x = s.params.x0;
  PlantConfig plant = make_plant_config(s);
  RandomStream plant_stream = RandomStream::derived(s.seed, "plant");
  RandomStream meas = RandomStream::derived(s.seed, "measure-1");
  x = plant_step(x, 0, plant, plant_stream);
  Vec z0 = measure(x, nodes[0].selector, nodes[0].meas_variance, meas);
  std::vector<Vec> z{z0, z0, z0};

  StepResult r = net.step(1, z);
  CHECK(r.consensus_iterations <= 2);
  CentralizedStepResult c = central.step(1, z);
  for (std::size_t i = 0; i < c.post_weights.size(); ++i)
    CHECK(r.post_weights[0][i] == doctest::Approx(c.post_weights[i]).epsilon(1e-9));
}

TEST_CASE("healthy short run rarely reaches the alarm threshold") {
  // The binary excitation keeps flipping hypotheses, so healthy-run failure
  // probabilities fluctuate around the mutation equilibrium instead of
  // pinning to zero; the meaningful property is that threshold crossings
  // stay rare and the average stays moderate.
  Scenario s = small_scenario(120, 200);
  s.faults = {{4, {FaultShape::Abrupt, 2.0, 119}}};  // effectively never active
  RunTrace t = run_experiment(s, RunMode::Distributed);
  int above = 0, total = 0;
  double sum = 0.0;
  for (const TraceStep& st : t.steps)
    for (const Vec& probs : st.fail_probs)
      for (double p : probs) {
        if (p >= s.filter.alpha) ++above;
        sum += p;
        ++total;
      }
  CHECK(static_cast<double>(above) / total < 0.05);
  CHECK(sum / total < 0.55);
}

TEST_CASE("degenerate weights raise a divergence error") {
  Scenario s = small_scenario();
  const AugmentedModel model = make_filter_model(s);
  const auto nodes = make_detector_nodes(s);
  Network net(model, s.params.x0, nodes, s.topology, s.filter, s.seed);
  // an absurd measurement makes every exp(logw - max) zero only if logw is
  // -inf; with finite residuals the update must still succeed
  std::vector<Vec> z(nodes.size());
  for (std::size_t I = 0; I < nodes.size(); ++I)
    z[I] = Vec(nodes[I].selector.size(), 1e4);
  CHECK_NOTHROW(net.step(1, z));

  std::vector<Vec> bad(nodes.size());
  for (std::size_t I = 0; I < nodes.size(); ++I)
    bad[I] = Vec(nodes[I].selector.size(), std::nan(""));
  CHECK_THROWS_AS(net.step(2, bad), DegenerateWeightsError);
}
