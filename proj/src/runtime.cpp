#include "dpffd/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace dpffd {

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    body(0, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

// Propagation and local likelihood for one node. Per-particle substreams are
// derived from (step, particle index) so the result is independent of both
// scheduling and node identity.
void propagate_and_weigh(ParticleSet& set, const AugmentedModel& model,
                         const DetectorNode& node, const Vec& z, long k,
                         const RandomStream& proposal, const RandomStream& binary,
                         int threads, Vec& loglik_out) {
  const std::size_t n = set.size();
  loglik_out.resize(n);
  parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RandomStream ps = proposal.substream(static_cast<std::uint64_t>(k), i);
      RandomStream bs = binary.substream(static_cast<std::uint64_t>(k), i);
      set.particles[i] = augmented_transition(set.particles[i], model, ps, bs);
      loglik_out[i] = local_log_likelihood(node, z, set.particles[i]);
    }
  });
}

Vec exp_normalize(const Vec& log_weights, long k) {
  double m = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) m = std::max(m, lw);
  if (!std::isfinite(m))
    throw DegenerateWeightsError("weight update diverged at step " + std::to_string(k) +
                                 ": all log-weights are -inf or NaN");
  Vec w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i] - m);
  return normalize_weights(w);
}

}  // namespace

double local_log_likelihood(const DetectorNode& node, const Vec& z, const Vec& particle) {
  const double a = node.meas_variance;
  const std::size_t nz = node.selector.size();
  double quad = 0.0;
  for (std::size_t i = 0; i < nz; ++i) {
    const double r = z[i] - particle[static_cast<std::size_t>(node.selector[i])];
    quad += r * r;
  }
  return -0.5 * static_cast<double>(nz) * std::log(2.0 * 3.14159265358979323846 * a) -
         quad / (2.0 * a);
}

Network::Network(AugmentedModel model, Vec x0, std::vector<DetectorNode> nodes,
                 Topology topology, FilterConfig config, std::uint64_t master_seed)
    : model_(std::move(model)),
      nodes_(std::move(nodes)),
      topology_(std::move(topology)),
      config_(config) {
  if (static_cast<int>(nodes_.size()) != topology_.nodes)
    throw ContractViolation("Network: node definitions do not match topology size");
  weights_ = metropolis_weights(topology_);
  auto adj = topology_.adjacency();
  closed_neighborhoods_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    closed_neighborhoods_[i] = adj[i];
    closed_neighborhoods_[i].push_back(static_cast<int>(i));
  }

  ParticleSet init;
  init.particles.assign(static_cast<std::size_t>(config_.particle_count),
                        model_.initial_particle(x0));
  init.weights.assign(static_cast<std::size_t>(config_.particle_count),
                      1.0 / static_cast<double>(config_.particle_count));
  particles_.assign(nodes_.size(), init);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    proposal_.push_back(RandomStream::derived(master_seed, "proposal"));
    binary_.push_back(RandomStream::derived(master_seed, "binary"));
    resample_.push_back(RandomStream::derived(master_seed, "resample"));
  }
  prev_probs_.assign(nodes_.size(), Vec(static_cast<std::size_t>(model_.mode_count()), 0.0));
}

StepResult Network::step(long k, const std::vector<Vec>& measurements) {
  const std::size_t n_nodes = nodes_.size();
  if (measurements.size() != n_nodes)
    throw ContractViolation("Network::step: one measurement per node required");

  std::vector<Vec> logliks(n_nodes);
  for (std::size_t I = 0; I < n_nodes; ++I)
    propagate_and_weigh(particles_[I], model_, nodes_[I], measurements[I], k,
                        proposal_[I], binary_[I], config_.threads, logliks[I]);

  StepResult result;
  std::vector<Vec> fused(n_nodes);
  if (config_.one_hop_only) {
    // Eq-style one-hop product: sum log-likelihoods over {I} u N_I directly.
    for (std::size_t I = 0; I < n_nodes; ++I) {
      fused[I].assign(logliks[I].size(), 0.0);
      for (int J : closed_neighborhoods_[I])
        for (std::size_t i = 0; i < fused[I].size(); ++i)
          fused[I][i] += logliks[static_cast<std::size_t>(J)][i];
    }
  } else {
    ConsensusResult cr = run_consensus(logliks, weights_, config_.consensus);
    result.consensus_iterations = cr.iterations;
    result.consensus_converged = cr.converged;
    const double scale = static_cast<double>(n_nodes);  // average -> global sum
    fused = std::move(cr.values);
    for (Vec& f : fused)
      for (double& v : f) v *= scale;
  }

  result.estimates.resize(n_nodes);
  result.fail_probs.resize(n_nodes);
  result.post_weights.resize(n_nodes);
  for (std::size_t I = 0; I < n_nodes; ++I) {
    ParticleSet& set = particles_[I];
    Vec logw(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
      logw[i] = std::log(set.weights[i]) + fused[I][i];
    set.weights = exp_normalize(logw, k);
    result.post_weights[I] = set.weights;

    RandomStream rs = resample_[I].substream(static_cast<std::uint64_t>(k));
    set = systematic_resample(set, rs);

    result.estimates[I] = mmse_estimate(set);
    Vec probs(static_cast<std::size_t>(model_.mode_count()));
    for (int j = 0; j < model_.mode_count(); ++j) {
      probs[static_cast<std::size_t>(j)] = failure_probability(set, model_, j);
      const double p = probs[static_cast<std::size_t>(j)];
      if (check_alarm(p, config_.alpha) &&
          !check_alarm(prev_probs_[I][static_cast<std::size_t>(j)], config_.alpha))
        result.alarms.push_back(AlarmEvent{j, k, p, nodes_[I].id});
    }
    prev_probs_[I] = probs;
    result.fail_probs[I] = std::move(probs);
  }
  return result;
}

CentralizedFilter::CentralizedFilter(AugmentedModel model, Vec x0,
                                     std::vector<DetectorNode> nodes, FilterConfig config,
                                     std::uint64_t master_seed)
    : model_(std::move(model)),
      nodes_(std::move(nodes)),
      config_(config),
      proposal_(RandomStream::derived(master_seed, "proposal")),
      binary_(RandomStream::derived(master_seed, "binary")),
      resample_(RandomStream::derived(master_seed, "resample")) {
  particles_.particles.assign(static_cast<std::size_t>(config_.particle_count),
                              model_.initial_particle(x0));
  particles_.weights.assign(static_cast<std::size_t>(config_.particle_count),
                            1.0 / static_cast<double>(config_.particle_count));
  prev_probs_.assign(static_cast<std::size_t>(model_.mode_count()), 0.0);
}

CentralizedStepResult CentralizedFilter::step(long k, const std::vector<Vec>& measurements) {
  if (measurements.size() != nodes_.size())
    throw ContractViolation("CentralizedFilter::step: one measurement per node required");
  const std::size_t n = particles_.size();

  Vec loglik(n, 0.0);
  parallel_for(n, config_.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      RandomStream ps = proposal_.substream(static_cast<std::uint64_t>(k), i);
      RandomStream bs = binary_.substream(static_cast<std::uint64_t>(k), i);
      particles_.particles[i] = augmented_transition(particles_.particles[i], model_, ps, bs);
      double l = 0.0;
      for (std::size_t I = 0; I < nodes_.size(); ++I)
        l += local_log_likelihood(nodes_[I], measurements[I], particles_.particles[i]);
      loglik[i] = l;
    }
  });

  Vec logw(n);
  for (std::size_t i = 0; i < n; ++i) logw[i] = std::log(particles_.weights[i]) + loglik[i];
  particles_.weights = exp_normalize(logw, k);

  CentralizedStepResult result;
  result.post_weights = particles_.weights;

  RandomStream rs = resample_.substream(static_cast<std::uint64_t>(k));
  particles_ = systematic_resample(particles_, rs);

  result.estimate = mmse_estimate(particles_);
  result.fail_probs.resize(static_cast<std::size_t>(model_.mode_count()));
  for (int j = 0; j < model_.mode_count(); ++j) {
    const double p = failure_probability(particles_, model_, j);
    result.fail_probs[static_cast<std::size_t>(j)] = p;
    if (check_alarm(p, config_.alpha) &&
        !check_alarm(prev_probs_[static_cast<std::size_t>(j)], config_.alpha))
      result.alarms.push_back(AlarmEvent{j, k, p, 0});
    prev_probs_[static_cast<std::size_t>(j)] = p;
  }
  return result;
}

}  // namespace dpffd
