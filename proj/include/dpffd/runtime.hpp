#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpffd/consensus.hpp"
#include "dpffd/fault.hpp"
#include "dpffd/pf.hpp"
#include "dpffd/rng.hpp"

namespace dpffd {

// One monitoring unit: a selector into the continuous state and a diagonal
// Gaussian measurement noise with variance a per component.
struct DetectorNode {
  int id = 0;                 // 1-based, for reporting
  std::vector<int> selector;  // 0-based continuous-state indices
  double meas_variance = 0.2;
};

// log N(z; h_I(x_c), a*I); depends on the particle only through x_c.
double local_log_likelihood(const DetectorNode& node, const Vec& z, const Vec& particle);

inline bool check_alarm(double prob, double alpha) { return prob >= alpha; }

struct FilterConfig {
  int particle_count = 1000;
  double alpha = 0.9;
  ConsensusConfig consensus;
  bool one_hop_only = false;  // fuse only {I} u N_I, skipping consensus
  int threads = 1;
};

struct AlarmEvent {
  int mode = 0;  // 0-based
  long step = 0;
  double probability = 0.0;
  int node = 0;  // 1-based id
};

struct StepResult {
  std::vector<Vec> estimates;     // per node, full augmented mean
  std::vector<Vec> fail_probs;    // per node, per mode
  std::vector<Vec> post_weights;  // per node, normalized pre-resample weights
  std::vector<AlarmEvent> alarms;
  int consensus_iterations = 0;
  bool consensus_converged = true;
};

// The DN network. Every node carries its own particle set and its own copies
// of the shared-seed streams; the synchronization invariant (identical
// particle sets at every step boundary) is a consequence, not shared state.
class Network {
 public:
  Network(AugmentedModel model, Vec x0, std::vector<DetectorNode> nodes, Topology topology,
          FilterConfig config, std::uint64_t master_seed);

  // measurements[I] is node I's local observation for step k (k >= 1).
  StepResult step(long k, const std::vector<Vec>& measurements);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  const ParticleSet& particles(int node) const {
    return particles_[static_cast<std::size_t>(node)];
  }
  const AugmentedModel& model() const { return model_; }

 private:
  AugmentedModel model_;
  std::vector<DetectorNode> nodes_;
  Topology topology_;
  Matrix weights_;
  std::vector<std::vector<int>> closed_neighborhoods_;
  FilterConfig config_;
  std::vector<ParticleSet> particles_;
  std::vector<RandomStream> proposal_, binary_, resample_;
  std::vector<Vec> prev_probs_;
};

struct CentralizedStepResult {
  Vec estimate;
  Vec fail_probs;
  Vec post_weights;
  std::vector<AlarmEvent> alarms;
};

// CPFFD reference path: one filter observing the union of all node
// measurements, with the factorized (stacked) likelihood.
class CentralizedFilter {
 public:
  CentralizedFilter(AugmentedModel model, Vec x0, std::vector<DetectorNode> nodes,
                    FilterConfig config, std::uint64_t master_seed);

  CentralizedStepResult step(long k, const std::vector<Vec>& measurements);

  const ParticleSet& particles() const { return particles_; }

 private:
  AugmentedModel model_;
  std::vector<DetectorNode> nodes_;
  FilterConfig config_;
  ParticleSet particles_;
  RandomStream proposal_, binary_, resample_;
  Vec prev_probs_;
};

}  // namespace dpffd
