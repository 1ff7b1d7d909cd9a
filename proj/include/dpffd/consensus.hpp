#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "dpffd/rng.hpp"

namespace dpffd {

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Undirected communication graph over N detector nodes, 0-based ids.
struct Topology {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;  // unordered pairs, no self-loops

  static Topology complete(int n);
  static Topology path(int n);

  std::vector<std::vector<int>> adjacency() const;  // neighbor lists
  std::vector<int> degrees() const;
};

bool is_connected(const Topology& topology);

using Matrix = std::vector<Vec>;

// W_IJ = 1/(1 + max(d_I, d_J)) on edges, diagonal completes rows to 1.
// Symmetric, doubly stochastic, non-negative. Requires a connected graph.
Matrix metropolis_weights(const Topology& topology);

// One synchronous averaging round; preserves the global sum.
std::vector<Vec> consensus_step(const std::vector<Vec>& values, const Matrix& weights);

struct ConsensusConfig {
  int max_iterations = 50;
  double tolerance = 1e-8;  // max componentwise change per iteration
};

struct ConsensusResult {
  std::vector<Vec> values;
  int iterations = 0;
  bool converged = true;
};

// Iterates consensus_step until the largest componentwise change drops below
// tolerance or max_iterations is hit (non-convergence is reported, not fatal).
ConsensusResult run_consensus(std::vector<Vec> values, const Matrix& weights,
                              const ConsensusConfig& config);

}  // namespace dpffd
