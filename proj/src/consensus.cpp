#include "dpffd/consensus.hpp"

#include <algorithm>
#include <cmath>

#include "dpffd/pf.hpp"

namespace dpffd {

Topology Topology::complete(int n) {
  Topology t;
  t.nodes = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) t.edges.emplace_back(i, j);
  return t;
}

Topology Topology::path(int n) {
  Topology t;
  t.nodes = n;
  for (int i = 0; i + 1 < n; ++i) t.edges.emplace_back(i, i + 1);
  return t;
}

std::vector<std::vector<int>> Topology::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nodes));
  for (auto [a, b] : edges) {
    if (a == b) throw TopologyError("Topology: self-loop");
    if (a < 0 || b < 0 || a >= nodes || b >= nodes)
      throw TopologyError("Topology: edge endpoint out of range");
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  return adj;
}

std::vector<int> Topology::degrees() const {
  auto adj = adjacency();
  std::vector<int> d(adj.size());
  for (std::size_t i = 0; i < adj.size(); ++i) d[i] = static_cast<int>(adj[i].size());
  return d;
}

bool is_connected(const Topology& topology) {
  if (topology.nodes <= 0) throw TopologyError("is_connected: empty topology");
  auto adj = topology.adjacency();
  std::vector<bool> seen(static_cast<std::size_t>(topology.nodes), false);
  std::vector<int> frontier{0};
  seen[0] = true;
  while (!frontier.empty()) {
    int v = frontier.back();
    frontier.pop_back();
    for (int w : adj[static_cast<std::size_t>(v)])
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        frontier.push_back(w);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

Matrix metropolis_weights(const Topology& topology) {
  if (!is_connected(topology)) throw TopologyError("metropolis_weights: disconnected topology");
  const std::size_t n = static_cast<std::size_t>(topology.nodes);
  auto deg = topology.degrees();
  Matrix w(n, Vec(n, 0.0));
  for (auto [a, b] : topology.edges) {
    const double wij = 1.0 / (1.0 + static_cast<double>(std::max(
                                 deg[static_cast<std::size_t>(a)], deg[static_cast<std::size_t>(b)])));
    w[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = wij;
    w[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = wij;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) off += w[i][j];
    w[i][i] = 1.0 - off;
  }
  return w;
}

std::vector<Vec> consensus_step(const std::vector<Vec>& values, const Matrix& weights) {
  const std::size_t n = values.size();
  if (weights.size() != n)
    throw ContractViolation("consensus_step: weight matrix does not match node count");
  const std::size_t len = values.empty() ? 0 : values[0].size();
  for (const Vec& v : values)
    if (v.size() != len) throw ContractViolation("consensus_step: value length mismatch");

  std::vector<Vec> next(n, Vec(len, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double wij = weights[i][j];
      if (wij == 0.0) continue;
      const Vec& src = values[j];
      Vec& dst = next[i];
      for (std::size_t d = 0; d < len; ++d) dst[d] += wij * src[d];
    }
  return next;
}

ConsensusResult run_consensus(std::vector<Vec> values, const Matrix& weights,
                              const ConsensusConfig& config) {
  ConsensusResult result;
  if (values.size() <= 1) {
    result.values = std::move(values);
    return result;
  }
  for (int it = 0; it < config.max_iterations; ++it) {
    std::vector<Vec> next = consensus_step(values, weights);
    double delta = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t d = 0; d < values[i].size(); ++d)
        delta = std::max(delta, std::abs(next[i][d] - values[i][d]));
    values = std::move(next);
    result.iterations = it + 1;
    if (delta < config.tolerance) {
      result.values = std::move(values);
      return result;
    }
  }
  result.converged = false;
  result.values = std::move(values);
  return result;
}

}  // namespace dpffd
