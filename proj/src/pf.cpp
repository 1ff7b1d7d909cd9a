#include "dpffd/pf.hpp"

#include <cmath>

namespace dpffd {

Vec normalize_weights(const Vec& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw DegenerateWeightsError("normalize_weights: negative or non-finite weight");
    sum += w;
  }
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw DegenerateWeightsError("normalize_weights: weight mass is zero");
  Vec out(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / sum;
  return out;
}

bool weights_normalized(const Vec& weights, double tol) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tol;
}

ParticleSet systematic_resample(const ParticleSet& set, RandomStream& stream) {
  const std::size_t n = set.size();
  if (n == 0 || set.weights.size() != n)
    throw ContractViolation("systematic_resample: empty or inconsistent particle set");
  if (!weights_normalized(set.weights))
    throw ContractViolation("systematic_resample: weights not normalized");

  const double u = stream.uniform01();
  ParticleSet out;
  out.particles.reserve(n);
  out.weights.assign(n, 1.0 / static_cast<double>(n));

  double cum = set.weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = (u + static_cast<double>(i)) / static_cast<double>(n);
    while (cum < pos && j + 1 < n) cum += set.weights[++j];
    out.particles.push_back(set.particles[j]);
  }
  return out;
}

Vec mmse_estimate(const ParticleSet& set) {
  if (set.size() == 0) throw ContractViolation("mmse_estimate: empty particle set");
  if (!weights_normalized(set.weights))
    throw ContractViolation("mmse_estimate: weights not normalized");
  Vec mean(set.particles[0].size(), 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Vec& p = set.particles[i];
    const double w = set.weights[i];
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += w * p[d];
  }
  return mean;
}

}  // namespace dpffd
