#pragma once

#include <stdexcept>
#include <vector>

#include "dpffd/rng.hpp"

namespace dpffd {

// All particle weights are zero or non-finite; the filter has diverged.
class DegenerateWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Weighted particle cloud. States are flat vectors; augmented layouts
// (continuous block + binary slots) are defined in fault.hpp.
struct ParticleSet {
  std::vector<Vec> particles;
  Vec weights;

  std::size_t size() const { return particles.size(); }
};

// Scales weights to sum to 1. Ordering and proportionality preserved.
Vec normalize_weights(const Vec& weights);

bool weights_normalized(const Vec& weights, double tol = 1e-9);

// Systematic resampling with a single uniform draw: positions (u + i)/N over
// the cumulative weight ladder. Output weights are uniform 1/N.
ParticleSet systematic_resample(const ParticleSet& set, RandomStream& stream);

// Posterior-mean estimate: componentwise weighted average of the particles.
Vec mmse_estimate(const ParticleSet& set);

}  // namespace dpffd
