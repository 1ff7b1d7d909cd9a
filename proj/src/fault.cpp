#include "dpffd/fault.hpp"

#include <cmath>

namespace dpffd {

double beta(const FaultProfile& profile, long k) {
  if (k < profile.onset_step) return 0.0;
  if (profile.kind == FaultShape::Abrupt) return 1.0;
  return 1.0 - std::pow(profile.c, -static_cast<double>(k - profile.onset_step));
}

BinaryState phi(double v1, double v2) {
  const double d1 = (v1 - 1.0) * (v1 - 1.0) + v2 * v2;
  const double d2 = v1 * v1 + (v2 - 1.0) * (v2 - 1.0);
  return BinaryState{d1 > d2};
}

BinaryState step_binary(BinaryState b, const NoiseSpec& spec, RandomStream& stream) {
  Vec n = draw_noise(spec, stream);
  return phi(b.b1() + n[0], b.b2() + n[1]);
}

Vec truth_fault_injection(const Vec& x, long k, const std::vector<FaultMode>& modes) {
  Vec total(x.size(), 0.0);
  for (const FaultMode& mode : modes) {
    const double scale = beta(mode.profile, k);
    if (scale == 0.0) continue;
    Vec g = mode.increment(x);
    for (std::size_t d = 0; d < total.size(); ++d) total[d] += scale * g[d];
  }
  return total;
}

Vec AugmentedModel::initial_particle(const Vec& x0) const {
  Vec p(static_cast<std::size_t>(dim()), 0.0);
  for (int d = 0; d < n_x; ++d) p[static_cast<std::size_t>(d)] = x0[static_cast<std::size_t>(d)];
  for (int j = 0; j < mode_count(); ++j) set_binary(p, j, kHealthy);
  return p;
}

Vec augmented_transition(const Vec& particle, const AugmentedModel& model,
                         RandomStream& proposal, RandomStream& binary) {
  const std::size_t nx = static_cast<std::size_t>(model.n_x);
  Vec xc(particle.begin(), particle.begin() + static_cast<std::ptrdiff_t>(nx));

  Vec next = model.healthy_step(xc);
  for (int j = 0; j < model.mode_count(); ++j) {
    if (!model.binary(particle, j).faulty) continue;
    Vec g = model.modes[static_cast<std::size_t>(j)].increment(xc);
    for (std::size_t d = 0; d < nx; ++d) next[d] += g[d];
  }
  Vec v = draw_noise(model.process_noise, proposal);
  for (std::size_t d = 0; d < nx; ++d) next[d] += v[d];

  Vec out(particle.size());
  for (std::size_t d = 0; d < nx; ++d) {
    if (!std::isfinite(next[d]))
      throw NumericDivergenceError("augmented_transition: non-finite continuous state");
    out[d] = next[d];
  }
  for (int j = 0; j < model.mode_count(); ++j)
    model.set_binary(out, j, step_binary(model.binary(particle, j), model.binary_noise, binary));
  return out;
}

double failure_probability(const ParticleSet& set, const AugmentedModel& model, int mode_j) {
  double p = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (model.binary(set.particles[i], mode_j).faulty) p += set.weights[i];
  return p;
}

}  // namespace dpffd
