#include "dpffd/tank.hpp"

#include <cmath>

namespace dpffd {

TankTopology TankTopology::grid3x3() {
  TankTopology t;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int i = 3 * r + c;
      if (c + 1 < 3) t.pipes.emplace_back(i, i + 1);
      if (r + 1 < 3) t.pipes.emplace_back(i, i + 3);
    }
  return t;
}

double flow_rate(double x_i, double x_j, double mu, double Sp, double g) {
  const double dh = x_i - x_j;
  const double s = dh > 0.0 ? 1.0 : (dh < 0.0 ? -1.0 : 0.0);
  return mu * Sp * s * std::sqrt(2.0 * g * std::abs(dh));
}

double leak_rate(double x_i, double mu, double Sp, double Sc, double g) {
  const double s = x_i > 0.0 ? 1.0 : (x_i < 0.0 ? -1.0 : 0.0);
  return (mu * Sp / Sc) * s * std::sqrt(2.0 * g * std::abs(x_i));
}

Vec tank_derivatives(const Vec& levels, const std::vector<int>& active_leaks,
                     const TankParams& params, const TankTopology& topology) {
  Vec rates(levels.size(), 0.0);
  for (auto [a, b] : topology.pipes) {
    // one evaluation per pipe so the pair cancels bit-exactly
    const double q = flow_rate(levels[static_cast<std::size_t>(a)],
                               levels[static_cast<std::size_t>(b)],
                               params.mu[static_cast<std::size_t>(a)], params.Sp, params.g);
    rates[static_cast<std::size_t>(a)] -= q / params.Sc;
    rates[static_cast<std::size_t>(b)] += q / params.Sc;
  }
  for (int t : active_leaks)
    rates[static_cast<std::size_t>(t)] -=
        leak_rate(levels[static_cast<std::size_t>(t)], params.mu[static_cast<std::size_t>(t)],
                  params.Sp, params.Sc, params.g);
  return rates;
}

std::vector<FaultMode> tank_fault_modes(const PlantConfig& config) {
  std::vector<FaultMode> modes;
  modes.reserve(config.faults.size());
  for (const TankFault& f : config.faults) {
    const int tank = f.tank;
    const TankParams p = config.params;
    FaultMode mode;
    mode.profile = f.profile;
    mode.increment = [tank, p](const Vec& x) {
      Vec g(x.size(), 0.0);
      g[static_cast<std::size_t>(tank)] =
          -p.Ts * leak_rate(x[static_cast<std::size_t>(tank)],
                            p.mu[static_cast<std::size_t>(tank)], p.Sp, p.Sc, p.g);
      return g;
    };
    modes.push_back(std::move(mode));
  }
  return modes;
}

Vec tank_healthy_step(const Vec& levels, const TankParams& params, const TankTopology& topology) {
  Vec rates = tank_derivatives(levels, {}, params, topology);
  Vec next(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    next[i] = levels[i] + params.Ts * rates[i];
    if (next[i] < 0.0) next[i] = 0.0;
  }
  return next;
}

Vec plant_step(const Vec& levels, long k, const PlantConfig& config, RandomStream& stream) {
  Vec rates = tank_derivatives(levels, {}, config.params, config.topology);
  Vec fault = truth_fault_injection(levels, k, tank_fault_modes(config));
  Vec noise = draw_noise(config.process_noise, stream);
  Vec next(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    next[i] = levels[i] + config.params.Ts * rates[i] + fault[i] + noise[i];
    if (next[i] < 0.0) next[i] = 0.0;
    if (!std::isfinite(next[i]))
      throw NumericDivergenceError("plant_step: non-finite level");
  }
  return next;
}

Vec measure(const Vec& levels, const std::vector<int>& selector, double noise_variance,
            RandomStream& stream) {
  Vec z(selector.size());
  for (std::size_t i = 0; i < selector.size(); ++i)
    z[i] = levels[static_cast<std::size_t>(selector[i])] +
           stream.gaussian(0.0, noise_variance);
  return z;
}

}  // namespace dpffd
