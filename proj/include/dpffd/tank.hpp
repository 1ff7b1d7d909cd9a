#pragma once

#include <utility>
#include <vector>

#include "dpffd/fault.hpp"
#include "dpffd/rng.hpp"

namespace dpffd {

inline constexpr int kTankCount = 9;

struct TankParams {
  double Sc = 0.0154;   // tank cross section, m^2
  double Sp = 2e-5;     // pipe cross section, m^2
  double g = 9.81;      // m/s^2
  double Ts = 0.1;      // sampling period, s
  Vec mu = Vec(kTankCount, 1.0);
  Vec x0 = Vec(kTankCount, 2.0);  // initial levels, m
};

// 3x3 grid, tanks numbered row-major; pipes are the 4-neighbor links.
struct TankTopology {
  std::vector<std::pair<int, int>> pipes;  // 0-based tank indices

  static TankTopology grid3x3();
};

// Torricelli flow through one pipe, m^3/s. Antisymmetric in its arguments.
double flow_rate(double x_i, double x_j, double mu, double Sp, double g);

// Level loss rate of a leaking tank, m/s. sqrt(|.|) keeps it total near 0.
double leak_rate(double x_i, double mu, double Sp, double Sc, double g);

// Level rates for all tanks: pipe flows divided by Sc, minus leak rates for
// the tanks listed in active_leaks.
Vec tank_derivatives(const Vec& levels, const std::vector<int>& active_leaks,
                     const TankParams& params, const TankTopology& topology);

struct TankFault {
  int tank = 0;  // 0-based
  FaultProfile profile;
};

struct PlantConfig {
  TankParams params;
  TankTopology topology = TankTopology::grid3x3();
  std::vector<TankFault> faults;
  NoiseSpec process_noise = NoiseSpec::gaussian_iid(0.0, 0.05, kTankCount);
};

// Truth fault modes as per-step increments (Ts folded in), for use with
// truth_fault_injection and as the filter's gated fault dynamics.
std::vector<FaultMode> tank_fault_modes(const PlantConfig& config);

// Healthy discrete-time map: x + Ts * derivatives (no leaks), floored at 0.
Vec tank_healthy_step(const Vec& levels, const TankParams& params, const TankTopology& topology);

// Forward-Euler truth step with profile-gated leaks and process noise.
Vec plant_step(const Vec& levels, long k, const PlantConfig& config, RandomStream& stream);

// Selector measurement with additive diagonal Gaussian noise.
Vec measure(const Vec& levels, const std::vector<int>& selector, double noise_variance,
            RandomStream& stream);

}  // namespace dpffd
