#include <cmath>

#include "doctest.h"
#include "dpffd/tank.hpp"

using namespace dpffd;

namespace {

const TankParams kParams;
const TankTopology kGrid = TankTopology::grid3x3();

PlantConfig noiseless_config(std::vector<TankFault> faults = {}) {
  PlantConfig c;
  c.faults = std::move(faults);
  c.process_noise = NoiseSpec::gaussian_iid(0.0, 0.0, kTankCount);
  return c;
}

double total_volume(const Vec& x, const TankParams& p) {
  double v = 0.0;
  for (double level : x) v += p.Sc * level;
  return v;
}

}  // namespace

TEST_CASE("flow_rate: zero at equal levels, Table-2 value, antisymmetry") {
  CHECK(flow_rate(2.0, 2.0, 1.0, 2e-5, 9.81) == 0.0);
  CHECK(flow_rate(2.0, 1.0, 1.0, 2e-5, 9.81) ==
        doctest::Approx(2e-5 * std::sqrt(19.62)).epsilon(1e-12));
  CHECK(flow_rate(2.0, 1.0, 1.0, 2e-5, 9.81) == doctest::Approx(8.859e-5).epsilon(1e-3));

  RandomStream stream(8);
  for (int i = 0; i < 200; ++i) {
    const double a = stream.uniform(0.0, 5.0), b = stream.uniform(0.0, 5.0);
    CHECK(flow_rate(a, b, 1.0, 2e-5, 9.81) == -flow_rate(b, a, 1.0, 2e-5, 9.81));
  }
}

TEST_CASE("leak_rate: zero at empty, Table-2 value, sqrt scaling") {
  CHECK(leak_rate(0.0, 1.0, 2e-5, 0.0154, 9.81) == 0.0);
  CHECK(leak_rate(2.0, 1.0, 2e-5, 0.0154, 9.81) ==
        doctest::Approx((2e-5 / 0.0154) * std::sqrt(39.24)).epsilon(1e-12));
  CHECK(leak_rate(2.0, 1.0, 2e-5, 0.0154, 9.81) == doctest::Approx(8.135e-3).epsilon(1e-3));
  CHECK(leak_rate(8.0, 1.0, 2e-5, 0.0154, 9.81) /
            leak_rate(2.0, 1.0, 2e-5, 0.0154, 9.81) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("tank_derivatives: equilibrium, conservation, single leak") {
  Vec equal(kTankCount, 2.0);
  Vec rates = tank_derivatives(equal, {}, kParams, kGrid);
  for (double r : rates) CHECK(r == 0.0);

  RandomStream stream(4);
  Vec x(kTankCount);
  for (double& v : x) v = stream.uniform(0.5, 4.0);
  rates = tank_derivatives(x, {}, kParams, kGrid);
  double sum = 0.0;
  for (double r : rates) sum += r * kParams.Sc;
  CHECK(std::abs(sum) < 1e-12);

  rates = tank_derivatives(equal, {3}, kParams, kGrid);  // tank 4, 0-based
  CHECK(rates[3] == doctest::Approx(-8.135e-3).epsilon(1e-3));
  for (int i = 0; i < kTankCount; ++i)
    if (i != 3) CHECK(rates[static_cast<std::size_t>(i)] == 0.0);
}

TEST_CASE("plant_step: equilibrium, Euler leak arithmetic, floor at zero") {
  auto cfg = noiseless_config();
  RandomStream stream(1);
  Vec equal(kTankCount, 2.0);
  CHECK(plant_step(equal, 0, cfg, stream) == equal);

  auto leak4 = noiseless_config({{3, FaultProfile{FaultShape::Abrupt, 2.0, 0}}});
  Vec next = plant_step(equal, 0, leak4, stream);
  CHECK(next[3] == doctest::Approx(2.0 - 0.1 * 8.135e-3).epsilon(1e-4));

  Vec near_empty(kTankCount, 0.0);
  PlantConfig noisy = noiseless_config();
  noisy.process_noise = NoiseSpec::gaussian_iid(-1.0, 0.0, kTankCount);  // forced negative
  Vec floored = plant_step(near_empty, 0, noisy, stream);
  for (double v : floored) CHECK(v == 0.0);
}

TEST_CASE("plant_step: volume conserved over 10,000 noiseless steps") {
  auto cfg = noiseless_config();
  RandomStream stream(2);
  Vec x(kTankCount);
  for (int i = 0; i < kTankCount; ++i) x[static_cast<std::size_t>(i)] = 1.0 + 0.25 * i;
  const double v0 = total_volume(x, cfg.params);
  for (long k = 0; k < 10000; ++k) x = plant_step(x, k, cfg, stream);
  CHECK(std::abs(total_volume(x, cfg.params) - v0) / v0 < 1e-10);
}

TEST_CASE("plant_step: leak makes total volume strictly non-increasing") {
  auto cfg = noiseless_config({{4, FaultProfile{FaultShape::Abrupt, 2.0, 0}}});
  RandomStream stream(3);
  Vec x(kTankCount, 2.0);
  double prev = total_volume(x, cfg.params);
  for (long k = 0; k < 2000; ++k) {
    x = plant_step(x, k, cfg, stream);
    const double v = total_volume(x, cfg.params);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("measure: selector semantics and determinism") {
  Vec x(kTankCount);
  for (int i = 0; i < kTankCount; ++i) x[static_cast<std::size_t>(i)] = i + 1.0;

  RandomStream stream(9);
  CHECK(measure(x, {3, 4, 5}, 0.0, stream) == Vec{4.0, 5.0, 6.0});  // node 2 selector

  Vec z1 = measure(x, {0, 1, 2, 3, 4, 5}, 0.0, stream);
  Vec z3 = measure(x, {3, 4, 5, 6, 7, 8}, 0.0, stream);
  CHECK(z1[3] == z3[0]);
  CHECK(z1[4] == z3[1]);
  CHECK(z1[5] == z3[2]);

  RandomStream a(10), b(10);
  CHECK(measure(x, {0, 1}, 0.2, a) == measure(x, {0, 1}, 0.2, b));
}

TEST_CASE("tank_fault_modes: increments match Ts-scaled leak rates") {
  auto cfg = noiseless_config({{3, FaultProfile{FaultShape::Abrupt, 2.0, 7}}});
  auto modes = tank_fault_modes(cfg);
  REQUIRE(modes.size() == 1);
  Vec x(kTankCount, 2.0);
  Vec g = modes[0].increment(x);
  CHECK(g[3] == doctest::Approx(-0.1 * 8.135e-3).epsilon(1e-3));
  CHECK(modes[0].profile.onset_step == 7);
}
