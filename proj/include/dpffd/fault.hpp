#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "dpffd/pf.hpp"
#include "dpffd/rng.hpp"

namespace dpffd {

class NumericDivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FaultShape { Abrupt, Incipient };

// Occurrence profile beta(k - k0): 0 before onset, then a unit step (abrupt)
// or 1 - c^-(k-k0) (incipient, c > 1).
struct FaultProfile {
  FaultShape kind = FaultShape::Abrupt;
  double c = 2.0;
  long onset_step = 0;
};

double beta(const FaultProfile& profile, long k);

// Binary health hypothesis: e1 = [1,0] healthy, e2 = [0,1] faulty.
struct BinaryState {
  bool faulty = false;

  double b1() const { return faulty ? 0.0 : 1.0; }
  double b2() const { return faulty ? 1.0 : 0.0; }

  friend bool operator==(BinaryState a, BinaryState b) = default;
};

inline constexpr BinaryState kHealthy{false};
inline constexpr BinaryState kFaulty{true};

// Snap map: nearest of e1/e2 in Euclidean distance, ties to e1.
BinaryState phi(double v1, double v2);

// One random excitation of a binary state: phi(b + n), n ~ spec (uniform box).
BinaryState step_binary(BinaryState b, const NoiseSpec& spec, RandomStream& stream);

// Per-step state increment of one fault mode (already discretized).
using FaultDynamics = std::function<Vec(const Vec&)>;

struct FaultMode {
  FaultDynamics increment;
  FaultProfile profile;
};

// Truth-side fault forcing: sum_j beta_j(k) * g_j(x). The truth simulator
// gates faults by their profiles; the filter gates by binary particles.
Vec truth_fault_injection(const Vec& x, long k, const std::vector<FaultMode>& modes);

// Fault-augmented transition model. Particles are flat vectors:
// [x_c (n_x) | b^1 (2) | ... | b^M (2)].
struct AugmentedModel {
  int n_x = 0;
  std::function<Vec(const Vec&)> healthy_step;  // discrete-time f
  std::vector<FaultMode> modes;
  NoiseSpec process_noise = NoiseSpec::gaussian_iid(0.0, 0.0, 1);
  NoiseSpec binary_noise = NoiseSpec::uniform_box(-0.75, 0.75, 2);

  int mode_count() const { return static_cast<int>(modes.size()); }
  int dim() const { return n_x + 2 * mode_count(); }

  int b1_index(int j) const { return n_x + 2 * j; }
  int b2_index(int j) const { return n_x + 2 * j + 1; }

  BinaryState binary(const Vec& particle, int j) const {
    return BinaryState{particle[static_cast<std::size_t>(b2_index(j))] > 0.5};
  }
  void set_binary(Vec& particle, int j, BinaryState b) const {
    particle[static_cast<std::size_t>(b1_index(j))] = b.b1();
    particle[static_cast<std::size_t>(b2_index(j))] = b.b2();
  }

  // All modes healthy, continuous part = x0.
  Vec initial_particle(const Vec& x0) const;
};

// One step of the failure-sensitive filter model: continuous part applies the
// healthy dynamics plus fault increments gated by the particle's current
// binaries plus process noise; each binary is then re-excited through phi.
Vec augmented_transition(const Vec& particle, const AugmentedModel& model,
                         RandomStream& proposal, RandomStream& binary);

// Weighted fraction of particles whose mode-j hypothesis is faulty.
double failure_probability(const ParticleSet& set, const AugmentedModel& model, int mode_j);

}  // namespace dpffd
