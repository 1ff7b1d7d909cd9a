#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpffd/runtime.hpp"
#include "dpffd/tank.hpp"

namespace dpffd {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NodeSpec {
  int id = 0;                  // 1-based
  std::vector<int> tanks;      // 1-based tank numbers
  double noise_variance = 0.2;
};

struct FaultSpec {
  int tank = 0;  // 1-based
  FaultProfile profile;
};

// Full experiment description. Defaults reproduce the nine-tank benchmark:
// three leak modes at tanks 4/5/7 injected at steps 2000/2500/2900, three
// DNs on a complete graph.
struct Scenario {
  TankParams params;
  TankTopology pipes = TankTopology::grid3x3();
  // The benchmark quotes the process noise as N(0, 0.05) without saying
  // whether 0.05 is a variance or a standard deviation.  Reading it as the
  // standard deviation (variance 0.0025) is the only interpretation that
  // keeps the healthy steady-state estimation error under 0.15 m, so that is
  // the default; set 0.05 here to get the literal-variance reading.
  double plant_process_variance = 0.0025;
  std::vector<FaultSpec> faults;
  std::vector<NodeSpec> nodes;
  Topology topology;  // node communication graph
  FilterConfig filter;
  double filter_process_variance = -1.0;  // < 0: same as plant
  double binary_noise_halfwidth = 0.75;
  std::uint64_t seed = 1;
  long steps = 3300;

  static Scenario nine_tank_default();

  void validate() const;  // throws ScenarioError with field-level messages

  double effective_filter_process_variance() const {
    return filter_process_variance < 0.0 ? plant_process_variance : filter_process_variance;
  }
};

Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& scenario);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

// Bridges to the runtime pieces.
PlantConfig make_plant_config(const Scenario& scenario);
AugmentedModel make_filter_model(const Scenario& scenario);
std::vector<DetectorNode> make_detector_nodes(const Scenario& scenario);

}  // namespace dpffd
