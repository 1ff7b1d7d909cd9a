#pragma once

#include "dpffd/scenario.hpp"
#include "dpffd/trace.hpp"

namespace dpffd {

enum class RunMode { Centralized, Distributed };

// Runs the truth simulator and the chosen filter over the scenario horizon.
// Deterministic in (scenario, mode).
RunTrace run_experiment(const Scenario& scenario, RunMode mode);

}  // namespace dpffd
