"""Distributed particle-filtering fault diagnosis.

Thin convenience layer over the compiled ``_dpffd`` core: scenarios and
traces are plain dicts here and JSON text at the C++ boundary.
"""

import json

try:
    from . import _dpffd as _core  # installed package layout
except ImportError:  # module built standalone (e.g. cmake -DDPFFD_BUILD_PYTHON=ON)
    import _dpffd as _core

DegenerateWeightsError = _core.DegenerateWeightsError
NumericDivergenceError = _core.NumericDivergenceError
ScenarioError = _core.ScenarioError
TopologyError = _core.TopologyError

beta = _core.beta
flow_rate = _core.flow_rate
leak_rate = _core.leak_rate
metropolis_weights = _core.metropolis_weights
mmse_estimate = _core.mmse_estimate
normalize_weights = _core.normalize_weights
phi = _core.phi
run_consensus = _core.run_consensus
systematic_resample = _core.systematic_resample

__all__ = [
    "DegenerateWeightsError",
    "NumericDivergenceError",
    "ScenarioError",
    "TopologyError",
    "beta",
    "compare_traces",
    "flow_rate",
    "leak_rate",
    "metropolis_weights",
    "mmse_estimate",
    "normalize_weights",
    "nine_tank_scenario",
    "phi",
    "run_consensus",
    "run_experiment",
    "systematic_resample",
    "trace_to_csv",
    "validate_scenario",
    "write_trace_plots",
]


def nine_tank_scenario():
    """Nine-tank benchmark scenario as a dict."""
    return json.loads(_core.nine_tank_scenario())


def validate_scenario(scenario):
    """Raise ScenarioError if the scenario dict is invalid."""
    _core.validate_scenario(json.dumps(scenario))


def run_experiment(scenario, mode="distributed"):
    """Run truth simulator plus filter; returns the trace as a dict."""
    return json.loads(_core.run_experiment(json.dumps(scenario), mode))


def trace_to_csv(trace):
    """Render a trace dict in the CSV schema."""
    return _core.trace_to_csv(json.dumps(trace))


def compare_traces(trace_a, trace_b):
    """Deviation metrics between two trace dicts of equal duration."""
    return _core.compare_traces(json.dumps(trace_a), json.dumps(trace_b))


def write_trace_plots(trace, out_dir, fault_tanks, onsets):
    """Write SVG probability/level plots; returns the file paths."""
    return _core.write_trace_plots(json.dumps(trace), str(out_dir), list(fault_tanks), list(onsets))
