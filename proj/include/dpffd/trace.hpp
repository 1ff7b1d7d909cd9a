#pragma once

#include <string>
#include <vector>

#include "dpffd/runtime.hpp"

namespace dpffd {

struct TraceStep {
  long k = 0;
  double time_s = 0.0;
  Vec truth;                     // plant levels
  std::vector<Vec> estimates;    // per node, continuous part only
  std::vector<Vec> fail_probs;   // per node, per mode
  std::vector<std::vector<int>> alarm;  // per node, per mode, 0/1
  int consensus_iterations = 0;
};

struct RunTrace {
  int node_count = 0;
  int mode_count = 0;
  int state_dim = 0;
  double alpha = 0.9;
  double Ts = 0.1;
  std::vector<TraceStep> steps;
  std::vector<AlarmEvent> events;  // upward crossings
};

std::string trace_to_csv(const RunTrace& trace);
std::string trace_to_json_text(const RunTrace& trace);
RunTrace trace_from_json_text(const std::string& text);

void save_trace_csv(const RunTrace& trace, const std::string& path);
void save_trace_json(const RunTrace& trace, const std::string& path);
RunTrace load_trace_json(const std::string& path);

bool traces_equal(const RunTrace& a, const RunTrace& b);

struct AlarmDelta {
  int mode = 0;
  long first_crossing_a = -1;  // -1: never crossed
  long first_crossing_b = -1;
};

// Deviation metrics between two traces of equal duration.
struct ComparisonReport {
  double max_estimate_deviation = 0.0;
  double mean_estimate_deviation = 0.0;
  double max_prob_deviation = 0.0;
  double mean_prob_deviation = 0.0;
  std::vector<AlarmDelta> alarm_deltas;

  std::string to_string() const;
};

ComparisonReport compare_traces(const RunTrace& a, const RunTrace& b);

}  // namespace dpffd
