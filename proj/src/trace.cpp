#include "dpffd/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dpffd {

using nlohmann::json;

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string trace_to_csv(const RunTrace& trace) {
  std::string out = "k,time_s";
  for (int t = 1; t <= trace.state_dim; ++t) out += ",truth_x" + std::to_string(t);
  for (int I = 1; I <= trace.node_count; ++I)
    for (int t = 1; t <= trace.state_dim; ++t)
      out += ",node" + std::to_string(I) + "_est_x" + std::to_string(t);
  for (int I = 1; I <= trace.node_count; ++I)
    for (int j = 1; j <= trace.mode_count; ++j)
      out += ",node" + std::to_string(I) + "_p_fail_mode" + std::to_string(j);
  for (int I = 1; I <= trace.node_count; ++I)
    for (int j = 1; j <= trace.mode_count; ++j)
      out += ",node" + std::to_string(I) + "_alarm_mode" + std::to_string(j);
  out += ",consensus_iterations\n";

  for (const TraceStep& s : trace.steps) {
    out += std::to_string(s.k);
    out += ',';
    append_number(out, s.time_s);
    for (double v : s.truth) {
      out += ',';
      append_number(out, v);
    }
    for (const Vec& est : s.estimates)
      for (double v : est) {
        out += ',';
        append_number(out, v);
      }
    for (const Vec& p : s.fail_probs)
      for (double v : p) {
        out += ',';
        append_number(out, v);
      }
    for (const auto& node_alarms : s.alarm)
      for (int a : node_alarms) out += ',' + std::to_string(a);
    out += ',' + std::to_string(s.consensus_iterations) + '\n';
  }
  return out;
}

std::string trace_to_json_text(const RunTrace& trace) {
  json j;
  j["node_count"] = trace.node_count;
  j["mode_count"] = trace.mode_count;
  j["state_dim"] = trace.state_dim;
  j["alpha"] = trace.alpha;
  j["Ts"] = trace.Ts;
  j["steps"] = json::array();
  for (const TraceStep& s : trace.steps)
    j["steps"].push_back({
        {"k", s.k},
        {"time_s", s.time_s},
        {"truth", s.truth},
        {"estimates", s.estimates},
        {"fail_probs", s.fail_probs},
        {"alarm", s.alarm},
        {"consensus_iterations", s.consensus_iterations},
    });
  j["events"] = json::array();
  for (const AlarmEvent& e : trace.events)
    j["events"].push_back(
        {{"mode", e.mode}, {"step", e.step}, {"probability", e.probability}, {"node", e.node}});
  return j.dump() + "\n";
}

RunTrace trace_from_json_text(const std::string& text) {
  json j = json::parse(text);
  RunTrace trace;
  trace.node_count = j.at("node_count").get<int>();
  trace.mode_count = j.at("mode_count").get<int>();
  trace.state_dim = j.at("state_dim").get<int>();
  trace.alpha = j.at("alpha").get<double>();
  trace.Ts = j.at("Ts").get<double>();
  for (const auto& sj : j.at("steps")) {
    TraceStep s;
    s.k = sj.at("k").get<long>();
    s.time_s = sj.at("time_s").get<double>();
    s.truth = sj.at("truth").get<Vec>();
    s.estimates = sj.at("estimates").get<std::vector<Vec>>();
    s.fail_probs = sj.at("fail_probs").get<std::vector<Vec>>();
    s.alarm = sj.at("alarm").get<std::vector<std::vector<int>>>();
    s.consensus_iterations = sj.at("consensus_iterations").get<int>();
    trace.steps.push_back(std::move(s));
  }
  for (const auto& ej : j.at("events")) {
    AlarmEvent e;
    e.mode = ej.at("mode").get<int>();
    e.step = ej.at("step").get<long>();
    e.probability = ej.at("probability").get<double>();
    e.node = ej.at("node").get<int>();
    trace.events.push_back(e);
  }
  return trace;
}

void save_trace_csv(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << trace_to_csv(trace);
}

void save_trace_json(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << trace_to_json_text(trace);
}

RunTrace load_trace_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return trace_from_json_text(buf.str());
}

bool traces_equal(const RunTrace& a, const RunTrace& b) {
  return trace_to_json_text(a) == trace_to_json_text(b);
}

ComparisonReport compare_traces(const RunTrace& a, const RunTrace& b) {
  if (a.steps.size() != b.steps.size())
    throw std::invalid_argument("compare_traces: traces have different durations");
  ComparisonReport report;
  double est_sum = 0.0, prob_sum = 0.0;
  std::size_t est_n = 0, prob_n = 0;
  for (std::size_t s = 0; s < a.steps.size(); ++s) {
    const TraceStep& sa = a.steps[s];
    const TraceStep& sb = b.steps[s];
    const std::size_t nodes = std::min(sa.estimates.size(), sb.estimates.size());
    for (std::size_t I = 0; I < nodes; ++I)
      for (std::size_t d = 0; d < sa.estimates[I].size(); ++d) {
        const double dev = std::abs(sa.estimates[I][d] - sb.estimates[I][d]);
        report.max_estimate_deviation = std::max(report.max_estimate_deviation, dev);
        est_sum += dev;
        ++est_n;
      }
    const std::size_t pnodes = std::min(sa.fail_probs.size(), sb.fail_probs.size());
    for (std::size_t I = 0; I < pnodes; ++I)
      for (std::size_t j = 0; j < sa.fail_probs[I].size(); ++j) {
        const double dev = std::abs(sa.fail_probs[I][j] - sb.fail_probs[I][j]);
        report.max_prob_deviation = std::max(report.max_prob_deviation, dev);
        prob_sum += dev;
        ++prob_n;
      }
  }
  if (est_n) report.mean_estimate_deviation = est_sum / static_cast<double>(est_n);
  if (prob_n) report.mean_prob_deviation = prob_sum / static_cast<double>(prob_n);

  auto first_crossing = [](const RunTrace& t, int mode) -> long {
    for (const AlarmEvent& e : t.events)
      if (e.mode == mode) return e.step;
    return -1;
  };
  for (int j = 0; j < std::min(a.mode_count, b.mode_count); ++j)
    report.alarm_deltas.push_back(AlarmDelta{j, first_crossing(a, j), first_crossing(b, j)});
  return report;
}

std::string ComparisonReport::to_string() const {
  std::ostringstream out;
  out << "estimate deviation: max " << max_estimate_deviation << ", mean "
      << mean_estimate_deviation << "\n";
  out << "failure-probability deviation: max " << max_prob_deviation << ", mean "
      << mean_prob_deviation << "\n";
  for (const AlarmDelta& d : alarm_deltas) {
    out << "mode " << (d.mode + 1) << " first alarm: ";
    if (d.first_crossing_a < 0)
      out << "never";
    else
      out << "step " << d.first_crossing_a;
    out << " vs ";
    if (d.first_crossing_b < 0)
      out << "never";
    else
      out << "step " << d.first_crossing_b;
    out << "\n";
  }
  return out.str();
}

}  // namespace dpffd
