#pragma once

#include <string>
#include <vector>

#include "dpffd/trace.hpp"

namespace dpffd {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal static line plot writer; no display dependencies.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series,
                    const std::vector<double>& hlines = {});

// One image per fault mode (per-node probabilities, threshold, onset) and one
// per faulted tank (truth vs per-node estimates). Returns the written paths.
std::vector<std::string> write_trace_plots(const RunTrace& trace, const std::string& out_dir,
                                           const std::vector<int>& fault_tanks,
                                           const std::vector<long>& onset_steps);

}  // namespace dpffd
