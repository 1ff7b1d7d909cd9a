#include "dpffd/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dpffd {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 60.0;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      const double p = 0.05 * (hi - lo);
      lo -= p;
      hi += p;
    }
  }
};

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<PlotSeries>& series, const std::vector<double>& hlines) {
  Range xr, yr;
  for (const PlotSeries& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.include(s.x[i]);
      yr.include(s.y[i]);
    }
  for (double h : hlines) yr.include(h);
  xr.pad();
  yr.pad();

  auto px = [&](double x) {
    return kMargin + (x - xr.lo) / (xr.hi - xr.lo) * (kWidth - 2 * kMargin);
  };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - yr.lo) / (yr.hi - yr.lo) * (kHeight - 2 * kMargin);
  };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
      << "' viewBox='0 0 " << kWidth << " " << kHeight << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";
  svg << "<rect x='" << kMargin << "' y='" << kMargin << "' width='" << kWidth - 2 * kMargin
      << "' height='" << kHeight - 2 * kMargin << "' fill='none' stroke='black'/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double xv = xr.lo + t * (xr.hi - xr.lo) / 4.0;
    const double yv = yr.lo + t * (yr.hi - yr.lo) / 4.0;
    svg << "<text x='" << px(xv) << "' y='" << kHeight - kMargin + 18
        << "' text-anchor='middle' font-size='11'>" << xv << "</text>\n";
    svg << "<text x='" << kMargin - 8 << "' y='" << py(yv) + 4
        << "' text-anchor='end' font-size='11'>" << yv << "</text>\n";
  }

  for (double h : hlines)
    svg << "<line x1='" << px(xr.lo) << "' y1='" << py(h) << "' x2='" << px(xr.hi) << "' y2='"
        << py(h) << "' stroke='red' stroke-dasharray='6 4'/>\n";

  double legend_y = kMargin + 14;
  for (const PlotSeries& s : series) {
    svg << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.2' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) svg << px(s.x[i]) << "," << py(s.y[i]) << " ";
    svg << "'/>\n";
    svg << "<text x='" << kWidth - kMargin - 140 << "' y='" << legend_y
        << "' font-size='12' fill='" << s.color << "'>" << s.label << "</text>\n";
    legend_y += 14;
  }
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << svg.str();
}

std::vector<std::string> write_trace_plots(const RunTrace& trace, const std::string& out_dir,
                                           const std::vector<int>& fault_tanks,
                                           const std::vector<long>& onset_steps) {
  static const char* kColors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
  std::vector<std::string> written;

  std::vector<double> time(trace.steps.size());
  for (std::size_t s = 0; s < trace.steps.size(); ++s) time[s] = trace.steps[s].time_s;

  for (int j = 0; j < trace.mode_count; ++j) {
    std::vector<PlotSeries> series;
    for (int I = 0; I < trace.node_count; ++I) {
      PlotSeries ps;
      ps.label = "node " + std::to_string(I + 1);
      ps.color = kColors[I % 5];
      ps.x = time;
      ps.y.reserve(trace.steps.size());
      for (const TraceStep& s : trace.steps)
        ps.y.push_back(s.fail_probs[static_cast<std::size_t>(I)][static_cast<std::size_t>(j)]);
      series.push_back(std::move(ps));
    }
    if (j < static_cast<int>(onset_steps.size())) {
      PlotSeries occ;
      occ.label = "occurrence";
      occ.color = "#555555";
      occ.x = time;
      occ.y.reserve(time.size());
      for (const TraceStep& s : trace.steps)
        occ.y.push_back(s.k >= onset_steps[static_cast<std::size_t>(j)] ? 1.0 : 0.0);
      series.push_back(std::move(occ));
    }
    const std::string path = out_dir + "/p_fail_mode" + std::to_string(j + 1) + ".svg";
    write_svg_plot(path, "Failure probability, mode " + std::to_string(j + 1), series,
                   {trace.alpha});
    written.push_back(path);
  }

  for (int tank : fault_tanks) {
    std::vector<PlotSeries> series;
    PlotSeries truth;
    truth.label = "truth";
    truth.color = "#000000";
    truth.x = time;
    for (const TraceStep& s : trace.steps)
      truth.y.push_back(s.truth[static_cast<std::size_t>(tank - 1)]);
    series.push_back(std::move(truth));
    for (int I = 0; I < trace.node_count; ++I) {
      PlotSeries ps;
      ps.label = "node " + std::to_string(I + 1) + " estimate";
      ps.color = kColors[I % 5];
      ps.x = time;
      for (const TraceStep& s : trace.steps)
        ps.y.push_back(s.estimates[static_cast<std::size_t>(I)][static_cast<std::size_t>(tank - 1)]);
      series.push_back(std::move(ps));
    }
    const std::string path = out_dir + "/level_tank" + std::to_string(tank) + ".svg";
    write_svg_plot(path, "Tank " + std::to_string(tank) + " level", series);
    written.push_back(path);
  }
  return written;
}

}  // namespace dpffd
