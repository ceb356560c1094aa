#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace apg {

struct PlotOptions {
  std::string quantity;
  bool loglog{false};
  /// Needed by h_gap and n_times_gap; otherwise read from the sibling report JSON.
  std::optional<double> min_h;
  /// Output directory; defaults to the directory of the first trace.
  std::string out_dir;
};

/// Quantities accepted by `apg plotdata`.
const std::vector<std::string>& plot_quantities();

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Minimal static SVG line chart with one polyline per series.
std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label);

/// `apg plotdata`: one two-column .dat per trace plus an overlay <quantity>.svg.
/// Returns 2 for an unknown quantity, a missing trace or a missing min_h.
int cmd_plotdata(const std::vector<std::string>& traces, const PlotOptions& options,
                 std::ostream& out, std::ostream& err);

}  // namespace apg
