#include "apg/harness/plotdata.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "apg/harness/runner.hpp"
#include "apg/io/trace_csv.hpp"

namespace apg {

namespace fs = std::filesystem;

const std::vector<std::string>& plot_quantities() {
  static const std::vector<std::string> q = {"h_gap",  "sigma",      "step_norm",
                                             "x_norm", "lyapunov_E", "n_times_gap"};
  return q;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::optional<double> min_h_from_report(const fs::path& trace) {
  fs::path report = trace;
  report.replace_extension(".json");
  std::ifstream in(report);
  if (!in) return std::nullopt;
  try {
    nlohmann::json j;
    in >> j;
    if (j.contains("min_h") && j["min_h"].is_number()) return j["min_h"].get<double>();
  } catch (const nlohmann::json::exception&) {
  }
  return std::nullopt;
}

std::optional<double> quantity_of(const TraceRow& r, const std::string& q, double min_h) {
  if (q == "h_gap") return r.h_xn - min_h;
  if (q == "n_times_gap") return static_cast<double>(r.n) * (r.h_xn - min_h);
  if (q == "sigma") return r.sigma_n;
  if (q == "step_norm") return r.step_norm;
  if (q == "x_norm") return r.x_norm;
  if (q == "lyapunov_E") return r.lyapunov_E;
  return std::nullopt;
}

}  // namespace

std::string render_svg(const std::vector<Series>& series, const std::string& title,
                       const std::string& x_label, const std::string& y_label) {
  const double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series& s : series)
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  if (!(x1 >= x0)) x0 = 0, x1 = 1;
  if (!(y1 >= y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape_xml(title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left << "\" y=\"" << height - bottom + 18 << "\" font-size=\"11\">"
     << format_double(x0) << "</text>\n";
  os << "<text x=\"" << left + pw << "\" y=\"" << height - bottom + 18
     << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(x1) << "</text>\n";
  os << "<text x=\"" << left - 4 << "\" y=\"" << top + ph << "\" font-size=\"11\" text-anchor=\"end\">"
     << format_double(y0) << "</text>\n";
  os << "<text x=\"" << left - 4 << "\" y=\"" << top + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
     << format_double(y1) << "</text>\n";
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-size=\"12\">" << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" font-size=\"12\" text-anchor=\"middle\" "
     << "transform=\"rotate(-90 16 " << top + ph / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[i].points) os << px(x) << ',' << py(y) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << left + 8 << "\" y=\"" << top + 16 + 14 * i << "\" font-size=\"11\" fill=\""
       << color << "\">" << escape_xml(series[i].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

int cmd_plotdata(const std::vector<std::string>& traces, const PlotOptions& o, std::ostream& out,
                 std::ostream& err) {
  const auto& known = plot_quantities();
  if (std::find(known.begin(), known.end(), o.quantity) == known.end()) {
    err << "unknown quantity '" << o.quantity << "'\n";
    return kExitConfig;
  }
  if (traces.empty()) {
    err << "no trace files given\n";
    return kExitConfig;
  }
  const bool needs_min = o.quantity == "h_gap" || o.quantity == "n_times_gap";
  const fs::path out_dir = o.out_dir.empty() ? fs::path(traces.front()).parent_path() : fs::path(o.out_dir);

  std::vector<Series> series;
  try {
    if (!out_dir.empty()) fs::create_directories(out_dir);
    for (const std::string& path : traces) {
      const std::vector<TraceRow> rows = read_trace_csv(path);
      double min_h = 0;
      if (needs_min) {
        std::optional<double> m = o.min_h ? o.min_h : min_h_from_report(path);
        if (!m) {
          err << path << ": no min_h (pass --min-h or keep the report JSON next to the trace)\n";
          return kExitConfig;
        }
        min_h = *m;
      }
      Series s;
      s.label = fs::path(path).stem().string();
      const fs::path dat = out_dir / (s.label + "." + o.quantity + ".dat");
      std::ofstream f(dat, std::ios::binary);
      if (!f) throw ConfigError("cannot write " + dat.string());
      f << (o.loglog ? "# log10(n) log10(" : "# n ") << o.quantity << (o.loglog ? ")\n" : "\n");
      for (const TraceRow& r : rows) {
        const std::optional<double> v = quantity_of(r, o.quantity, min_h);
        if (!v || !std::isfinite(*v)) continue;
        double x = static_cast<double>(r.n);
        double y = *v;
        if (o.loglog) {
          if (!(y > 0)) continue;
          x = std::log10(x);
          y = std::log10(y);
        }
        f << format_double(x) << ' ' << format_double(y) << '\n';
        s.points.emplace_back(x, y);
      }
      out << dat.string() << '\n';
      series.push_back(std::move(s));
    }
    const fs::path svg = out_dir / (o.quantity + ".svg");
    std::ofstream f(svg, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + svg.string());
    f << render_svg(series, o.quantity, o.loglog ? "log10 n" : "n",
                    o.loglog ? "log10 " + o.quantity : o.quantity);
    out << svg.string() << '\n';
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace apg
