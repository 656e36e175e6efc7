#include "contilab/harness/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace contilab {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::string& experiment, std::uint64_t seed,
                       const ResultTable& table) {
  out << "# experiment: " << experiment << "\n";
  out << "# seed: " << seed << "\n";
  out << "# version: contilab " << contilab_version() << "\n";
  if (table.failed_cells > 0) out << "# failed cells: " << table.failed_cells << " of " << table.cells << "\n";
  for (const auto& e : table.errors) out << "# error: " << e << "\n";

  for (const auto& c : table.columns) out << csv_field(c) << ",";
  out << "metric,mean,std,ci95,trials\n";
  for (const auto& row : table.rows) {
    for (const auto& c : row.coords) out << csv_field(c) << ",";
    out << csv_field(row.stats.metric) << "," << format_value(row.stats.mean) << ","
        << format_value(row.stats.std) << "," << format_value(row.stats.ci95) << "," << row.stats.trials << "\n";
  }
}

void write_resolved_config(std::ostream& out, const std::string& experiment, const ExperimentConfig& resolved) {
  out << "# contilab " << contilab_version() << "\n";
  out << "experiment=" << experiment << "\n";
  out << resolved.canonical();
}

void write_svg_plot(std::ostream& out, const ResultTable& table, const PlotSpec& spec) {
  struct Point {
    double x, y, err;
  };
  std::map<std::string, std::vector<Point>> lines;
  std::vector<std::string> order;

  const std::size_t xi = table.column(spec.x);
  const std::size_t si = spec.series.empty() ? 0 : table.column(spec.series);
  for (const auto& metric : spec.metrics) {
    for (const ResultRow* row : table.select(metric, spec.where)) {
      const std::string& xs = row->coords[xi];
      if (xs.empty() || !std::isfinite(row->stats.mean)) continue;
      double x = 0.0;
      try {
        x = std::stod(xs);
      } catch (const std::exception&) {
        continue;
      }
      if (spec.log_x) {
        if (x <= 0.0) continue;
        x = std::log10(x);
      }
      std::string label = metric;
      if (!spec.series.empty()) label += " " + spec.series + "=" + row->coords[si];
      auto [it, inserted] = lines.try_emplace(label);
      if (inserted) order.push_back(label);
      it->second.push_back({x, row->stats.mean, row->stats.ci95});
    }
  }

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (auto& [label, pts] : lines) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    for (const auto& p : pts) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y - p.err);
      y1 = std::max(y1, p.y + p.err);
    }
  }
  if (!(x0 <= x1)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double W = 760, H = 480, left = 80, right = 230, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return std::string(buf);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-size=\"15\">" << xml_escape(spec.title) << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = y0 + (y1 - y0) * i / 5.0;
    const std::string xl = spec.log_x ? num(std::pow(10.0, xv)) : num(xv);
    out << "<line x1=\"" << sx(xv) << "\" y1=\"" << top + ph << "\" x2=\"" << sx(xv) << "\" y2=\"" << top + ph + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">" << xl << "</text>\n";
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << left << "\" y2=\"" << sy(yv)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
      << xml_escape(spec.x + (spec.log_x ? " (log scale)" : "")) << "</text>\n";
  out << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << xml_escape(spec.y_label) << "</text>\n";

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::size_t k = 0;
  for (const auto& label : order) {
    const char* color = palette[k % 10];
    const auto& pts = lines[label];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : pts) out << sx(p.x) << "," << sy(p.y) << " ";
    out << "\"/>\n";
    for (const auto& p : pts) {
      if (p.err > 0) {
        out << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.y - p.err) << "\" x2=\"" << sx(p.x) << "\" y2=\""
            << sy(p.y + p.err) << "\" stroke=\"" << color << "\"/>\n";
      }
      out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    const double ly = top + 10 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 35 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\">" << xml_escape(label) << "</text>\n";
    ++k;
  }
  out << "</svg>\n";
}

}  // namespace contilab
