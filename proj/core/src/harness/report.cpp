#include "qoplab/harness/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace qoplab::harness {

bool RunReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("cannot write " + path.string());
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  auto out = open_output(path);
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  finish(out, path);
}

void write_report_json(const RunReport& report, const std::filesystem::path& path) {
  using nlohmann::json;
  json j;
  j["experiment"] = report.experiment;
  j["config_hash"] = report.config_hash;
  j["timestamp"] = utc_timestamp();
  j["wall_seconds"] = report.wall_seconds;
  j["passed"] = report.passed();
  j["records"] = json::array();
  for (const auto& r : report.records) {
    json rec;
    rec["p"] = r.p;
    rec["N"] = r.grid;
    rec["solver"] = r.solver;
    rec["cache_hit"] = r.cache_hit;
    rec["expected_dim"] = r.expected_dim;
    rec["observed_dim"] = r.observed_dim ? json(*r.observed_dim) : json(nullptr);
    rec["cluster_width"] = r.cluster_width ? number_or_null(*r.cluster_width) : json(nullptr);
    rec["next_eigenvalue"] = r.next_eigenvalue ? number_or_null(*r.next_eigenvalue) : json(nullptr);
    if (!r.error.empty()) rec["error"] = r.error;
    json metrics = json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = number_or_null(v);
    rec["metrics"] = metrics;
    rec["seconds"] = r.seconds;
    j["records"].push_back(rec);
  }
  j["fits"] = json::array();
  for (const auto& f : report.fits) {
    j["fits"].push_back({{"name", f.name},
                         {"slope", number_or_null(f.fit.slope)},
                         {"intercept", number_or_null(f.fit.intercept)},
                         {"r2", number_or_null(f.fit.r2)},
                         {"points", f.points}});
  }
  j["assertions"] = json::array();
  for (const auto& a : report.assertions) {
    j["assertions"].push_back(
        {{"name", a.name}, {"value", number_or_null(a.value)}, {"relation", a.relation}, {"pass", a.pass}});
  }
  auto out = open_output(path);
  out << j.dump(2) << "\n";
  finish(out, path);
}

void write_svg_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series,
                    const std::filesystem::path& path) {
  constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  const auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if ((spec.log_x && !(x > 0)) || (spec.log_y && !(y > 0)) || !std::isfinite(x) || !std::isfinite(y)) {
        continue;
      }
      x0 = std::min(x0, tx(x));
      x1 = std::max(x1, tx(x));
      y0 = std::min(y0, ty(y));
      y1 = std::max(y1, ty(y));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const auto px = [&](double v) { return kLeft + (tx(v) - x0) / (x1 - x0) * (kWidth - kLeft - kRight); };
  const auto py = [&](double v) {
    return kHeight - kBottom - (ty(v) - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(spec.title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
      << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"#444\"/>\n";
  const auto tick_label = [](double v, bool log) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", log ? std::pow(10.0, v) : v);
    return std::string(buf);
  };
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
    const double sx = kLeft + (kWidth - kLeft - kRight) * i / 4.0;
    const double sy = kHeight - kBottom - (kHeight - kTop - kBottom) * i / 4.0;
    svg << "<text x=\"" << sx << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
        << tick_label(fx, spec.log_x) << "</text>\n";
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\">"
        << tick_label(fy, spec.log_y) << "</text>\n";
  }
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << escape_xml(spec.x_label) << "</text>\n"
      << "<text transform=\"translate(16," << kHeight / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape_xml(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    std::ostringstream poly;
    for (const auto& [x, y] : series[s].points) {
      if ((spec.log_x && !(x > 0)) || (spec.log_y && !(y > 0)) || !std::isfinite(x) || !std::isfinite(y)) {
        continue;
      }
      poly << px(x) << "," << py(y) << " ";
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << poly.str() << "\"/>\n";
    svg << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << kTop + 16 + 14 * s
        << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape_xml(series[s].name) << "</text>\n";
  }
  svg << "</svg>\n";
  auto out = open_output(path);
  out << svg.str();
  finish(out, path);
}

}  // namespace qoplab::harness
