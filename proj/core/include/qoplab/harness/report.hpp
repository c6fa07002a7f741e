#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qoplab/error.hpp"
#include "qoplab/numerics.hpp"

namespace qoplab::harness {

/// Output could not be written; the CLI maps it to exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

struct Assertion {
  std::string name;
  double value = 0.0;
  std::string relation;  // e.g. "<=", ">=", "in [-1.15, -0.85]"
  bool pass = false;
};

/// Per-p summary; numeric metrics are keyed by name (rate errors per m,
/// multiplier digests, timings of individual checks).
struct PRecord {
  int p = 0;
  int grid = 0;
  std::string solver;
  bool cache_hit = false;
  long long expected_dim = 0;
  std::optional<long long> observed_dim;
  std::optional<double> cluster_width;
  std::optional<double> next_eigenvalue;
  std::string error;
  std::map<std::string, double> metrics;
  double seconds = 0.0;
};

struct FitRecord {
  std::string name;
  LinearFit fit;
  std::size_t points = 0;
};

struct RunReport {
  std::string experiment;
  std::string config_hash;
  std::vector<PRecord> records;
  std::vector<FitRecord> fits;
  std::vector<Assertion> assertions;
  double wall_seconds = 0.0;

  bool passed() const;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Shortest round-trip decimal form ("%.17g"), "nan" for NaN.
std::string csv_number(double v);

void write_csv(const CsvTable& table, const std::filesystem::path& path);
/// JSON with a timestamp field; everything else is deterministic.
void write_report_json(const RunReport& report, const std::filesystem::path& path);

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Standalone SVG scatter/line chart.
void write_svg_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series,
                    const std::filesystem::path& path);

}  // namespace qoplab::harness
