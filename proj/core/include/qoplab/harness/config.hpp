#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qoplab/error.hpp"
#include "qoplab/geometry.hpp"

namespace qoplab::harness {

/// Invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ExperimentKind { kDim, kGap, kRate, kProfile, kGaussian, kHeat, kInvariants };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment(std::string_view text);

/// "auto" resolves to max(16, 8 * ceil(sqrt(p))).
struct GridPolicy {
  std::optional<int> fixed;
  int resolve(int p) const;
};

/// Physics of one solved instance; everything the eigendecomposition
/// depends on.
struct InstanceSpec {
  ModelKind model = ModelKind::kFlatTorus2;
  SymplecticForm omega = SymplecticForm::kCoordinate;
  int grid = 16;
  int p = 1;
  double phi_amplitude = 0.0;              // Phi = a cos(2 pi x1); 0 is "zero"
  std::optional<double> lambda_amplitude;  // lambda = 1 + a cos(2 pi x1); conformal only

  /// Sorted key=value lines; the hash input.
  std::string canonical() const;
  /// 16 hex digits of FNV-1a over canonical().
  std::string hash() const;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kDim;
  ModelKind model = ModelKind::kFlatTorus2;
  SymplecticForm omega = SymplecticForm::kCoordinate;
  GridPolicy grid;
  std::vector<int> p;
  double phi_amplitude = 0.0;
  std::optional<double> lambda_amplitude;
  std::filesystem::path out = "qoplab-out";
  std::optional<std::filesystem::path> cache;
  std::map<std::string, double> tolerances;
  /// Near-diagonal comparison radius in units of 1/sqrt(p).
  double radius_scale = 1.5;
  int jobs = 0;  // 0: hardware concurrency
  bool svg = false;

  /// Throws ConfigError.
  void validate() const;

  double tolerance(const std::string& name, double fallback) const;
  InstanceSpec instance(int p) const;
  /// Hash over the physics fields of the whole run (p list included).
  std::string hash() const;
};

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// skipped. Throws ConfigError on malformed lines.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies one setting; keys match the CLI flag names (`p`, `model`, `grid`,
/// `phi`, `lambda`, `omega`, `out`, `cache`, `no-cache`, `jobs`, `svg`,
/// `experiment`, `radius`, `tol.<name>`).
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Builds a config from file settings overlaid by flag settings, then
/// validates it.
ExperimentConfig make_config(const std::map<std::string, std::string>& file_settings,
                             const std::map<std::string, std::string>& flag_settings);

std::uint64_t fnv1a(std::string_view text);

}  // namespace qoplab::harness
