#pragma once

#include <ostream>

#include "qoplab/harness/config.hpp"
#include "qoplab/harness/report.hpp"
#include "qoplab/spectral.hpp"

namespace qoplab::harness {

/// Header of the CSV written by each experiment.
std::vector<std::string> csv_header(ExperimentKind kind);

struct RunOutput {
  RunReport report;
  CsvTable table;
};

/// Runs the experiment over the p list (p values in parallel) without
/// touching the output directory. `log` receives progress lines; may be null.
RunOutput execute_experiment(const ExperimentConfig& config, std::ostream* log = nullptr,
                             const EigenOptions& options = {});

/// execute_experiment, then writes `<out>/<experiment>.csv`,
/// `<out>/<experiment>.json` and, if enabled, `<out>/<experiment>.svg`.
/// Throws IoError when the output directory is not writable.
RunReport run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr,
                         const EigenOptions& options = {});

}  // namespace qoplab::harness
