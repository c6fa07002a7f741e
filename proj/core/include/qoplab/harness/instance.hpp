#pragma once

#include <optional>
#include <string>

#include "qoplab/bochner.hpp"
#include "qoplab/geometry.hpp"
#include "qoplab/harness/cache.hpp"
#include "qoplab/harness/config.hpp"
#include "qoplab/prequantum.hpp"
#include "qoplab/spectral.hpp"

namespace qoplab::harness {

ManifoldModel make_model(const InstanceSpec& spec);
Potential make_potential(const ManifoldModel& model, const InstanceSpec& spec);

/// One solved (model, N, p, Phi) instance.
struct Instance {
  InstanceSpec spec;
  ManifoldModel model;
  TauField tau;
  HermitianOperator op;
  SpectralDecomposition decomp;
  /// Empty when the gap was not resolved; gap_error then holds the reason.
  std::optional<GapReport> gap;
  std::string gap_error;
  std::optional<ProjectorKernel> kernel;
  bool cache_hit = false;
  double seconds = 0.0;
};

/// model -> phases -> Bochner operator -> renormalization -> eigenpairs up
/// to mu0 * p (plus one above) -> gap detection -> projector. `cache` may be
/// null.
Instance solve_instance(const InstanceSpec& spec, const EigenCache* cache,
                        const EigenOptions& options = {});

}  // namespace qoplab::harness
