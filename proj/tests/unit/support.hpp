#pragma once

#include <cmath>
#include <numbers>

#include "qoplab/harness/instance.hpp"

namespace testing {

inline constexpr double kPi = std::numbers::pi;

// Tests move to the iterative solver much earlier than the library default;
// a single-core dense solve at N = 64 costs over a minute.
inline qoplab::EigenOptions fast_options() {
  qoplab::EigenOptions o;
  o.dense_limit = 1024;
  return o;
}

// Flat torus instance with a resolved gap, no cache.
inline qoplab::harness::Instance flat_instance(int p, int grid,
                                               qoplab::ModelKind kind = qoplab::ModelKind::kFlatTorus2,
                                               double phi = 0.0) {
  qoplab::harness::InstanceSpec spec;
  spec.model = kind;
  spec.grid = grid;
  spec.p = p;
  spec.phi_amplitude = phi;
  return qoplab::harness::solve_instance(spec, nullptr, fast_options());
}

inline qoplab::harness::Instance conformal_instance(int p, int grid, double amplitude,
                                                    qoplab::SymplecticForm form =
                                                        qoplab::SymplecticForm::kCoordinate) {
  qoplab::harness::InstanceSpec spec;
  spec.model = qoplab::ModelKind::kConformalTorus2;
  spec.omega = form;
  spec.grid = grid;
  spec.p = p;
  spec.lambda_amplitude = amplitude;
  return qoplab::harness::solve_instance(spec, nullptr, fast_options());
}

}  // namespace testing
