#include "qoplab/harness/instance.hpp"

#include <chrono>

namespace qoplab::harness {

ManifoldModel make_model(const InstanceSpec& spec) {
  if (spec.model == ModelKind::kConformalTorus2) {
    return build_model(spec.model, spec.grid,
                       cosine_conformal_factor(spec.grid, spec.lambda_amplitude.value_or(0.0)),
                       spec.omega);
  }
  return build_model(spec.model, spec.grid);
}

Potential make_potential(const ManifoldModel& model, const InstanceSpec& spec) {
  if (spec.phi_amplitude == 0.0) return Potential::zero(model);
  return Potential::cosine(model, spec.phi_amplitude);
}

Instance solve_instance(const InstanceSpec& spec, const EigenCache* cache,
                        const EigenOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ManifoldModel model = make_model(spec);
  TauField tau = compute_tau(model);
  const ConnectionPhases phases = assemble_phases(model, spec.p);
  HermitianOperator op =
      renormalize(assemble_bochner(model, phases), tau, spec.p, make_potential(model, spec));

  const SolverPath path = options.path != SolverPath::kAuto ? options.path
                          : op.size() <= options.dense_limit ? SolverPath::kDense
                                                              : SolverPath::kIterative;
  const std::string key = spec.hash();
  std::optional<SpectralDecomposition> decomp;
  bool hit = false;
  if (cache) {
    decomp = cache->get(key, model.shape(), model.weights());
    hit = decomp.has_value();
    if (decomp) decomp->path = path;
  }
  if (!decomp) {
    EigenOptions opts = options;
    const auto expected = static_cast<std::size_t>(expected_dim(model, spec.p));
    // Room for the bound states and the whole first excited cluster (n p^n
    // states), so the block edge falls into a well separated band.
    const auto n = static_cast<std::size_t>(model.complex_dim());
    opts.initial_count = (n + 1) * expected + std::max<std::size_t>(8, expected / 4);
    decomp = eigendecompose_below(op, tau.mu0 * spec.p, opts);
    if (cache) cache->put(key, *decomp);
  }

  Instance inst{spec, std::move(model), std::move(tau), std::move(op), std::move(*decomp),
                std::nullopt, {}, std::nullopt, hit, 0.0};
  try {
    inst.gap = detect_bound_cluster(inst.decomp, inst.tau.mu0, spec.p);
    inst.kernel = projector_kernel(inst.decomp, *inst.gap);
  } catch (const Error& e) {
    inst.gap_error = e.what();
  }
  inst.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return inst;
}

}  // namespace qoplab::harness
