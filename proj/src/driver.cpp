#include "pssc/driver.hpp"

#include "pssc/association.hpp"
#include "pssc/errors.hpp"
#include "pssc/rng.hpp"
#include "pssc/solver.hpp"
#include "pssc/spectral.hpp"

#include <algorithm>
#include <string>

namespace pssc {

namespace {

constexpr double kPhiTolerance = 1e-12;

SoftAssignment assign(const Matrix& similarity, const Labels& labels, int clusters) {
  const auto probs = compute_probabilities(similarity, labels, clusters);
  const double omega = compute_omega(probs.P);
  return build_soft_assignment(probs.P, omega);
}

}  // namespace

bool covers_all_clusters(const SoftAssignment& assignment) {
  std::vector<bool> seen(static_cast<std::size_t>(assignment.num_clusters()), false);
  for (Index i = 0; i < assignment.num_points(); ++i) {
    if (!assignment.certain[static_cast<std::size_t>(i)]) continue;
    Index k = 0;
    assignment.phi.row(i).maxCoeff(&k);
    seen[static_cast<std::size_t>(k)] = true;
  }
  return std::find(seen.begin(), seen.end(), false) == seen.end();
}

std::optional<StopReason> stopping_check(const SoftAssignment* prev,
                                         const SoftAssignment& curr, int t, int t_max,
                                         bool early_stop) {
  if (early_stop && prev != nullptr && t >= 2) {
    const bool same_mask = prev->certain == curr.certain;
    if (same_mask && prev->phi.rows() == curr.phi.rows() &&
        prev->phi.cols() == curr.phi.cols() &&
        (prev->phi - curr.phi).cwiseAbs().maxCoeff() <= kPhiTolerance) {
      return StopReason::phi_fixed_point;
    }
    if (curr.kappa >= prev->kappa) return StopReason::kappa_nondecreasing;
  }
  if (t >= t_max) return StopReason::t_max_reached;
  return std::nullopt;
}

ClusteringResult run(const DataMatrix& X, int clusters, const HyperParams& params) {
  params.validate();
  const Index N = X.num_points();
  if (clusters < 2 || 2 * static_cast<Index>(clusters) > N) {
    throw DimensionError("cluster count must satisfy 2 <= C <= N / 2");
  }

  const double lambda0 = compute_lambda0(X, params.alpha);
  const double lambda1 = lambda0 / params.lambda_ratio;

  ClusteringResult result;
  AssociationMatrix A = AssociationMatrix::all_ones(N);
  std::optional<SoftAssignment> prev;
  Matrix Z;

  for (int t = 1;; ++t) {
    auto solved = solve_self_representation(X, A, lambda0, lambda1, params,
                                             t > 1 ? &Z : nullptr);
    Z = std::move(solved.state.Z);
    const Matrix& similarity = solved.state.Zbar;

    IterationRecord record;
    record.t = t;
    record.objective = objective_value(X.values(), Z, A.A, lambda0, lambda1);
    record.unconverged_columns = solved.unconverged_columns;
    if (solved.unconverged_columns > 0) {
      result.warnings.push_back("t=" + std::to_string(t) + ": " +
                                std::to_string(solved.unconverged_columns) +
                                " columns hit the sweep limit");
    }

    const std::uint64_t seed = derive_seed(params.seed, {static_cast<std::uint64_t>(t)});
    Labels cluster_labels;
    const bool incremental = t > 1 && params.spectral_mode == SpectralMode::incremental;
    if (incremental) {
      auto inc = cluster_incremental(similarity, result.labels, prev->uncertain_points(),
                                     clusters, seed, params.kmeans_restarts, params.workers);
      cluster_labels = std::move(inc.labels);
      record.incremental = !inc.fallback_to_full;
      record.fallback_to_full = inc.fallback_to_full;
    } else {
      cluster_labels = cluster_full(similarity, clusters, seed, params.kmeans_restarts,
                                    params.workers);
    }

    SoftAssignment curr = assign(similarity, cluster_labels, clusters);
    bool guard_tripped = false;
    if (!covers_all_clusters(curr)) {
      // Redo the clustering from scratch with a fresh stream.
      cluster_labels = cluster_full(similarity, clusters, derive_seed(seed, {1}),
                                    params.kmeans_restarts, params.workers);
      curr = assign(similarity, cluster_labels, clusters);
      record.incremental = false;
      record.fallback_to_full = true;
      if (!covers_all_clusters(curr)) {
        guard_tripped = true;
        result.rank_guard_tripped = true;
        result.warnings.push_back("t=" + std::to_string(t) +
                                  ": a cluster has no certain point after re-clustering");
      }
    }

    record.kappa = curr.kappa;
    record.omega = curr.omega;
    record.labels = std::move(cluster_labels);
    result.labels = record.labels;
    result.history.push_back(record);
    result.iterations = t;

    auto reason = stopping_check(prev ? &*prev : nullptr, curr, t, params.t_max,
                                 params.early_stop);
    if (guard_tripped && !reason) reason = StopReason::t_max_reached;
    if (reason) {
      result.stop_reason = *reason;
      break;
    }
    A = build_association(curr);
    prev = std::move(curr);
  }

  result.Z = std::move(Z);
  return result;
}

ClusteringResult run_ssc_baseline(const DataMatrix& X, int clusters, HyperParams params) {
  params.t_max = 1;
  return run(X, clusters, params);
}

}  // namespace pssc
