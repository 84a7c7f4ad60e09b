#pragma once

#include "pssc/core.hpp"

#include <optional>

namespace pssc {

/// Alternates the weighted self-representation solve with soft cluster
/// assignment, starting from A = 1, until Phi stops changing, the uncertain
/// count stops decreasing, or t_max iterations have run.
///
/// Labels are those of the clustering step in the last iteration; Phi only
/// steers the next solve. Every cluster must keep at least one certain point;
/// when an iteration violates this the clustering is redone from scratch, and
/// a second consecutive violation ends the run with `rank_guard_tripped` set.
ClusteringResult run(const DataMatrix& X, int clusters, const HyperParams& params);

/// One solve with A = 1 followed by full spectral clustering: the plain
/// sparse subspace clustering result. Same as `run` with t_max = 1.
ClusteringResult run_ssc_baseline(const DataMatrix& X, int clusters, HyperParams params);

/// Loop termination test, checked in order: Phi fixed point (entrywise within
/// 1e-12 and identical certain masks), non-decreasing uncertain count, then
/// t >= t_max. The first two only apply from t = 2 and when `early_stop`.
std::optional<StopReason> stopping_check(const SoftAssignment* prev,
                                         const SoftAssignment& curr, int t, int t_max,
                                         bool early_stop = true);

/// True when every cluster holds at least one certain point.
bool covers_all_clusters(const SoftAssignment& assignment);

}  // namespace pssc
