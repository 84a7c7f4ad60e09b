#pragma once

#include "pssc/core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pssc {

/// C subspaces of dimension d in R^n. Every subspace after the first shares
/// the first s basis vectors of the first subspace; the remaining d - s
/// directions are random and orthogonal to the shared part.
struct SubspaceModel {
  int clusters = 0;
  int ambient_dim = 0;
  int dim = 0;
  int intersection_dim = 0;
  int points_per_subspace = 0;
  std::vector<Matrix> bases;  // each ambient_dim x dim, orthonormal columns
};

SubspaceModel generate_subspaces(int clusters, int ambient_dim, int dim, int intersection_dim,
                                 int points_per_subspace, std::uint64_t seed);

/// Intersection dimension for a ratio s/d, rounded to the nearest integer.
int intersection_dim_for(double ratio, int dim);

struct SampledData {
  Matrix X;      // ambient_dim x (clusters * points_per_subspace)
  Labels truth;  // subspace index of each column
};

/// Uniform samples from the unit sphere of each subspace, in subspace order.
SampledData sample_points(const SubspaceModel& model, std::uint64_t seed);

enum class Method { pssc, ssc };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

struct BenchmarkGrid {
  std::vector<int> clusters{2};
  std::vector<double> ratios{0.5};
  std::vector<Method> methods{Method::pssc, Method::ssc};
  int trials = 20;
  std::uint64_t base_seed = 0;
  int ambient_dim = 200;
  int dim = 10;
  int points_per_subspace = 100;
  // Also run the loop with the early-stop clauses disabled for this many
  // iterations and record the uncertain-count trace. 0 disables.
  int kappa_decay_iterations = 0;
  // Trials evaluated concurrently.
  int workers = 1;
};

struct TrialRecord {
  int clusters = 0;
  double ratio = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  Method method = Method::pssc;
  bool failed = false;
  std::string failure;
  std::uint64_t data_hash = 0;
  int points = 0;
  double error = 0.0;
  double ssr = 0.0;
  int iterations = 0;
  StopReason stop_reason = StopReason::t_max_reached;
  std::vector<int> kappa_trace;
  std::vector<double> error_trace;
};

struct KappaDecayRecord {
  int clusters = 0;
  double ratio = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  int points = 0;
  std::vector<int> kappa_trace;
  std::vector<double> error_trace;
};

struct CellSummary {
  int clusters = 0;
  double ratio = 0.0;
  Method method = Method::pssc;
  int trials_ok = 0;
  int trials_failed = 0;
  double mean_error = 0.0;
  double median_error = 0.0;
  double mean_ssr = 0.0;
  double median_ssr = 0.0;
  double mean_iterations = 0.0;
  // Per-iteration averages; shorter runs carry their final value forward.
  std::vector<double> mean_error_trace;
  std::vector<double> mean_kappa_fraction_trace;
};

struct KappaDecaySummary {
  int clusters = 0;
  double ratio = 0.0;
  int trials_ok = 0;
  int trials_failed = 0;
  std::vector<double> mean_kappa_fraction_trace;
  std::vector<double> mean_error_trace;
};

struct BenchmarkTable {
  BenchmarkGrid grid;
  HyperParams params;
  std::vector<TrialRecord> trials;
  std::vector<KappaDecayRecord> decay;
  std::vector<CellSummary> cells;
  std::vector<KappaDecaySummary> decay_cells;
};

/// Seed of one trial as a pure function of (base seed, C, ratio, trial).
std::uint64_t trial_seed(std::uint64_t base_seed, int clusters, double ratio, int trial);

/// FNV-1a over the raw bytes of a matrix.
std::uint64_t hash_matrix(const Matrix& m);

BenchmarkTable run_benchmark(const BenchmarkGrid& grid, const HyperParams& params);

/// Recomputes every aggregate from the raw trial records.
void summarize(BenchmarkTable& table);

/// Mean of the per-trial traces, each padded with its last value to the
/// longest trace length.
std::vector<double> mean_padded_trace(const std::vector<std::vector<double>>& traces);

double median(std::vector<double> values);

}  // namespace pssc
