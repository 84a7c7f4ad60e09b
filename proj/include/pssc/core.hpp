#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pssc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using Labels = std::vector<int>;

/// n x N dataset, one point per column. Immutable once built; every entry is
/// finite and N >= 2.
class DataMatrix {
 public:
  explicit DataMatrix(Matrix values);

  const Matrix& values() const noexcept { return values_; }
  const Vector& column_norms() const noexcept { return column_norms_; }
  Index ambient_dim() const noexcept { return values_.rows(); }
  Index num_points() const noexcept { return values_.cols(); }
  auto point(Index i) const { return values_.col(i); }

 private:
  Matrix values_;
  Vector column_norms_;
};

/// Rejects zero columns and N < 2C, then l2-normalizes every column when
/// `normalize` is set. Idempotent.
DataMatrix validate_dataset(const DataMatrix& X, int clusters, bool normalize = true);

/// Self-representation Z (N x N, zero diagonal), residual E = X - XZ and the
/// similarity Zbar = (|Z| + |Z^T|) / 2.
struct CoefficientState {
  Matrix Z;
  Matrix E;
  Matrix Zbar;
};

/// (|Z| + |Z^T|) / 2 with the diagonal forced to zero.
Matrix similarity_from_coefficients(const Matrix& Z);

/// Soft cluster assignment. Certain rows of `phi` are one-hot, uncertain rows
/// copy the matching row of `P`.
struct SoftAssignment {
  Matrix phi;
  std::vector<bool> certain;
  Matrix P;
  double omega = 0.0;
  int kappa = 0;

  Index num_points() const noexcept { return phi.rows(); }
  int num_clusters() const noexcept { return static_cast<int>(phi.cols()); }
  std::vector<Index> uncertain_points() const;
};

/// A = Phi Phi^T.
struct AssociationMatrix {
  Matrix A;

  /// The all-ones matrix used for the initial pass; all penalty weights vanish.
  static AssociationMatrix all_ones(Index n) { return {Matrix::Ones(n, n)}; }
};

enum class SpectralMode { full, incremental };

struct HyperParams {
  double alpha = 20.0;
  double lambda_ratio = 100.0;
  int t_max = 10;
  double solver_tol = 1e-6;
  int solver_max_sweeps = 1000;
  int kmeans_restarts = 20;
  std::uint64_t seed = 0;
  SpectralMode spectral_mode = SpectralMode::incremental;
  // Stop on a Phi fixed point or a non-decreasing uncertain count. Disabled
  // only for the uncertain-count decay experiment.
  bool early_stop = true;
  int workers = 1;

  /// Throws DimensionError when a field is out of range.
  void validate() const;
};

enum class StopReason { phi_fixed_point, kappa_nondecreasing, t_max_reached };

struct IterationRecord {
  int t = 0;
  int kappa = 0;
  double omega = 0.0;
  double objective = 0.0;
  Labels labels;
  bool incremental = false;
  bool fallback_to_full = false;
  int unconverged_columns = 0;
};

struct ClusteringResult {
  Labels labels;
  int iterations = 0;
  std::vector<IterationRecord> history;
  StopReason stop_reason = StopReason::t_max_reached;
  bool rank_guard_tripped = false;
  std::vector<std::string> warnings;
  // Coefficients of the final iteration, for recovery metrics.
  Matrix Z;
};

std::string_view to_string(StopReason reason);
StopReason stop_reason_from_string(std::string_view name);
std::string_view to_string(SpectralMode mode);
SpectralMode spectral_mode_from_string(std::string_view name);

/// Index of the largest entry of each row; ties go to the lowest column.
Labels row_argmax(const Matrix& m);

}  // namespace pssc
