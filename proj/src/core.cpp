#include "pssc/core.hpp"

#include "pssc/errors.hpp"

#include <cmath>

namespace pssc {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 2) {
    throw DimensionError("data matrix must have n >= 1 rows and N >= 2 columns");
  }
  for (Index j = 0; j < values_.cols(); ++j) {
    for (Index i = 0; i < values_.rows(); ++i) {
      if (!std::isfinite(values_(i, j))) throw NonFiniteError(i, j);
    }
  }
  column_norms_ = values_.colwise().norm().transpose();
}

DataMatrix validate_dataset(const DataMatrix& X, int clusters, bool normalize) {
  if (clusters < 1) throw DimensionError("cluster count must be positive");
  const auto& norms = X.column_norms();
  for (Index j = 0; j < X.num_points(); ++j) {
    if (norms[j] == 0.0) throw ZeroColumnError(j);
  }
  if (X.num_points() < 2 * static_cast<Index>(clusters)) {
    throw TooFewPointsError(X.num_points(), clusters);
  }
  if (!normalize) return X;

  Matrix out = X.values();
  for (Index j = 0; j < out.cols(); ++j) {
    // Already-unit columns are left bit-identical.
    if (norms[j] != 1.0) out.col(j) /= norms[j];
  }
  return DataMatrix(std::move(out));
}

Matrix similarity_from_coefficients(const Matrix& Z) {
  Matrix abs = Z.cwiseAbs();
  Matrix sim = 0.5 * (abs + abs.transpose());
  sim.diagonal().setZero();
  return sim;
}

std::vector<Index> SoftAssignment::uncertain_points() const {
  std::vector<Index> out;
  for (std::size_t i = 0; i < certain.size(); ++i) {
    if (!certain[i]) out.push_back(static_cast<Index>(i));
  }
  return out;
}

void HyperParams::validate() const {
  if (!(alpha > 0.0)) throw DimensionError("alpha must be positive");
  if (!(lambda_ratio > 0.0)) throw DimensionError("lambda_ratio must be positive");
  if (t_max < 1) throw DimensionError("t_max must be positive");
  if (!(solver_tol > 0.0)) throw DimensionError("solver_tol must be positive");
  if (solver_max_sweeps < 1) throw DimensionError("solver_max_sweeps must be positive");
  if (kmeans_restarts < 1) throw DimensionError("kmeans_restarts must be positive");
  if (workers < 1) throw DimensionError("workers must be positive");
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::phi_fixed_point: return "phi_fixed_point";
    case StopReason::kappa_nondecreasing: return "kappa_nondecreasing";
    case StopReason::t_max_reached: return "t_max_reached";
  }
  return "unknown";
}

StopReason stop_reason_from_string(std::string_view name) {
  if (name == "phi_fixed_point") return StopReason::phi_fixed_point;
  if (name == "kappa_nondecreasing") return StopReason::kappa_nondecreasing;
  if (name == "t_max_reached") return StopReason::t_max_reached;
  throw Error("unknown stop reason: " + std::string(name));
}

std::string_view to_string(SpectralMode mode) {
  return mode == SpectralMode::full ? "full" : "incremental";
}

SpectralMode spectral_mode_from_string(std::string_view name) {
  if (name == "full") return SpectralMode::full;
  if (name == "incremental") return SpectralMode::incremental;
  throw Error("unknown spectral mode: " + std::string(name));
}

Labels row_argmax(const Matrix& m) {
  Labels out(static_cast<std::size_t>(m.rows()), 0);
  for (Index i = 0; i < m.rows(); ++i) {
    Index best = 0;
    for (Index k = 1; k < m.cols(); ++k) {
      if (m(i, k) > m(i, best)) best = k;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace pssc
