#include "pssc/solver.hpp"

#include "pssc/errors.hpp"
#include "pssc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pssc {

double compute_lambda0(const DataMatrix& X, double alpha) {
  if (!(alpha > 0.0)) throw DimensionError("alpha must be positive");
  const Matrix gram = X.values().transpose() * X.values();
  const Index N = gram.rows();
  double mu = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < N; ++i) {
    double best = 0.0;
    for (Index j = 0; j < N; ++j) {
      if (j != i) best = std::max(best, std::abs(gram(j, i)));
    }
    mu = std::min(mu, best);
  }
  if (mu <= 0.0) throw DegenerateScaleError();
  return mu / alpha;
}

double coordinate_update(double rho, double col_norm_sq, double lambda0, double lambda1,
                         double weight) {
  const double shrunk = std::max(std::abs(rho) - lambda0, 0.0);
  if (shrunk == 0.0) return 0.0;
  const double denom = col_norm_sq + 2.0 * lambda1 * weight * weight;
  return std::copysign(shrunk, rho) / denom;
}

namespace detail {

constexpr int kMaxSupportPasses = 100000;

ColumnSolution solve_gram_column(const Matrix& gram, const Vector& correlations,
                                 Index excluded, const Eigen::Ref<const Vector>& weights,
                                 double lambda0, double lambda1, double tol,
                                 int max_sweeps, Vector z) {
  const Index N = gram.rows();
  if (excluded >= 0) z[excluded] = 0.0;
  // residual correlations D^T (target - D z)
  Vector grad = correlations - gram * z;

  auto sweep = [&](bool active_only) {
    double max_change = 0.0;
    for (Index j = 0; j < N; ++j) {
      if (j == excluded) continue;
      const double old = z[j];
      if (active_only && old == 0.0) continue;
      const double g_jj = gram(j, j);
      if (g_jj <= 0.0) continue;
      const double updated =
          coordinate_update(grad[j] + g_jj * old, g_jj, lambda0, lambda1, weights[j]);
      const double delta = updated - old;
      if (delta != 0.0) {
        z[j] = updated;
        grad.noalias() -= delta * gram.col(j);
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    return max_change;
  };

  // Only full passes count as sweeps. Between them the current support is
  // settled with cheap passes over the nonzero coordinates.
  ColumnSolution out;
  while (out.sweeps < max_sweeps) {
    ++out.sweeps;
    if (sweep(false) <= tol) {
      out.converged = true;
      break;
    }
    for (int pass = 0; pass < kMaxSupportPasses; ++pass) {
      if (sweep(true) <= tol) break;
    }
  }
  out.z = std::move(z);
  return out;
}

}  // namespace detail

ColumnSolution solve_column(const ColumnProblem& problem, double tol, int max_sweeps,
                            const Vector* warm_start) {
  if (problem.dictionary == nullptr) throw DimensionError("column problem has no dictionary");
  const Matrix& D = problem.dictionary->values();
  const Index N = D.cols();
  if (problem.target.size() != D.rows() || problem.weights.size() != N) {
    throw DimensionError("column problem shapes are inconsistent");
  }
  if (problem.excluded_index >= N) throw DimensionError("excluded index out of range");
  const Matrix gram = D.transpose() * D;
  const Vector correlations = D.transpose() * problem.target;
  Vector z = warm_start != nullptr ? *warm_start : Vector::Zero(N);
  if (z.size() != N) throw DimensionError("warm start has wrong length");
  return detail::solve_gram_column(gram, correlations, problem.excluded_index,
                                   problem.weights, problem.lambda0, problem.lambda1, tol,
                                   max_sweeps, std::move(z));
}

SolveReport solve_self_representation(const DataMatrix& X, const AssociationMatrix& A,
                                      double lambda0, double lambda1,
                                      const HyperParams& params, const Matrix* warm_start) {
  const Index N = X.num_points();
  if (A.A.rows() != N || A.A.cols() != N) {
    throw DimensionError("association matrix must be N x N");
  }
  if (warm_start != nullptr && (warm_start->rows() != N || warm_start->cols() != N)) {
    throw DimensionError("warm start must be N x N");
  }

  const Matrix gram = X.values().transpose() * X.values();
  Matrix Z = Matrix::Zero(N, N);
  std::vector<int> sweeps(static_cast<std::size_t>(N), 0);
  std::vector<char> converged(static_cast<std::size_t>(N), 0);

  parallel_for(static_cast<std::size_t>(N), params.workers, [&](std::size_t col) {
    const auto i = static_cast<Index>(col);
    const Vector weights = (1.0 - A.A.row(i).array()).matrix().transpose();
    Vector z0 = warm_start != nullptr ? Vector(warm_start->col(i)) : Vector::Zero(N);
    const Vector correlations = gram.col(i);
    auto sol = detail::solve_gram_column(gram, correlations, i, weights, lambda0, lambda1,
                                         params.solver_tol, params.solver_max_sweeps,
                                         std::move(z0));
    Z.col(i) = sol.z;
    sweeps[col] = sol.sweeps;
    converged[col] = sol.converged ? 1 : 0;
  });

  SolveReport report;
  report.unconverged_columns =
      static_cast<int>(std::count(converged.begin(), converged.end(), 0));
  report.max_sweeps_used = *std::max_element(sweeps.begin(), sweeps.end());
  report.state.E = X.values() - X.values() * Z;
  report.state.Zbar = similarity_from_coefficients(Z);
  report.state.Z = std::move(Z);
  return report;
}

double objective_value(const Matrix& X, const Matrix& Z, const Matrix& A, double lambda0,
                       double lambda1) {
  const double l1 = Z.cwiseAbs().sum();
  const double fit = (X - X * Z).squaredNorm();
  const double penalty = ((1.0 - A.array()) * Z.array()).matrix().squaredNorm();
  return lambda0 * l1 + 0.5 * fit + lambda1 * penalty;
}

}  // namespace pssc
