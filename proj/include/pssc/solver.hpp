#pragma once

#include "pssc/core.hpp"

#include <optional>

namespace pssc {

/// Lasso-style scale for the l1 weight.
///
/// With mu = min_i max_{j != i} |x_i^T x_j|, the usual self-expressive scaling
/// weights the data term by alpha / mu against a unit l1 term. Dividing
/// through to the form lambda0 |z|_1 + 1/2 |x - Xz|^2 gives lambda0 = mu / alpha.
/// Throws DegenerateScaleError when mu = 0.
double compute_lambda0(const DataMatrix& X, double alpha);

/// Per-point weighted elastic net:
///   min_z lambda0 |z|_1 + 1/2 |target - D z|^2 + lambda1 sum_j w_j^2 z_j^2,
///   z[excluded_index] = 0.
struct ColumnProblem {
  Vector target;
  const DataMatrix* dictionary = nullptr;
  Index excluded_index = -1;
  Vector weights;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
};

struct ColumnSolution {
  Vector z;
  int sweeps = 0;
  bool converged = false;
};

/// Cyclic coordinate descent with exact soft-threshold updates. Stops when the
/// largest coordinate change of a full sweep is <= tol. Hitting max_sweeps
/// full sweeps leaves `converged` false and returns the partial iterate.
ColumnSolution solve_column(const ColumnProblem& problem, double tol, int max_sweeps,
                            const Vector* warm_start = nullptr);

/// Closed-form minimizer of one coordinate given its partial residual
/// correlation rho and squared column norm.
double coordinate_update(double rho, double col_norm_sq, double lambda0, double lambda1,
                         double weight);

struct SolveReport {
  CoefficientState state;
  int unconverged_columns = 0;
  int max_sweeps_used = 0;
};

/// Solves every column of Z against the weights 1 - A, then forms E and Zbar.
/// Columns are independent; output is identical for any worker count.
SolveReport solve_self_representation(const DataMatrix& X, const AssociationMatrix& A,
                                      double lambda0, double lambda1,
                                      const HyperParams& params,
                                      const Matrix* warm_start = nullptr);

/// lambda0 |Z|_1 + 1/2 |X - XZ|_F^2 + lambda1 |(1 - A) * Z|_F^2.
double objective_value(const Matrix& X, const Matrix& Z, const Matrix& A, double lambda0,
                       double lambda1);

namespace detail {

// Coordinate descent on a precomputed Gram matrix. `correlations` is
// D^T target; z is updated in place.
ColumnSolution solve_gram_column(const Matrix& gram, const Vector& correlations,
                                 Index excluded, const Eigen::Ref<const Vector>& weights,
                                 double lambda0, double lambda1, double tol,
                                 int max_sweeps, Vector z);

}  // namespace detail

}  // namespace pssc
