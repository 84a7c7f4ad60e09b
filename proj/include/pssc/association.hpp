#pragma once

#include "pssc/core.hpp"

#include <vector>

namespace pssc {

/// Degree-of-association probabilities. Row i holds the share of the l1 mass
/// of similarity column i that falls in each cluster.
struct Probabilities {
  Matrix P;  // N x C, rows sum to 1
  // Points whose similarity column has zero l1 mass; their row is uniform.
  std::vector<Index> zero_mass;
};

Probabilities compute_probabilities(const Matrix& similarity, const Labels& labels,
                                    int clusters);

/// M = P^T P.
Matrix affinity_matrix(const Matrix& P);

/// 1 - (off-diagonal mass of M) / ((C - 1) * diagonal mass of M).
double compute_omega(const Matrix& P);

/// Rows whose top probability reaches omega become one-hot; the rest keep
/// their probability row. Argmax ties go to the lowest cluster.
SoftAssignment build_soft_assignment(const Matrix& P, double omega);

/// A = Phi Phi^T.
AssociationMatrix build_association(const SoftAssignment& assignment);

}  // namespace pssc
