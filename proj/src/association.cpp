#include "pssc/association.hpp"

#include "pssc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pssc {

Probabilities compute_probabilities(const Matrix& similarity, const Labels& labels,
                                    int clusters) {
  const Index N = similarity.rows();
  if (similarity.cols() != N || static_cast<Index>(labels.size()) != N) {
    throw DimensionError("similarity must be N x N with N labels");
  }
  if (clusters < 1) throw DimensionError("cluster count must be positive");
  for (int l : labels) {
    if (l < 0 || l >= clusters) throw DimensionError("label out of range");
  }

  Probabilities out;
  out.P = Matrix::Zero(N, clusters);
  for (Index i = 0; i < N; ++i) {
    // Column i of the similarity is the representation of point i.
    for (Index j = 0; j < N; ++j) {
      out.P(i, labels[static_cast<std::size_t>(j)]) += std::abs(similarity(j, i));
    }
    const double mass = out.P.row(i).sum();
    if (mass > 0.0) {
      out.P.row(i) /= mass;
    } else {
      out.P.row(i).setConstant(1.0 / clusters);
      out.zero_mass.push_back(i);
    }
  }
  return out;
}

Matrix affinity_matrix(const Matrix& P) { return P.transpose() * P; }

double compute_omega(const Matrix& P) {
  const Index C = P.cols();
  if (C < 2) throw DimensionError("omega needs at least two clusters");
  const Matrix M = affinity_matrix(P);
  const double diag = M.trace();
  if (diag <= 0.0) throw DegenerateAffinityError();
  const double off = M.sum() - diag;
  const double omega = 1.0 - off / (static_cast<double>(C - 1) * diag);
  return std::clamp(omega, 0.0, 1.0);
}

SoftAssignment build_soft_assignment(const Matrix& P, double omega) {
  SoftAssignment out;
  out.P = P;
  out.omega = omega;
  out.phi = P;
  out.certain.assign(static_cast<std::size_t>(P.rows()), false);
  const Labels top = row_argmax(P);
  for (Index i = 0; i < P.rows(); ++i) {
    const int k = top[static_cast<std::size_t>(i)];
    if (P(i, k) >= omega) {
      out.phi.row(i).setZero();
      out.phi(i, k) = 1.0;
      out.certain[static_cast<std::size_t>(i)] = true;
    } else {
      ++out.kappa;
    }
  }
  return out;
}

AssociationMatrix build_association(const SoftAssignment& assignment) {
  Matrix A = assignment.phi * assignment.phi.transpose();
  // Rounding can push inner products of simplex rows a hair past [0, 1].
  A = (0.5 * (A + A.transpose())).cwiseMax(0.0).cwiseMin(1.0);
  for (Index i = 0; i < A.rows(); ++i) {
    if (assignment.certain[static_cast<std::size_t>(i)]) A(i, i) = 1.0;
  }
  return {std::move(A)};
}

}  // namespace pssc
