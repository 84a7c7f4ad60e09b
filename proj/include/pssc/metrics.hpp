#pragma once

#include "pssc/core.hpp"

#include <vector>

namespace pssc {

/// counts(p, t): points predicted p whose true label is t.
using ConfusionMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

ConfusionMatrix confusion_matrix(const Labels& pred, const Labels& truth, int clusters);

/// Optimal assignment (Hungarian method) on a square profit matrix.
/// Returns perm with perm[row] = column maximizing the total profit.
std::vector<int> max_weight_assignment(const ConfusionMatrix& profit);

/// perm[k] = truth label matched to predicted label k.
std::vector<int> best_label_matching(const Labels& pred, const Labels& truth, int clusters);

/// Points agreeing with truth under the best matching.
long long best_agreement(const Labels& pred, const Labels& truth, int clusters);

/// Fraction of points misclassified under the best label matching.
double misclassification(const Labels& pred, const Labels& truth, int clusters);

/// 1 - mean over points of the share of |z_i|_1 lying on points of the same
/// true cluster. Columns with no mass count as fully unrecovered.
double ssr_error(const Matrix& Z, const Labels& truth, int clusters);

}  // namespace pssc
