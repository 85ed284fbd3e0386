// Copyright 2026 The ordalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Implicit quadratic cost of discriminative clustering with a square loss.
//
// For stacked features X (T x d) and ridge strength lambda, eliminating a
// linear classifier (W, b) from the weighted ridge cost
//
//   (1/T) ||(Z - X W - 1 b) D||_F^2 + lambda ||W D||_F^2
//
// leaves Tr(D Z^T B Z D) with
//
//   B = (1/T) Pi (I - X (X^T Pi X + T lambda I)^-1 X^T) Pi,
//
// Pi the T x T centering matrix. B is never formed: the operator keeps the
// centered features and a Cholesky factor of the d x d system, so a product
// B Z costs O(T d A). The class weights D only rescale columns and do not
// change B. A linear per-class penalty Tr(kappa 1^T Z) is added on top.
//
// The normalized-cut baseline shares the interface with an explicit
// block-diagonal B = I - D^-1/2 E D^-1/2 per clip.

#ifndef ORDALIGN_DIFFRAC_COST_HPP_
#define ORDALIGN_DIFFRAC_COST_HPP_

#include <span>
#include <vector>

#include "ordalign/model.hpp"

namespace ordalign {

enum class CostKind { kDiffrac, kNcut };

/// Row range of one clip inside the stacked problem.
struct ClipRange {
  Index offset = 0;
  Index length = 0;
};

struct Classifier {
  Matrix weights;    // d x A
  RowVector bias;    // 1 x A

  /// f(x) = x^T W + b for every row of features.
  Matrix scores(const Matrix& features) const;
};

class CostOperator {
 public:
  /// Diffrac operator over pre-stacked features. clip_lengths must sum to
  /// features.rows(); class_weights and kappa have one entry per label.
  static CostOperator Diffrac(Matrix features, std::span<const Index> clip_lengths,
                              double lambda, Vector class_weights, Vector kappa);

  /// Normalized-cut operator from explicit per-clip Laplacian blocks.
  static CostOperator Ncut(std::vector<Matrix> blocks, Vector class_weights, Vector kappa);

  CostKind kind() const { return kind_; }
  Index rows() const { return rows_; }
  Index num_labels() const { return class_weights_.size(); }
  double lambda() const { return lambda_; }
  const Vector& class_weights() const { return class_weights_; }
  const Vector& kappa() const { return kappa_; }
  const std::vector<ClipRange>& clip_ranges() const { return ranges_; }

  /// Stacked raw features (diffrac only).
  const Matrix& features() const { return features_; }

  /// Same B with a different class weighting and penalty.
  CostOperator with_penalty(Vector class_weights, Vector kappa) const;

  /// B Z for a T x A matrix.
  Matrix apply_b(const Matrix& z) const;

  /// Tr(D Z^T B Z D) + Tr(kappa 1^T Z).
  double objective(const Matrix& z) const;
  /// Same value when B Z is already known.
  double objective(const Matrix& z, const Matrix& bz) const;

  /// 2 B Z D^2 + 1 kappa^T.
  Matrix gradient(const Matrix& z) const;
  Matrix gradient_from_bz(const Matrix& bz) const;

  /// Dense T x T B. Intended for tests and small diagnostics only.
  Matrix materialize_b() const;

 private:
  CostOperator() = default;
  void check_shape(const Matrix& z) const;
  void set_penalty(Vector class_weights, Vector kappa);

  CostKind kind_ = CostKind::kDiffrac;
  Index rows_ = 0;
  double lambda_ = 0.0;
  Vector class_weights_;
  Vector kappa_;
  std::vector<ClipRange> ranges_;

  // diffrac
  Matrix features_;
  Matrix centered_;
  RowVector feature_mean_;
  Eigen::LLT<Matrix> system_;  // X^T Pi X + T lambda I

  // ncut
  std::vector<Matrix> blocks_;

  friend Classifier recover_classifier(const CostOperator& op, const Matrix& assignment);
};

/// x_i = sqrt(h_i / sum_j h_j). Throws ValidationError on negative entries
/// or an all-zero histogram.
Vector hellinger_map(std::span<const double> histogram);

/// Stacks every clip's features in order and builds the diffrac operator.
/// Throws ValidationError on lambda <= 0, mismatched feature dimensions, or
/// non-positive class weights.
CostOperator build_cost_operator(std::span<const Clip> clips, double lambda,
                                 const Vector& class_weights, const Vector& kappa);

/// Minimizer of the weighted ridge cost at the given assignment. The weights
/// scale each label column uniformly, so (W, b) does not depend on them.
Classifier recover_classifier(const CostOperator& op, const Matrix& assignment);

/// 1/2 sum_i (x_i - y_i)^2 / (|x_i| + |y_i| + 1e-10). Matches the usual
/// chi-squared histogram distance for non-negative inputs.
double chi_squared_distance(const Eigen::Ref<const RowVector>& x,
                            const Eigen::Ref<const RowVector>& y);

/// Per-clip affinity E_ij = exp(-alpha |i-j| - beta chi2(x_i, x_j)) for
/// |i-j| < min_distance, else 0.
Matrix ncut_affinity(const Matrix& features, double alpha, double beta, Index min_distance);

/// Block-diagonal normalized Laplacian over clips, no cross-clip affinity.
CostOperator ncut_cost_operator(std::span<const Clip> clips, double alpha, double beta,
                                Index min_distance, const Vector& class_weights,
                                const Vector& kappa);

}  // namespace ordalign

#endif  // ORDALIGN_DIFFRAC_COST_HPP_
