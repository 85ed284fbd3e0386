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

#include "ordalign/diffrac_cost.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "ordalign/errors.hpp"

namespace ordalign {

Matrix Classifier::scores(const Matrix& features) const {
  if (features.cols() != weights.rows()) {
    throw ValidationError("feature dimension " + std::to_string(features.cols()) +
                          " does not match classifier dimension " +
                          std::to_string(weights.rows()));
  }
  return (features * weights).rowwise() + bias;
}

void CostOperator::set_penalty(Vector class_weights, Vector kappa) {
  if (class_weights.size() < 1) throw ValidationError("class weights are empty");
  if (kappa.size() != class_weights.size()) {
    throw ValidationError("kappa has " + std::to_string(kappa.size()) + " entries, expected " +
                          std::to_string(class_weights.size()));
  }
  if (!(class_weights.array() > 0.0).all() || !class_weights.allFinite()) {
    throw ValidationError("class weights must be finite and positive");
  }
  if (!kappa.allFinite()) throw ValidationError("kappa must be finite");
  class_weights_ = std::move(class_weights);
  kappa_ = std::move(kappa);
}

CostOperator CostOperator::Diffrac(Matrix features, std::span<const Index> clip_lengths,
                                   double lambda, Vector class_weights, Vector kappa) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("ridge strength lambda must be positive, got " + std::to_string(lambda));
  }
  if (!features.allFinite()) throw ValidationError("features contain non-finite values");
  CostOperator op;
  op.kind_ = CostKind::kDiffrac;
  op.set_penalty(std::move(class_weights), std::move(kappa));
  Index offset = 0;
  for (Index len : clip_lengths) {
    op.ranges_.push_back({offset, len});
    offset += len;
  }
  if (offset != features.rows()) {
    throw ValidationError("clip lengths sum to " + std::to_string(offset) + " but features have " +
                          std::to_string(features.rows()) + " rows");
  }
  if (offset == 0) throw ValidationError("cost operator over zero intervals");
  op.rows_ = offset;
  op.lambda_ = lambda;
  op.feature_mean_ = features.colwise().mean();
  op.centered_ = features.rowwise() - op.feature_mean_;
  op.features_ = std::move(features);

  Matrix system = op.centered_.transpose() * op.centered_;
  system.diagonal().array() += static_cast<double>(op.rows_) * lambda;
  op.system_.compute(system);
  assert(op.system_.info() == Eigen::Success && "X^T Pi X + T lambda I is positive definite");
  return op;
}

CostOperator CostOperator::Ncut(std::vector<Matrix> blocks, Vector class_weights, Vector kappa) {
  CostOperator op;
  op.kind_ = CostKind::kNcut;
  op.set_penalty(std::move(class_weights), std::move(kappa));
  Index offset = 0;
  for (const auto& b : blocks) {
    if (b.rows() != b.cols()) throw ValidationError("ncut block is not square");
    op.ranges_.push_back({offset, b.rows()});
    offset += b.rows();
  }
  if (offset == 0) throw ValidationError("cost operator over zero intervals");
  op.rows_ = offset;
  op.blocks_ = std::move(blocks);
  return op;
}

CostOperator CostOperator::with_penalty(Vector class_weights, Vector kappa) const {
  CostOperator op = *this;
  op.set_penalty(std::move(class_weights), std::move(kappa));
  return op;
}

void CostOperator::check_shape(const Matrix& z) const {
  if (z.rows() != rows_ || z.cols() != num_labels()) {
    throw ValidationError("matrix is " + std::to_string(z.rows()) + "x" +
                          std::to_string(z.cols()) + ", operator expects " +
                          std::to_string(rows_) + "x" + std::to_string(num_labels()));
  }
}

Matrix CostOperator::apply_b(const Matrix& z) const {
  if (z.rows() != rows_) {
    throw ValidationError("matrix has " + std::to_string(z.rows()) + " rows, operator expects " +
                          std::to_string(rows_));
  }
  if (kind_ == CostKind::kNcut) {
    Matrix out(z.rows(), z.cols());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      const auto& r = ranges_[i];
      out.middleRows(r.offset, r.length).noalias() = blocks_[i] * z.middleRows(r.offset, r.length);
    }
    return out;
  }
  // (1/T) (Pi Z - Xc M^-1 Xc^T Z); Xc = Pi X has centered columns, so the
  // second term is already centered.
  Matrix out = z.rowwise() - z.colwise().mean();
  const Matrix projected = system_.solve(centered_.transpose() * z);
  out.noalias() -= centered_ * projected;
  out /= static_cast<double>(rows_);
  return out;
}

double CostOperator::objective(const Matrix& z) const { return objective(z, apply_b(z)); }

double CostOperator::objective(const Matrix& z, const Matrix& bz) const {
  check_shape(z);
  check_shape(bz);
  const Vector w2 = class_weights_.array().square();
  const Vector quad = (z.array() * bz.array()).colwise().sum().transpose();
  const Vector mass = z.colwise().sum().transpose();
  return w2.dot(quad) + kappa_.dot(mass);
}

Matrix CostOperator::gradient(const Matrix& z) const {
  check_shape(z);
  return gradient_from_bz(apply_b(z));
}

Matrix CostOperator::gradient_from_bz(const Matrix& bz) const {
  check_shape(bz);
  Matrix g = 2.0 * bz * class_weights_.array().square().matrix().asDiagonal();
  g.rowwise() += kappa_.transpose();
  return g;
}

Matrix CostOperator::materialize_b() const {
  return apply_b(Matrix::Identity(rows_, rows_));
}

Vector hellinger_map(std::span<const double> histogram) {
  if (histogram.empty()) throw ValidationError("empty histogram");
  double total = 0.0;
  for (double h : histogram) {
    if (!(h >= 0.0) || !std::isfinite(h)) {
      throw ValidationError("histogram entries must be finite and non-negative");
    }
    total += h;
  }
  if (total == 0.0) throw ValidationError("histogram is all zero");
  Vector out(static_cast<Index>(histogram.size()));
  for (std::size_t i = 0; i < histogram.size(); ++i) {
    out[static_cast<Index>(i)] = std::sqrt(histogram[i] / total);
  }
  return out;
}

CostOperator build_cost_operator(std::span<const Clip> clips, double lambda,
                                 const Vector& class_weights, const Vector& kappa) {
  if (clips.empty()) throw ValidationError("no clips to build a cost operator from");
  const Index d = clips.front().dim();
  Index total = 0;
  std::vector<Index> lengths;
  lengths.reserve(clips.size());
  for (const auto& c : clips) {
    if (c.dim() != d) {
      throw ValidationError("clip '" + c.id + "' has feature dimension " +
                            std::to_string(c.dim()) + ", expected " + std::to_string(d));
    }
    lengths.push_back(c.length());
    total += c.length();
  }
  Matrix stacked(total, d);
  Index offset = 0;
  for (const auto& c : clips) {
    stacked.middleRows(offset, c.length()) = c.features;
    offset += c.length();
  }
  return CostOperator::Diffrac(std::move(stacked), lengths, lambda, class_weights, kappa);
}

Classifier recover_classifier(const CostOperator& op, const Matrix& assignment) {
  if (op.kind() != CostKind::kDiffrac) {
    throw ValidationError("classifier recovery is only defined for the diffrac cost");
  }
  if (assignment.rows() != op.rows()) {
    throw ValidationError("assignment rows do not match the operator");
  }
  // Normal equations: (Xc^T Xc + T lambda I) W = Xc^T Z, b = mean(Z - X W).
  Classifier c;
  c.weights = op.system_.solve(op.centered_.transpose() * assignment);
  c.bias = assignment.colwise().mean() - op.feature_mean_ * c.weights;
  return c;
}

double chi_squared_distance(const Eigen::Ref<const RowVector>& x,
                            const Eigen::Ref<const RowVector>& y) {
  constexpr double kEps = 1e-10;
  const auto diff = (x - y).array();
  const auto denom = x.array().abs() + y.array().abs() + kEps;
  return 0.5 * (diff.square() / denom).sum();
}

Matrix ncut_affinity(const Matrix& features, double alpha, double beta, Index min_distance) {
  const Index T = features.rows();
  Matrix e = Matrix::Zero(T, T);
  for (Index i = 0; i < T; ++i) {
    for (Index j = std::max<Index>(0, i - min_distance + 1); j < std::min(T, i + min_distance); ++j) {
      const double gap = static_cast<double>(std::abs(i - j));
      e(i, j) = std::exp(-alpha * gap - beta * chi_squared_distance(features.row(i), features.row(j)));
    }
  }
  return e;
}

CostOperator ncut_cost_operator(std::span<const Clip> clips, double alpha, double beta,
                                Index min_distance, const Vector& class_weights,
                                const Vector& kappa) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw ValidationError("ncut alpha and beta must be >= 0");
  if (min_distance < 1) throw ValidationError("ncut min distance must be >= 1");
  std::vector<Matrix> blocks;
  blocks.reserve(clips.size());
  for (const auto& c : clips) {
    const Matrix e = ncut_affinity(c.features, alpha, beta, min_distance);
    const Vector degree = e.rowwise().sum();
    assert((degree.array() > 0.0).all() && "E_ii = 1 keeps every degree positive");
    const Vector inv_sqrt = degree.array().rsqrt();
    Matrix b = -(inv_sqrt.asDiagonal() * e * inv_sqrt.asDiagonal());
    b.diagonal().array() += 1.0;
    blocks.push_back(0.5 * (b + b.transpose()));
  }
  return CostOperator::Ncut(std::move(blocks), class_weights, kappa);
}

}  // namespace ordalign
