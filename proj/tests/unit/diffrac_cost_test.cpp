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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>
#include <vector>

#include "ordalign/diffrac_cost.hpp"
#include "ordalign/errors.hpp"
#include "test_util.hpp"

namespace ordalign {
namespace {

using testing::ones;
using testing::random_matrix;
using testing::zeros;

// B = (1/T) (Pi - Pi X (X^T Pi X + T lambda I)^-1 X^T Pi), assembled densely.
Matrix dense_b(const Matrix& x, double lambda) {
  const Index t = x.rows();
  const Matrix pi = Matrix::Identity(t, t) - Matrix::Constant(t, t, 1.0 / static_cast<double>(t));
  Matrix m = x.transpose() * pi * x;
  m.diagonal().array() += static_cast<double>(t) * lambda;
  const Matrix inner = m.fullPivLu().inverse();
  return (pi - pi * x * inner * x.transpose() * pi) / static_cast<double>(t);
}

// Minimizes (1/T) ||(Z - X W - 1 b) D||^2 + lambda ||W D||^2 via the normal
// equations of the augmented design [X 1]; returns (value, W, b).
struct RidgeFit {
  double value;
  Matrix w;
  RowVector b;
};

RidgeFit dense_ridge(const Matrix& x, const Matrix& z, double lambda, const Vector& weights) {
  const Index t = x.rows();
  const Index d = x.cols();
  Matrix aug(t, d + 1);
  aug << x, Matrix::Ones(t, 1);
  Matrix lhs = aug.transpose() * aug;
  for (Index i = 0; i < d; ++i) lhs(i, i) += static_cast<double>(t) * lambda;
  const Matrix theta = lhs.colPivHouseholderQr().solve(aug.transpose() * z);
  RidgeFit fit{0.0, theta.topRows(d), theta.row(d)};
  const Matrix residual = z - aug * theta;
  for (Index a = 0; a < z.cols(); ++a) {
    const double w2 = weights[a] * weights[a];
    fit.value += w2 * (residual.col(a).squaredNorm() / static_cast<double>(t) +
                       lambda * fit.w.col(a).squaredNorm());
  }
  return fit;
}

CostOperator diffrac(const Matrix& x, std::vector<Index> lengths, double lambda, Index labels,
                     Vector weights = {}, Vector kappa = {}) {
  if (weights.size() == 0) weights = ones(labels);
  if (kappa.size() == 0) kappa = zeros(labels);
  return CostOperator::Diffrac(x, lengths, lambda, weights, kappa);
}

TEST(Hellinger, Examples) {
  const std::vector<double> a{1, 1, 0, 0};
  const Vector ha = hellinger_map(a);
  EXPECT_NEAR(ha[0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(ha[1], std::sqrt(0.5), 1e-15);
  EXPECT_EQ(ha[2], 0.0);
  EXPECT_EQ(hellinger_map(std::vector<double>{4})[0], 1.0);
  const Vector hc = hellinger_map(std::vector<double>{2, 2, 2, 2});
  for (Index i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(hc[i], 0.5);
  EXPECT_NEAR(hc.squaredNorm(), 1.0, 1e-15);
}

TEST(Hellinger, RejectsDegenerateHistograms) {
  EXPECT_THROW(hellinger_map(std::vector<double>{0, 0}), ValidationError);
  EXPECT_THROW(hellinger_map(std::vector<double>{1, -1}), ValidationError);
}

TEST(Diffrac, ZeroFeaturesReduceToCentering) {
  std::mt19937_64 rng(1);
  const Matrix z = random_matrix(rng, 10, 3);
  const auto op = diffrac(Matrix::Zero(10, 4), {4, 6}, 0.1, 3);
  const Matrix expected = (z.rowwise() - z.colwise().mean()) / 10.0;
  EXPECT_LE((op.apply_b(z) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Diffrac, ConstantColumnsAreAnnihilated) {
  std::mt19937_64 rng(2);
  const auto op = diffrac(random_matrix(rng, 15, 4), {15}, 0.05, 3);
  Matrix z = Matrix::Zero(15, 3);
  z.col(1).setOnes();
  EXPECT_LE(op.apply_b(z).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(op.objective(z), 0.0, 1e-14);
  EXPECT_LE(op.gradient(z).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Diffrac, ApplyMatchesDenseReference) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    const Matrix x = random_matrix(rng, 25, 6);
    const double lambda = std::pow(10.0, -3 + i % 5);
    const auto op = diffrac(x, {10, 15}, lambda, 4);
    const Matrix z = random_matrix(rng, 25, 4);
    ASSERT_LE((op.apply_b(z) - dense_b(x, lambda) * z).cwiseAbs().maxCoeff(), 1e-8);
    ASSERT_LE((op.materialize_b() - dense_b(x, lambda)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Diffrac, MaterializedMatrixIsPsd) {
  std::mt19937_64 rng(4);
  const auto op = diffrac(random_matrix(rng, 30, 5), {30}, 0.1, 2);
  const Matrix b = op.materialize_b();
  EXPECT_LE((b - b.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (b + b.transpose()));
  EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
}

TEST(Diffrac, ObjectiveMatchesDenseFormula) {
  std::mt19937_64 rng(5);
  const Matrix x = random_matrix(rng, 20, 3);
  Vector w(3), kappa(3);
  w << 1.0, 0.5, 2.0;
  kappa << 0.1, -0.2, 0.3;
  const auto op = diffrac(x, {8, 12}, 0.2, 3, w, kappa);
  const Matrix z = random_matrix(rng, 20, 3, 0.0, 1.0);
  const Matrix zd = z * w.asDiagonal();
  const double dense = (zd.transpose() * dense_b(x, 0.2) * zd).trace() + kappa.dot(z.colwise().sum());
  EXPECT_NEAR(op.objective(z), dense, 1e-8);
  EXPECT_DOUBLE_EQ(op.objective(Matrix::Zero(20, 3)), 0.0);
}

TEST(Diffrac, GradientAtZeroIsPenalty) {
  Vector kappa(3);
  kappa << 0.5, 0.0, -1.0;
  std::mt19937_64 rng(6);
  const auto op = diffrac(random_matrix(rng, 6, 2), {6}, 0.1, 3, ones(3), kappa);
  const Matrix g = op.gradient(Matrix::Zero(6, 3));
  for (Index t = 0; t < 6; ++t) EXPECT_EQ(g.row(t), kappa.transpose());
}

TEST(Diffrac, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  Vector w(3), kappa(3);
  w << 1.0, 0.7, 1.5;
  kappa << 0.01, 0.0, -0.02;
  const auto op = diffrac(random_matrix(rng, 12, 4), {5, 7}, 0.05, 3, w, kappa);
  const Matrix z = random_matrix(rng, 12, 3, 0.0, 1.0);
  const Matrix g = op.gradient(z);
  const double h = 1e-6;
  for (Index i = 0; i < z.rows(); ++i) {
    for (Index j = 0; j < z.cols(); ++j) {
      Matrix zp = z, zm = z;
      zp(i, j) += h;
      zm(i, j) -= h;
      const double fd = (op.objective(zp) - op.objective(zm)) / (2 * h);
      ASSERT_NEAR(fd, g(i, j), 1e-5 * std::max(1.0, std::abs(g(i, j))));
    }
  }
}

TEST(Diffrac, CachedProductGivesSameObjective) {
  std::mt19937_64 rng(8);
  const auto op = diffrac(random_matrix(rng, 9, 2), {9}, 0.3, 2);
  const Matrix z = random_matrix(rng, 9, 2);
  EXPECT_DOUBLE_EQ(op.objective(z), op.objective(z, op.apply_b(z)));
  EXPECT_EQ(op.gradient(z), op.gradient_from_bz(op.apply_b(z)));
}

TEST(Diffrac, ObjectiveEqualsMinimizedRidgeCost) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const Index t = 10 + i;
    const Index d = 1 + i % 8;
    const Matrix x = random_matrix(rng, t, d);
    const Matrix z = random_matrix(rng, t, 3, 0.0, 1.0);
    Vector w = random_matrix(rng, 3, 1, 0.5, 2.0);
    const double lambda = 0.01 * (1 + i);
    const auto op = diffrac(x, {t}, lambda, 3, w);
    const RidgeFit fit = dense_ridge(x, z, lambda, w);
    ASSERT_NEAR(op.objective(z), fit.value, 1e-6 * std::abs(fit.value));
  }
}

TEST(Classifier, RecoveryMatchesIndependentRidge) {
  std::mt19937_64 rng(10);
  const Matrix x = random_matrix(rng, 30, 5);
  const Matrix z = random_matrix(rng, 30, 4, 0.0, 1.0);
  const auto op = diffrac(x, {12, 18}, 0.07, 4);
  const Classifier c = recover_classifier(op, z);
  const RidgeFit fit = dense_ridge(x, z, 0.07, ones(4));
  EXPECT_LE((c.weights - fit.w).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((c.bias - fit.b).cwiseAbs().maxCoeff(), 1e-8);
  // Plugging the fitted weights back reproduces the eliminated objective.
  const Matrix residual = z - c.scores(x);
  const double plugged = residual.squaredNorm() / 30.0 + 0.07 * c.weights.squaredNorm();
  EXPECT_NEAR(plugged, op.objective(z), 1e-9);
}

TEST(Classifier, ZeroFeaturesFitInterceptOnly) {
  std::mt19937_64 rng(11);
  const Matrix z = random_matrix(rng, 8, 3, 0.0, 1.0);
  const auto op = diffrac(Matrix::Zero(8, 2), {8}, 0.1, 3);
  const Classifier c = recover_classifier(op, z);
  EXPECT_LE(c.weights.cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((c.bias - z.colwise().mean()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Classifier, InterceptPreservesColumnMeans) {
  std::mt19937_64 rng(12);
  const Matrix x = random_matrix(rng, 14, 3);
  Matrix z = random_matrix(rng, 14, 2, 0.0, 1.0);
  z.col(0).setConstant(0.3);
  const auto op = diffrac(x, {14}, 0.01, 2);
  const Matrix pred = recover_classifier(op, z).scores(x);
  EXPECT_NEAR(pred.col(0).mean(), 0.3, 1e-12);
  EXPECT_NEAR(pred.col(1).mean(), z.col(1).mean(), 1e-12);
}

TEST(Classifier, LargeRidgePredictsClassFrequencies) {
  std::mt19937_64 rng(13);
  const Matrix x = random_matrix(rng, 20, 3);
  const Matrix z = random_matrix(rng, 20, 2, 0.0, 1.0);
  const auto op = diffrac(x, {20}, 1e9, 2);
  const Classifier c = recover_classifier(op, z);
  EXPECT_LE(c.weights.cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((c.bias - z.colwise().mean()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Classifier, RejectsNcutOperator) {
  const auto op = CostOperator::Ncut({Matrix::Identity(3, 3)}, ones(2), zeros(2));
  EXPECT_THROW(recover_classifier(op, Matrix::Zero(3, 2)), ValidationError);
}

TEST(Diffrac, StackedClipsShareOneOperator) {
  std::mt19937_64 rng(14);
  auto clips = testing::random_clips(rng, {5, 7, 4}, 2, 3, 3);
  const auto op = build_cost_operator(clips, 0.1, ones(3), zeros(3));
  ASSERT_EQ(op.rows(), 16);
  ASSERT_EQ(op.clip_ranges().size(), 3u);
  EXPECT_EQ(op.clip_ranges()[1].offset, 5);
  EXPECT_EQ(op.clip_ranges()[2].length, 4);
  EXPECT_EQ(op.features().middleRows(5, 7), clips[1].features);
  clips[2].features = Matrix::Zero(4, 5);
  EXPECT_THROW(build_cost_operator(clips, 0.1, ones(3), zeros(3)), ValidationError);
}

TEST(Diffrac, RejectsBadParameters) {
  EXPECT_THROW(diffrac(Matrix::Zero(5, 2), {5}, 0.0, 2), ValidationError);
  EXPECT_THROW(diffrac(Matrix::Zero(5, 2), {4}, 0.1, 2), ValidationError);
  EXPECT_THROW(diffrac(Matrix::Zero(5, 2), {5}, 0.1, 2, ones(3)), ValidationError);
  const auto op = diffrac(Matrix::Zero(5, 2), {5}, 0.1, 2);
  EXPECT_THROW(op.objective(Matrix::Zero(4, 2)), ValidationError);
}

TEST(Ncut, ChiSquaredDistance) {
  RowVector x(3), y(3);
  x << 1, 0, 2;
  y << 0, 0, 2;
  EXPECT_NEAR(chi_squared_distance(x, y), 0.5, 1e-9);
  EXPECT_EQ(chi_squared_distance(x, x), 0.0);
}

TEST(Ncut, FullAffinityGivesCentering) {
  std::mt19937_64 rng(15);
  Clip c = testing::random_clip(rng, "c", 7, 2, 3, 2);
  const auto op = ncut_cost_operator(std::span<const Clip>(&c, 1), 0.0, 0.0, 100, ones(2), zeros(2));
  const Matrix pi = Matrix::Identity(7, 7) - Matrix::Constant(7, 7, 1.0 / 7.0);
  EXPECT_LE((op.materialize_b() - pi).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ncut, SelfAffinityOnlyGivesZero) {
  std::mt19937_64 rng(16);
  Clip c = testing::random_clip(rng, "c", 6, 2, 3, 2);
  const auto op = ncut_cost_operator(std::span<const Clip>(&c, 1), 0.3, 0.0, 1, ones(2), zeros(2));
  EXPECT_LE(op.materialize_b().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Ncut, SpectrumWithinLaplacianBounds) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 5; ++i) {
    Clip c = testing::random_clip(rng, "c", 20, 2, 4, 2);
    c.features = c.features.cwiseAbs();
    const auto op = ncut_cost_operator(std::span<const Clip>(&c, 1), 0.1, 1.0, 5, ones(2), zeros(2));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(op.materialize_b());
    ASSERT_GE(eig.eigenvalues().minCoeff(), -1e-10);
    ASSERT_LE(eig.eigenvalues().maxCoeff(), 2.0 + 1e-10);
  }
}

TEST(Ncut, BlocksStayWithinClips) {
  std::mt19937_64 rng(18);
  const auto clips = testing::random_clips(rng, {4, 5}, 2, 3, 2);
  const auto op = ncut_cost_operator(clips, 0.1, 1.0, 3, ones(2), zeros(2));
  const Matrix b = op.materialize_b();
  EXPECT_EQ(b.block(0, 4, 4, 5).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(b.block(4, 0, 5, 4).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ncut, RejectsBadParameters) {
  std::mt19937_64 rng(19);
  Clip c = testing::random_clip(rng, "c", 4, 2, 2, 2);
  EXPECT_THROW(ncut_cost_operator(std::span<const Clip>(&c, 1), -1.0, 1.0, 3, ones(2), zeros(2)),
               ValidationError);
  EXPECT_THROW(ncut_cost_operator(std::span<const Clip>(&c, 1), 0.1, 1.0, 0, ones(2), zeros(2)),
               ValidationError);
}

TEST(Penalty, WithPenaltyKeepsQuadraticPart) {
  std::mt19937_64 rng(20);
  const auto op = diffrac(random_matrix(rng, 8, 2), {8}, 0.1, 2);
  Vector kappa(2);
  kappa << 1.0, 0.0;
  const auto penalized = op.with_penalty(ones(2), kappa);
  const Matrix z = random_matrix(rng, 8, 2, 0.0, 1.0);
  EXPECT_NEAR(penalized.objective(z), op.objective(z) + z.col(0).sum(), 1e-12);
  EXPECT_EQ(penalized.apply_b(z), op.apply_b(z));
}

}  // namespace
}  // namespace ordalign
