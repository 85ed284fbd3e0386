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

#include "ordalign/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ordalign/assignment_oracle.hpp"
#include "ordalign/errors.hpp"

namespace ordalign {
namespace {

constexpr double kMinCurvature = 1e-15;

double frobenius_dot(const Matrix& a, const Matrix& b) { return (a.array() * b.array()).sum(); }

double curvature_along(const CostOperator& op, const Matrix& direction, const Matrix& b_direction) {
  const Vector w2 = op.class_weights().array().square();
  const Vector per_label = (direction.array() * b_direction.array()).colwise().sum().transpose();
  return w2.dot(per_label);
}

}  // namespace

double clamp_quadratic_step(double slope, double curvature) {
  if (curvature <= kMinCurvature) return slope < 0.0 ? 1.0 : 0.0;
  return std::clamp(-slope / (2.0 * curvature), 0.0, 1.0);
}

double exact_line_search(const CostOperator& op, const Matrix& z, const Matrix& vertex) {
  const Matrix direction = vertex - z;
  const double slope = frobenius_dot(op.gradient(z), direction);
  const double curvature = curvature_along(op, direction, op.apply_b(direction));
  return clamp_quadratic_step(slope, curvature);
}

double duality_gap(const Matrix& grad, const Matrix& z, const Matrix& vertex) {
  return frobenius_dot(grad, z - vertex);
}

SolveResult solve(const CostOperator& op, std::span<const Clip> clips,
                  const SolveOptions& options) {
  if (!(options.gap_tol > 0.0)) throw ValidationError("gap tolerance must be positive");
  if (options.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  const auto& ranges = op.clip_ranges();
  if (ranges.size() != clips.size()) {
    throw ValidationError("operator stacks " + std::to_string(ranges.size()) + " clips, got " +
                          std::to_string(clips.size()));
  }
  const Index A = op.num_labels();

  Matrix z(op.rows(), A);
  std::vector<bool> fixed(clips.size(), false);
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const Clip& c = clips[i];
    const ClipRange& r = ranges[i];
    if (c.length() != r.length) {
      throw ValidationError("clip '" + c.id + "' length does not match the operator");
    }
    if (c.supervised_assignment) {
      const Matrix& s = *c.supervised_assignment;
      if (s.rows() != r.length || s.cols() != A) {
        throw ValidationError("clip '" + c.id + "' supervised assignment has wrong shape");
      }
      z.middleRows(r.offset, r.length) = s;
      fixed[i] = true;
    } else {
      if (c.length() < c.annotation.size()) {
        throw ValidationError("clip '" + c.id + "' is infeasible: " + std::to_string(c.length()) +
                              " intervals for " + std::to_string(c.annotation.size()) + " slots");
      }
      z.middleRows(r.offset, r.length) =
          path_to_matrix(stay_first_path(c.length(), c.annotation.size()), c.annotation, A);
    }
  }

  SolveResult result;
  Matrix vertex(op.rows(), A);
  Matrix bz = op.apply_b(z);
  int iter = 0;
  while (true) {
    const double f = op.objective(z, bz);
    if (!std::isfinite(f)) {
      throw NumericalError("non-finite objective at iteration " + std::to_string(iter));
    }
    const Matrix grad = op.gradient_from_bz(bz);
    for (std::size_t i = 0; i < clips.size(); ++i) {
      const ClipRange& r = ranges[i];
      if (fixed[i]) {
        vertex.middleRows(r.offset, r.length) = z.middleRows(r.offset, r.length);
      } else {
        vertex.middleRows(r.offset, r.length) =
            lmo(grad.middleRows(r.offset, r.length), clips[i].annotation).assignment;
      }
    }
    const double gap = duality_gap(grad, z, vertex);
    if (options.record_history) {
      result.objective_history.push_back(f);
      result.gap_history.push_back(gap);
    }
    result.final_gap = gap;
    if (gap < options.gap_tol) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;

    const Matrix direction = vertex - z;
    const Matrix b_direction = op.apply_b(direction);
    double step = 0.0;
    if (options.step_rule == StepRule::kExactLineSearch) {
      step = clamp_quadratic_step(frobenius_dot(grad, direction),
                                  curvature_along(op, direction, b_direction));
    } else {
      step = 2.0 / (static_cast<double>(iter) + 2.0);
    }
    if (options.record_history) result.step_history.push_back(step);
    z.noalias() += step * direction;
    bz.noalias() += step * b_direction;
    ++iter;
    // Keep B Z exact; the incremental update accumulates round-off.
    if (iter % 50 == 0) bz = op.apply_b(z);
  }
  result.iterations = iter;

  result.paths.reserve(clips.size());
  result.rounded.reserve(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const ClipRange& r = ranges[i];
    if (fixed[i]) {
      result.rounded.push_back(*clips[i].supervised_assignment);
      result.paths.push_back(matrix_to_path(result.rounded.back(), clips[i].annotation));
    } else {
      auto rounded = lmo(-z.middleRows(r.offset, r.length), clips[i].annotation);
      result.rounded.push_back(std::move(rounded.assignment));
      result.paths.push_back(std::move(rounded.path));
    }
  }
  result.zbar = std::move(z);
  return result;
}

}  // namespace ordalign
