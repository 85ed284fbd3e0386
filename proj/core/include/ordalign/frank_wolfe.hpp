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

// Frank-Wolfe (conditional gradient) over the product of per-clip
// assignment polytopes. Each iteration solves one alignment DP per free
// clip on its gradient block and moves toward that vertex.

#ifndef ORDALIGN_FRANK_WOLFE_HPP_
#define ORDALIGN_FRANK_WOLFE_HPP_

#include <span>
#include <vector>

#include "ordalign/diffrac_cost.hpp"
#include "ordalign/model.hpp"

namespace ordalign {

enum class StepRule {
  kExactLineSearch,  // minimizes the quadratic along the segment
  kUniversal,        // 2 / (p + 1) at iteration p = 1, 2, ...
};

struct SolveOptions {
  double gap_tol = 1e-4;
  int max_iter = 500;
  StepRule step_rule = StepRule::kExactLineSearch;
  bool record_history = true;
};

struct SolveResult {
  Matrix zbar;                          // stacked relaxed solution
  std::vector<AssignmentPath> paths;    // rounded, one per clip
  std::vector<Matrix> rounded;          // rounded, one per clip
  double final_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  // Entry k describes iterate Z_k. step_history[k] is the step taken from Z_k.
  std::vector<double> objective_history;
  std::vector<double> gap_history;
  std::vector<double> step_history;
};

/// Minimizer over [0, 1] of slope * g + curvature * g^2. With non-positive
/// curvature (<= 1e-15) returns 1 for a negative slope and 0 otherwise.
double clamp_quadratic_step(double slope, double curvature);

/// Exact step from z toward vertex for the operator's objective.
double exact_line_search(const CostOperator& op, const Matrix& z, const Matrix& vertex);

/// <grad, z - vertex>.
double duality_gap(const Matrix& grad, const Matrix& z, const Matrix& vertex);

/// Runs Frank-Wolfe on the clips stacked in op (same order and lengths).
/// Clips carrying a supervised assignment stay fixed at it; the others start
/// at the stay-first vertex. Throws ValidationError for infeasible clips and
/// NumericalError on a non-finite objective.
SolveResult solve(const CostOperator& op, std::span<const Clip> clips,
                  const SolveOptions& options);

}  // namespace ordalign

#endif  // ORDALIGN_FRANK_WOLFE_HPP_
