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

// Linear minimization over the set of admissible assignment matrices, by
// dynamic programming over monotone slot paths, and Frobenius rounding of
// relaxed assignments onto that set.

#ifndef ORDALIGN_ASSIGNMENT_ORACLE_HPP_
#define ORDALIGN_ASSIGNMENT_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "ordalign/model.hpp"

namespace ordalign {

struct OracleResult {
  Matrix assignment;  // T x A vertex
  AssignmentPath path;
  double cost = 0.0;  // Tr(C^T Z) of the returned vertex
};

/// Prefix-optimal path costs and backpointers of the alignment recursion
///   P_t(k) = D_tk + min(P_{t-1}(k-1), P_{t-1}(k)).
/// Infeasible cells hold +inf.
struct DpTable {
  Matrix prefix_cost;                   // T x K
  std::vector<std::uint8_t> advanced;   // row-major T x K; 1 when (t,k) came from (t-1,k-1)

  bool came_from_advance(Index t, Index k) const {
    return advanced[static_cast<std::size_t>(t * prefix_cost.cols() + k)] != 0;
  }
};

/// D_tk = C_{t, a(k)}.
Matrix slot_cost_matrix(const Matrix& cost, const AnnotationSequence& annotation);

/// Fills the prefix table for a T x K slot-cost matrix (T >= K).
///
/// On an exact tie between the two predecessors the advance predecessor is
/// recorded. Backtracking from (T-1, K-1) then moves down a slot as early as
/// possible, which yields the optimal path that stays on low slots longest.
DpTable fill_dp_table(const Matrix& slot_costs);

/// Argmin over admissible Z of Tr(C^T Z) in O(TK). Throws ValidationError on
/// T < K, on a column count that does not cover the annotation labels, or on
/// NaN entries.
OracleResult lmo(const Matrix& cost, const AnnotationSequence& annotation);

/// Exhaustive reference for lmo. Throws ValidationError when the number of
/// admissible paths exceeds max_paths.
OracleResult brute_force_lmo(const Matrix& cost, const AnnotationSequence& annotation,
                             std::uint64_t max_paths = 1'000'000);

/// Nearest vertex in Frobenius distance. Every vertex has squared norm T, so
/// this is the linear problem with cost -Zbar.
Matrix round_assignment(const Matrix& zbar, const AnnotationSequence& annotation);

}  // namespace ordalign

#endif  // ORDALIGN_ASSIGNMENT_ORACLE_HPP_
