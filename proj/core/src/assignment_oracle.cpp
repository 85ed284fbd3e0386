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

#include "ordalign/assignment_oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ordalign/errors.hpp"

namespace ordalign {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_cost(const Matrix& cost, const AnnotationSequence& annotation) {
  if (annotation.size() < 1) throw ValidationError("annotation has no slots");
  if (cost.rows() < annotation.size()) {
    throw ValidationError("infeasible: " + std::to_string(cost.rows()) + " intervals for " +
                          std::to_string(annotation.size()) + " annotation slots");
  }
  for (Index k = 0; k < annotation.size(); ++k) {
    if (annotation.label(k) < 0 || annotation.label(k) >= cost.cols()) {
      throw ValidationError("annotation label outside the cost matrix columns");
    }
  }
  if (cost.array().isNaN().any()) throw ValidationError("cost matrix contains NaN");
}

}  // namespace

Matrix slot_cost_matrix(const Matrix& cost, const AnnotationSequence& annotation) {
  Matrix d(cost.rows(), annotation.size());
  for (Index k = 0; k < annotation.size(); ++k) d.col(k) = cost.col(annotation.label(k));
  return d;
}

DpTable fill_dp_table(const Matrix& slot_costs) {
  const Index T = slot_costs.rows();
  const Index K = slot_costs.cols();
  DpTable table;
  table.prefix_cost = Matrix::Constant(T, K, kInf);
  table.advanced.assign(static_cast<std::size_t>(T * K), 0);
  if (T == 0 || K == 0 || K > T) return table;

  table.prefix_cost(0, 0) = slot_costs(0, 0);
  for (Index t = 1; t < T; ++t) {
    // Reachable from (0,0): k <= t. Can still reach (T-1,K-1): K-1-k <= T-1-t.
    const Index lo = std::max<Index>(0, K - T + t);
    const Index hi = std::min(t, K - 1);
    for (Index k = lo; k <= hi; ++k) {
      const double stay = table.prefix_cost(t - 1, k);
      const double advance = k > 0 ? table.prefix_cost(t - 1, k - 1) : kInf;
      const bool from_advance = advance <= stay;
      table.prefix_cost(t, k) = slot_costs(t, k) + (from_advance ? advance : stay);
      table.advanced[static_cast<std::size_t>(t * K + k)] = from_advance ? 1 : 0;
    }
  }
  return table;
}

OracleResult lmo(const Matrix& cost, const AnnotationSequence& annotation) {
  check_cost(cost, annotation);
  const Index T = cost.rows();
  const Index K = annotation.size();
  const Matrix d = slot_cost_matrix(cost, annotation);
  const DpTable table = fill_dp_table(d);

  OracleResult out;
  out.path.slot.resize(static_cast<std::size_t>(T));
  Index k = K - 1;
  for (Index t = T - 1; t >= 0; --t) {
    out.path.slot[static_cast<std::size_t>(t)] = k;
    if (t > 0 && table.came_from_advance(t, k)) --k;
  }
  double total = 0.0;
  for (Index t = 0; t < T; ++t) total += d(t, out.path.slot[static_cast<std::size_t>(t)]);
  out.cost = total;
  out.assignment = path_to_matrix(out.path, annotation, cost.cols());
  return out;
}

OracleResult brute_force_lmo(const Matrix& cost, const AnnotationSequence& annotation,
                             std::uint64_t max_paths) {
  check_cost(cost, annotation);
  const Matrix d = slot_cost_matrix(cost, annotation);
  const auto paths = enumerate_paths(cost.rows(), annotation.size(), max_paths);

  OracleResult out;
  out.cost = kInf;
  for (const auto& p : paths) {
    double c = 0.0;
    for (Index t = 0; t < p.length(); ++t) c += d(t, p.slot[static_cast<std::size_t>(t)]);
    if (c < out.cost) {
      out.cost = c;
      out.path = p;
    }
  }
  out.assignment = path_to_matrix(out.path, annotation, cost.cols());
  return out;
}

Matrix round_assignment(const Matrix& zbar, const AnnotationSequence& annotation) {
  if (zbar.rows() > 0 && ((zbar.rowwise().sum().array() - 1.0).abs() > 1e-6).any()) {
    throw ValidationError("relaxed assignment rows do not sum to one");
  }
  return lmo(-zbar, annotation).assignment;
}

}  // namespace ordalign
