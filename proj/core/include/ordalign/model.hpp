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

// Domain types for ordered temporal assignment: label sets, annotation
// sequences, clips, and the two equivalent representations of an admissible
// assignment (a monotone slot path and a T x A indicator matrix).

#ifndef ORDALIGN_MODEL_HPP_
#define ORDALIGN_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ordalign {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Name of the distinguished background label.
inline constexpr std::string_view kBackgroundName = "∅";

class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::vector<std::string> names, Index background_index);

  /// Builds a label set from action names, appending the background label
  /// when it is not already listed.
  static LabelSet WithBackground(std::vector<std::string> names);

  Index size() const { return static_cast<Index>(names_.size()); }
  Index background() const { return background_; }
  const std::string& name(Index label) const { return names_.at(static_cast<std::size_t>(label)); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<Index> find(std::string_view name) const;
  /// Throws ValidationError naming the label when it is unknown.
  Index index_of(std::string_view name) const;

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<std::string> names_;
  Index background_ = 0;
};

enum class PaddingMode { kBetweenOnly, kBetweenAndEnds };

/// Ordered annotation slots. slots[k] is the label of slot k (0-based);
/// source_slots holds the labels before background insertion.
struct AnnotationSequence {
  std::vector<Index> slots;
  std::vector<Index> source_slots;

  Index size() const { return static_cast<Index>(slots.size()); }
  Index label(Index k) const { return slots[static_cast<std::size_t>(k)]; }

  bool operator==(const AnnotationSequence&) const = default;
};

AnnotationSequence build_annotation_sequence(std::span<const std::string> labels,
                                             const LabelSet& label_set,
                                             PaddingMode padding);

/// Rejects empty sequences and consecutive slots sharing a label (which
/// would break the path/matrix bijection).
void validate_annotation(const AnnotationSequence& annotation, const LabelSet& label_set);

/// Half-open interval range [start, end).
struct Interval {
  Index start = 0;
  Index end = 0;

  Index length() const { return end - start; }
  bool contains(Index t) const { return start <= t && t < end; }
  bool operator==(const Interval&) const = default;
};

/// Time-stamped ground-truth segment.
struct Segment {
  Index label = 0;
  Interval span;

  bool operator==(const Segment&) const = default;
};

struct Clip {
  std::string id;
  Matrix features;  // T x d, one row per interval
  AnnotationSequence annotation;
  std::optional<std::vector<Segment>> ground_truth;
  std::optional<Matrix> supervised_assignment;  // fixes this clip's rows when present

  Index length() const { return features.rows(); }
  Index dim() const { return features.cols(); }
};

void validate_clip(const Clip& clip, const LabelSet& label_set);

/// Admissible assignment: slot[t] is the 0-based annotation slot of interval
/// t. Starts at slot 0, ends at slot K-1, advances by at most one per step.
struct AssignmentPath {
  std::vector<Index> slot;

  Index length() const { return static_cast<Index>(slot.size()); }
  bool operator==(const AssignmentPath&) const = default;
};

bool is_admissible(const AssignmentPath& path, Index num_slots);

/// Puts a 1 at (t, a(m_t)) for every t.
Matrix path_to_matrix(const AssignmentPath& path, const AnnotationSequence& annotation,
                      Index num_labels);

/// Inverse of path_to_matrix. Throws ValidationError naming the first row
/// that is not one-hot or breaks the ordering/boundary constraints.
AssignmentPath matrix_to_path(const Matrix& assignment, const AnnotationSequence& annotation);

/// Interval range covered by each slot of a path.
std::vector<Interval> slot_intervals(const AssignmentPath& path, Index num_slots);

/// Every admissible path for (T, K). Returns an empty list when K > T and
/// throws ValidationError when the count would exceed max_paths.
std::vector<AssignmentPath> enumerate_paths(Index num_intervals, Index num_slots,
                                            std::uint64_t max_paths = 1'000'000);

/// The deterministic tie-break vertex: stays on slot 0 as long as possible,
/// then advances once per interval.
AssignmentPath stay_first_path(Index num_intervals, Index num_slots);

/// Equal-length slots in annotation order: slot(t) = floor(t K / T).
AssignmentPath uniform_path(Index num_intervals, Index num_slots);

/// binomial(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Checks the relaxed-assignment invariants: entries in [0, 1] and unit
/// row sums, both within tol.
bool is_relaxed_assignment(const Matrix& zbar, double tol = 1e-9);

}  // namespace ordalign

#endif  // ORDALIGN_MODEL_HPP_
