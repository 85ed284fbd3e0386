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

#include "ordalign/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "ordalign/errors.hpp"

namespace ordalign {

LabelSet::LabelSet(std::vector<std::string> names, Index background_index)
    : names_(std::move(names)), background_(background_index) {
  if (background_ < 0 || background_ >= size()) {
    throw ValidationError("background index out of range");
  }
  if (size() < 2) {
    throw ValidationError("a label set with background needs at least two labels");
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw ValidationError("empty label name");
    if (!seen.insert(n).second) throw ValidationError("duplicate label name '" + n + "'");
  }
}

LabelSet LabelSet::WithBackground(std::vector<std::string> names) {
  auto it = std::find(names.begin(), names.end(), kBackgroundName);
  Index bg = 0;
  if (it == names.end()) {
    bg = static_cast<Index>(names.size());
    names.emplace_back(kBackgroundName);
  } else {
    bg = static_cast<Index>(it - names.begin());
  }
  return LabelSet(std::move(names), bg);
}

std::optional<Index> LabelSet::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<Index>(i);
  }
  return std::nullopt;
}

Index LabelSet::index_of(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  throw ValidationError("unknown label '" + std::string(name) + "'");
}

AnnotationSequence build_annotation_sequence(std::span<const std::string> labels,
                                             const LabelSet& label_set,
                                             PaddingMode padding) {
  if (labels.empty()) throw ValidationError("annotation list is empty");
  AnnotationSequence seq;
  seq.source_slots.reserve(labels.size());
  for (const auto& name : labels) seq.source_slots.push_back(label_set.index_of(name));

  const Index bg = label_set.background();
  if (padding == PaddingMode::kBetweenAndEnds) seq.slots.push_back(bg);
  for (std::size_t i = 0; i < seq.source_slots.size(); ++i) {
    if (i > 0) seq.slots.push_back(bg);
    seq.slots.push_back(seq.source_slots[i]);
  }
  if (padding == PaddingMode::kBetweenAndEnds) seq.slots.push_back(bg);
  validate_annotation(seq, label_set);
  return seq;
}

void validate_annotation(const AnnotationSequence& annotation, const LabelSet& label_set) {
  if (annotation.slots.empty()) throw ValidationError("annotation sequence has no slots");
  for (Index k = 0; k < annotation.size(); ++k) {
    const Index l = annotation.label(k);
    if (l < 0 || l >= label_set.size()) {
      throw ValidationError("annotation slot " + std::to_string(k) + " has label index out of range");
    }
    if (k > 0 && annotation.label(k - 1) == l) {
      throw ValidationError("annotation slots " + std::to_string(k - 1) + " and " +
                            std::to_string(k) + " share label '" + label_set.name(l) + "'");
    }
  }
}

void validate_clip(const Clip& clip, const LabelSet& label_set) {
  const std::string where = "clip '" + clip.id + "': ";
  validate_annotation(clip.annotation, label_set);
  const Index T = clip.length();
  if (T < clip.annotation.size()) {
    throw ValidationError(where + "has " + std::to_string(T) + " intervals but " +
                          std::to_string(clip.annotation.size()) + " annotation slots");
  }
  if (!clip.features.allFinite()) throw ValidationError(where + "non-finite feature value");
  if (clip.ground_truth) {
    Index prev_end = 0;
    for (const auto& seg : *clip.ground_truth) {
      if (seg.label < 0 || seg.label >= label_set.size()) {
        throw ValidationError(where + "ground-truth label out of range");
      }
      if (seg.span.start < 0 || seg.span.end > T || seg.span.length() <= 0) {
        throw ValidationError(where + "ground-truth segment [" + std::to_string(seg.span.start) +
                              ", " + std::to_string(seg.span.end) + ") outside [0, " +
                              std::to_string(T) + ")");
      }
      if (seg.span.start < prev_end) {
        throw ValidationError(where + "ground-truth segments overlap or are out of order");
      }
      prev_end = seg.span.end;
    }
  }
  if (clip.supervised_assignment) {
    const auto& z = *clip.supervised_assignment;
    if (z.rows() != T || z.cols() != label_set.size()) {
      throw ValidationError(where + "supervised assignment has wrong shape");
    }
    matrix_to_path(z, clip.annotation);
  }
}

bool is_admissible(const AssignmentPath& path, Index num_slots) {
  if (path.slot.empty() || num_slots < 1) return false;
  if (path.slot.front() != 0 || path.slot.back() != num_slots - 1) return false;
  for (std::size_t t = 1; t < path.slot.size(); ++t) {
    const Index step = path.slot[t] - path.slot[t - 1];
    if (step != 0 && step != 1) return false;
  }
  return true;
}

Matrix path_to_matrix(const AssignmentPath& path, const AnnotationSequence& annotation,
                      Index num_labels) {
  if (!is_admissible(path, annotation.size())) {
    throw ValidationError("path is not admissible for " + std::to_string(annotation.size()) +
                          " slots");
  }
  Matrix z = Matrix::Zero(path.length(), num_labels);
  for (Index t = 0; t < path.length(); ++t) {
    const Index label = annotation.label(path.slot[static_cast<std::size_t>(t)]);
    if (label < 0 || label >= num_labels) throw ValidationError("label index out of range");
    z(t, label) = 1.0;
  }
  return z;
}

AssignmentPath matrix_to_path(const Matrix& assignment, const AnnotationSequence& annotation) {
  const Index T = assignment.rows();
  const Index K = annotation.size();
  auto fail = [](Index row, const std::string& why) -> ValidationError {
    return ValidationError("invalid assignment matrix at row " + std::to_string(row) + ": " + why);
  };
  if (T == 0) throw ValidationError("invalid assignment matrix: no rows");

  AssignmentPath path;
  path.slot.resize(static_cast<std::size_t>(T));
  Index k = 0;
  for (Index t = 0; t < T; ++t) {
    Index hot = -1;
    for (Index a = 0; a < assignment.cols(); ++a) {
      const double v = assignment(t, a);
      if (v == 1.0) {
        if (hot >= 0) throw fail(t, "more than one active label");
        hot = a;
      } else if (v != 0.0) {
        throw fail(t, "entry is neither 0 nor 1");
      }
    }
    if (hot < 0) throw fail(t, "no active label");
    if (t == 0) {
      if (annotation.label(0) != hot) throw fail(t, "first interval not on first annotation slot");
    } else if (hot != annotation.label(k)) {
      if (k + 1 < K && annotation.label(k + 1) == hot) {
        ++k;
      } else {
        throw fail(t, "label breaks annotation order");
      }
    }
    path.slot[static_cast<std::size_t>(t)] = k;
  }
  if (k != K - 1) throw fail(T - 1, "last interval not on last annotation slot");
  return path;
}

std::vector<Interval> slot_intervals(const AssignmentPath& path, Index num_slots) {
  std::vector<Interval> out(static_cast<std::size_t>(num_slots), Interval{0, 0});
  for (Index t = 0; t < path.length(); ++t) {
    auto& iv = out[static_cast<std::size_t>(path.slot[static_cast<std::size_t>(t)])];
    if (iv.length() == 0) iv.start = t;
    iv.end = t + 1;
  }
  return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n-k+i) is divisible by i since r = C(n-k+i-1, i-1).
    const std::uint64_t m = n - k + i;
    if (r > kMax / m) return kMax;
    r = r * m / i;
  }
  return r;
}

std::vector<AssignmentPath> enumerate_paths(Index num_intervals, Index num_slots,
                                            std::uint64_t max_paths) {
  if (num_slots < 1 || num_intervals < 1 || num_slots > num_intervals) return {};
  const auto count = binomial(static_cast<std::uint64_t>(num_intervals - 1),
                              static_cast<std::uint64_t>(num_slots - 1));
  if (count > max_paths) {
    throw ValidationError("enumerating " + std::to_string(count) + " paths exceeds cap of " +
                          std::to_string(max_paths));
  }
  std::vector<AssignmentPath> out;
  out.reserve(count);

  // Choose which of the T-1 steps advance, in lexicographic order of the
  // advance positions.
  const Index steps = num_intervals - 1;
  const Index advances = num_slots - 1;
  std::vector<Index> pos(static_cast<std::size_t>(advances));
  for (Index i = 0; i < advances; ++i) pos[static_cast<std::size_t>(i)] = i;
  while (true) {
    AssignmentPath p;
    p.slot.assign(static_cast<std::size_t>(num_intervals), 0);
    std::size_t next = 0;
    Index k = 0;
    for (Index t = 1; t < num_intervals; ++t) {
      if (next < pos.size() && pos[next] == t - 1) {
        ++k;
        ++next;
      }
      p.slot[static_cast<std::size_t>(t)] = k;
    }
    out.push_back(std::move(p));

    Index i = advances - 1;
    while (i >= 0 && pos[static_cast<std::size_t>(i)] == steps - advances + i) --i;
    if (i < 0) break;
    ++pos[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < advances; ++j) {
      pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

AssignmentPath stay_first_path(Index num_intervals, Index num_slots) {
  if (num_slots < 1 || num_slots > num_intervals) {
    throw ValidationError("no admissible path with " + std::to_string(num_intervals) +
                          " intervals and " + std::to_string(num_slots) + " slots");
  }
  AssignmentPath p;
  p.slot.resize(static_cast<std::size_t>(num_intervals));
  const Index stay = num_intervals - num_slots;
  for (Index t = 0; t < num_intervals; ++t) {
    p.slot[static_cast<std::size_t>(t)] = std::max<Index>(0, t - stay);
  }
  return p;
}

AssignmentPath uniform_path(Index num_intervals, Index num_slots) {
  if (num_slots < 1 || num_slots > num_intervals) {
    throw ValidationError("no admissible path with " + std::to_string(num_intervals) +
                          " intervals and " + std::to_string(num_slots) + " slots");
  }
  AssignmentPath p;
  p.slot.resize(static_cast<std::size_t>(num_intervals));
  for (Index t = 0; t < num_intervals; ++t) {
    p.slot[static_cast<std::size_t>(t)] = t * num_slots / num_intervals;
  }
  return p;
}

bool is_relaxed_assignment(const Matrix& zbar, double tol) {
  if (!zbar.allFinite()) return false;
  if ((zbar.array() < -tol).any() || (zbar.array() > 1.0 + tol).any()) return false;
  return ((zbar.rowwise().sum().array() - 1.0).abs() <= tol).all();
}

}  // namespace ordalign
