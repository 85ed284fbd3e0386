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

#ifndef ORDALIGN_TESTS_TEST_UTIL_HPP_
#define ORDALIGN_TESTS_TEST_UTIL_HPP_

#include <random>
#include <string>
#include <vector>

#include "ordalign/model.hpp"
#include "ordalign/pipeline.hpp"

namespace ordalign::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double lo = -1.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  }
  return m;
}

// Slots 0, 1, ..., K-1 on a label set with at least K labels.
inline AnnotationSequence distinct_annotation(Index k) {
  AnnotationSequence a;
  for (Index i = 0; i < k; ++i) {
    a.slots.push_back(i);
    a.source_slots.push_back(i);
  }
  return a;
}

// Alternating labels drawn from [0, num_labels), no two consecutive equal.
inline AnnotationSequence random_annotation(std::mt19937_64& rng, Index k, Index num_labels) {
  AnnotationSequence a;
  std::uniform_int_distribution<Index> pick(0, num_labels - 1);
  for (Index i = 0; i < k; ++i) {
    Index l = pick(rng);
    while (i > 0 && l == a.slots.back()) l = pick(rng);
    a.slots.push_back(l);
    a.source_slots.push_back(l);
  }
  return a;
}

// Random clip with ground truth drawn from a random admissible path.
inline Clip random_clip(std::mt19937_64& rng, const std::string& id, Index t, Index k, Index d,
                        Index num_labels) {
  Clip c;
  c.id = id;
  c.features = random_matrix(rng, t, d);
  c.annotation = random_annotation(rng, k, num_labels);
  return c;
}

inline std::vector<Clip> random_clips(std::mt19937_64& rng, const std::vector<Index>& lengths,
                                      Index k, Index d, Index num_labels) {
  std::vector<Clip> clips;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    clips.push_back(random_clip(rng, "c" + std::to_string(i), lengths[i], k, d, num_labels));
  }
  return clips;
}

inline Vector ones(Index n) { return Vector::Ones(n); }
inline Vector zeros(Index n) { return Vector::Zero(n); }

}  // namespace ordalign::testing

#endif  // ORDALIGN_TESTS_TEST_UTIL_HPP_
