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

#include <set>
#include <string>
#include <vector>

#include "ordalign/errors.hpp"
#include "ordalign/model.hpp"
#include "test_util.hpp"

namespace ordalign {
namespace {

const LabelSet kWalkSit = LabelSet::WithBackground({"Walk", "SitDown", "Eat"});

std::vector<std::string> names_of(const AnnotationSequence& a, const LabelSet& ls) {
  std::vector<std::string> out;
  for (Index s : a.slots) out.push_back(ls.name(s));
  return out;
}

TEST(LabelSet, AppendsBackgroundWhenAbsent) {
  EXPECT_EQ(kWalkSit.size(), 4);
  EXPECT_EQ(kWalkSit.name(kWalkSit.background()), std::string(kBackgroundName));
  EXPECT_EQ(kWalkSit.background(), 3);
  const auto explicit_bg = LabelSet::WithBackground({std::string(kBackgroundName), "A"});
  EXPECT_EQ(explicit_bg.size(), 2);
  EXPECT_EQ(explicit_bg.background(), 0);
}

TEST(LabelSet, RejectsDuplicates) {
  EXPECT_THROW(LabelSet::WithBackground({"A", "A"}), ValidationError);
}

TEST(Annotation, BetweenOnlyInsertsBackgroundBetweenPairs) {
  const std::vector<std::string> src{"Walk", "SitDown"};
  const auto a = build_annotation_sequence(src, kWalkSit, PaddingMode::kBetweenOnly);
  EXPECT_EQ(names_of(a, kWalkSit),
            (std::vector<std::string>{"Walk", std::string(kBackgroundName), "SitDown"}));
  EXPECT_EQ(a.size(), 3);
  EXPECT_EQ(a.source_slots, (std::vector<Index>{0, 1}));
}

TEST(Annotation, SingleLabelUnchanged) {
  const std::vector<std::string> src{"Walk"};
  const auto a = build_annotation_sequence(src, kWalkSit, PaddingMode::kBetweenOnly);
  EXPECT_EQ(a.size(), 1);
  EXPECT_EQ(a.label(0), 0);
}

TEST(Annotation, BetweenAndEndsPadsBothSides) {
  const std::vector<std::string> src{"Walk", "Eat"};
  const auto a = build_annotation_sequence(src, kWalkSit, PaddingMode::kBetweenAndEnds);
  const std::string bg(kBackgroundName);
  EXPECT_EQ(names_of(a, kWalkSit), (std::vector<std::string>{bg, "Walk", bg, "Eat", bg}));
}

TEST(Annotation, UnknownLabelNamesOffender) {
  const std::vector<std::string> src{"Walk", "Dance"};
  try {
    build_annotation_sequence(src, kWalkSit, PaddingMode::kBetweenOnly);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("Dance"), std::string::npos);
  }
}

TEST(Annotation, EmptyRejected) {
  const std::vector<std::string> src;
  EXPECT_THROW(build_annotation_sequence(src, kWalkSit, PaddingMode::kBetweenOnly), ValidationError);
}

TEST(PathMatrix, IdentityAssignment) {
  const auto z = path_to_matrix({{0, 1}}, testing::distinct_annotation(2), 2);
  EXPECT_EQ(z, Matrix::Identity(2, 2));
}

TEST(PathMatrix, StayThenAdvanceToBackground) {
  AnnotationSequence a{{0, 1}, {0}};
  Matrix expected(3, 2);
  expected << 1, 0, 1, 0, 0, 1;
  EXPECT_EQ(path_to_matrix({{0, 0, 1}}, a, 2), expected);
  EXPECT_EQ(matrix_to_path(expected, a), (AssignmentPath{{0, 0, 1}}));
}

TEST(PathMatrix, RepeatedLabelSharesColumn) {
  AnnotationSequence a{{0, 1, 0}, {0, 0}};
  const auto z = path_to_matrix({{0, 1, 2}}, a, 2);
  EXPECT_EQ(z.col(0), (Vector(3) << 1, 0, 1).finished());
  EXPECT_EQ(matrix_to_path(z, a), (AssignmentPath{{0, 1, 2}}));
}

TEST(PathMatrix, InverseOfIdentity) {
  EXPECT_EQ(matrix_to_path(Matrix::Identity(2, 2), testing::distinct_annotation(2)),
            (AssignmentPath{{0, 1}}));
}

TEST(PathMatrix, BoundaryViolationReportsFirstRow) {
  Matrix z(2, 2);
  z << 0, 1, 1, 0;
  try {
    matrix_to_path(z, testing::distinct_annotation(2));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("row 0"), std::string::npos) << e.what();
  }
}

TEST(PathMatrix, NonOneHotRowRejected) {
  Matrix z(2, 2);
  z << 1, 0, 0.5, 0.5;
  EXPECT_THROW(matrix_to_path(z, testing::distinct_annotation(2)), ValidationError);
}

TEST(PathMatrix, UnfinishedPathRejected) {
  Matrix z(3, 2);
  z << 1, 0, 1, 0, 1, 0;
  EXPECT_THROW(matrix_to_path(z, testing::distinct_annotation(2)), ValidationError);
}

TEST(PathMatrix, InadmissiblePathRejected) {
  EXPECT_THROW(path_to_matrix({{0, 2, 2}}, testing::distinct_annotation(3), 3), ValidationError);
}

TEST(PathMatrix, BijectionForSmallLengths) {
  std::mt19937_64 rng(7);
  for (Index t = 1; t <= 10; ++t) {
    for (Index k = 1; k <= t; ++k) {
      const auto annotations = {testing::distinct_annotation(k), testing::random_annotation(rng, k, 3)};
      for (const auto& a : annotations) {
        const Index labels = k > 3 ? k : 3;
        const auto paths = enumerate_paths(t, k);
        std::set<std::vector<double>> seen;
        for (const auto& p : paths) {
          const Matrix z = path_to_matrix(p, a, labels);
          ASSERT_EQ(matrix_to_path(z, a), p);
          seen.insert(std::vector<double>(z.data(), z.data() + z.size()));
        }
        ASSERT_EQ(seen.size(), paths.size()) << "T=" << t << " K=" << k;
      }
    }
  }
}

TEST(EnumeratePaths, Examples) {
  EXPECT_EQ(enumerate_paths(5, 3).size(), 6u);
  const auto single = enumerate_paths(4, 1);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0], (AssignmentPath{{0, 0, 0, 0}}));
  const auto forced = enumerate_paths(4, 4);
  ASSERT_EQ(forced.size(), 1u);
  EXPECT_EQ(forced[0], (AssignmentPath{{0, 1, 2, 3}}));
  EXPECT_TRUE(enumerate_paths(3, 4).empty());
}

TEST(EnumeratePaths, CountMatchesBinomial) {
  for (Index t = 1; t <= 12; ++t) {
    for (Index k = 1; k <= 6; ++k) {
      const auto paths = enumerate_paths(t, k);
      const std::uint64_t expected = k > t ? 0 : binomial(static_cast<std::uint64_t>(t - 1),
                                                          static_cast<std::uint64_t>(k - 1));
      ASSERT_EQ(paths.size(), expected) << "T=" << t << " K=" << k;
      for (const auto& p : paths) ASSERT_TRUE(is_admissible(p, k));
    }
  }
}

TEST(EnumeratePaths, CapRefuses) {
  EXPECT_THROW(enumerate_paths(30, 10, 1000), ValidationError);
}

TEST(Binomial, KnownValues) {
  EXPECT_EQ(binomial(4, 2), 6u);
  EXPECT_EQ(binomial(11, 5), 462u);
  EXPECT_EQ(binomial(5, 0), 1u);
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(60, 30), 118264581564861424ull);
}

TEST(Paths, StayFirstAndUniformAreAdmissible) {
  EXPECT_EQ(stay_first_path(5, 3), (AssignmentPath{{0, 0, 0, 1, 2}}));
  for (Index t = 1; t <= 20; ++t) {
    for (Index k = 1; k <= t; ++k) {
      ASSERT_TRUE(is_admissible(stay_first_path(t, k), k));
      ASSERT_TRUE(is_admissible(uniform_path(t, k), k));
    }
  }
  EXPECT_EQ(uniform_path(6, 3), (AssignmentPath{{0, 0, 1, 1, 2, 2}}));
}

TEST(Paths, AdmissibilityRules) {
  EXPECT_TRUE(is_admissible({{0, 0, 1}}, 2));
  EXPECT_FALSE(is_admissible({{1, 1, 1}}, 2));
  EXPECT_FALSE(is_admissible({{0, 0, 0}}, 2));
  EXPECT_FALSE(is_admissible({{0, 2}}, 3));
  EXPECT_FALSE(is_admissible({{0, 1, 0, 1}}, 2));
}

TEST(Paths, SlotIntervalsAreHalfOpen) {
  const auto iv = slot_intervals({{0, 0, 1, 2, 2}}, 3);
  ASSERT_EQ(iv.size(), 3u);
  EXPECT_EQ(iv[0], (Interval{0, 2}));
  EXPECT_EQ(iv[1], (Interval{2, 3}));
  EXPECT_EQ(iv[2], (Interval{3, 5}));
}

TEST(RelaxedAssignment, ChecksRowsAndBounds) {
  Matrix z(2, 2);
  z << 0.5, 0.5, 0.2, 0.8;
  EXPECT_TRUE(is_relaxed_assignment(z));
  z(1, 0) = -0.1;
  z(1, 1) = 1.1;
  EXPECT_FALSE(is_relaxed_assignment(z));
  z << 0.5, 0.4, 0, 1;
  EXPECT_FALSE(is_relaxed_assignment(z));
}

TEST(Clip, ValidationRejectsShortClip) {
  Clip c;
  c.id = "short";
  c.features = Matrix::Zero(2, 3);
  c.annotation = AnnotationSequence{{0, 3, 1}, {0, 1}};
  EXPECT_THROW(validate_clip(c, kWalkSit), ValidationError);
  c.features = Matrix::Zero(3, 3);
  EXPECT_NO_THROW(validate_clip(c, kWalkSit));
}

TEST(Clip, ValidationRejectsNonFiniteFeatures) {
  Clip c;
  c.id = "nan";
  c.features = Matrix::Zero(3, 2);
  c.features(1, 1) = std::numeric_limits<double>::quiet_NaN();
  c.annotation = AnnotationSequence{{0}, {0}};
  EXPECT_THROW(validate_clip(c, kWalkSit), ValidationError);
}

}  // namespace
}  // namespace ordalign
