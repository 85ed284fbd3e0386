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

// Experiment orchestration: data splits, weak and semi-supervised alignment
// runs, baselines, interval scoring and per-class average precision, and
// hyper-parameter selection on the validation split.

#ifndef ORDALIGN_PIPELINE_HPP_
#define ORDALIGN_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordalign/diffrac_cost.hpp"
#include "ordalign/frank_wolfe.hpp"
#include "ordalign/model.hpp"

namespace ordalign {

struct Dataset {
  LabelSet labels;
  std::vector<Clip> clips;
};

struct SplitSpec {
  double sup_fraction = 0.0;
  double val_fraction = 0.05;
  double test_fraction = 0.10;
  std::uint64_t seed = 0;
  int n_repeats = 1;
};

/// Indices into Dataset::clips.
struct Split {
  std::vector<Index> sup;
  std::vector<Index> eval;
  std::vector<Index> val;
  std::vector<Index> test;
};

/// Seeded shuffle, then sup / val / test take round(fraction * N) clips each
/// and eval keeps the rest. Throws ValidationError on fractions outside
/// [0, 1] or summing above 1.
Split split_dataset(const Dataset& dataset, const SplitSpec& spec);

struct AlignConfig {
  double lambda = 1e-2;
  double kappa_bg = 0.0;   // linear penalty on the background column
  double bg_weight = 1.0;  // loss weight of the background column
  SolveOptions solve;
};

/// Class weights (1 except background) and penalty (0 except background).
Vector class_weights_for(const LabelSet& labels, const AlignConfig& config);
Vector kappa_for(const LabelSet& labels, const AlignConfig& config);

struct ClipAlignment {
  std::string clip_id;
  AssignmentPath path;

  bool operator==(const ClipAlignment&) const = default;
};

struct IntervalScore {
  std::string clip_id;
  Index slot = 0;   // 0-based annotation slot
  Index label = 0;  // ground-truth label
  double score = 0.0;

  bool operator==(const IntervalScore&) const = default;
};

struct EvalReport {
  std::vector<IntervalScore> per_interval_scores;
  double mean_jaccard = 0.0;
  std::map<std::string, double> per_class_jaccard;
  // Absent classes map to nullopt.
  std::optional<std::map<std::string, std::optional<double>>> per_class_ap;
  int failed_clips = 0;
  std::vector<std::string> failures;

  bool operator==(const EvalReport&) const = default;
};

/// |I n I*| / |I| for contiguous interval ranges. Throws ValidationError on
/// an empty prediction.
double jaccard_interval(const Interval& predicted, const Interval& truth);

/// Scores every non-background ground-truth segment of each aligned clip
/// against the prediction of the matching non-background slot (matched in
/// order). Clips that cannot be matched are counted in failed_clips and
/// skipped.
EvalReport evaluate_alignment(std::span<const ClipAlignment> alignments, const Dataset& dataset);

/// Per-interval ground-truth labels, background where no segment covers t.
std::vector<Index> interval_labels(const Clip& clip, const LabelSet& labels);

/// Fixed assignment matrix implied by a clip's time-stamped ground truth.
/// Throws ValidationError when it contradicts the annotation order.
Matrix supervised_assignment_from_ground_truth(const Clip& clip, const LabelSet& labels);

struct RunOutput {
  SolveResult solve;
  std::vector<Index> stacked;             // dataset indices in stack order
  std::vector<ClipAlignment> alignments;  // one per stacked clip
  Classifier classifier;
  EvalReport report;                      // Eval split only
};

/// Weak supervision: every clip of sup, eval and val is aligned from its
/// ordered annotation only.
RunOutput run_weak(const Dataset& dataset, const Split& split, const AlignConfig& config);

/// Same as run_weak, with sup clips fixed at their ground-truth assignment.
RunOutput run_semi(const Dataset& dataset, const Split& split, const AlignConfig& config);

/// Ridge regression of one-hot interval labels (from ground truth) onto the
/// features of the given clips.
Classifier train_sl_baseline(const Dataset& dataset, std::span<const Index> sup, double lambda);

/// Rounds each clip's classifier scores to the nearest admissible assignment.
std::vector<ClipAlignment> align_with_classifier(const Classifier& classifier,
                                                 const Dataset& dataset,
                                                 std::span<const Index> clips);

/// Equal-length slots in annotation order.
std::vector<ClipAlignment> uniform_alignment(const Dataset& dataset, std::span<const Index> clips);

struct NcutConfig {
  double alpha = 0.1;
  double beta = 1.0;
  Index min_distance = 5;
  SolveOptions solve;
};

/// Normalized-cut cost over sup, eval and val, optimized and rounded like
/// run_weak, evaluated on Eval.
RunOutput run_ncut_baseline(const Dataset& dataset, const Split& split, const NcutConfig& config,
                            const AlignConfig& penalty);

/// Average precision with precision taken at each positive, after a stable
/// sort on descending score. nullopt when there are no positives.
std::optional<double> average_precision(std::span<const double> scores,
                                        std::span<const bool> positives);

/// Scores every interval of the given clips and reports AP per non-background
/// class.
std::map<std::string, std::optional<double>> classify_and_ap(const Classifier& classifier,
                                                             const Dataset& dataset,
                                                             std::span<const Index> clips);

enum class AlignMode { kWeak, kSemi };

struct GridSpec {
  std::vector<double> lambdas;
  std::vector<double> kappa_bgs;
  std::vector<double> bg_weights;
};

struct GridPoint {
  AlignConfig config;
  double val_jaccard = 0.0;
};

struct GridResult {
  AlignConfig best;
  double best_val_jaccard = 0.0;
  std::vector<GridPoint> points;  // in grid order: lambda, then kappa_bg, then bg_weight
};

/// Runs every grid point and keeps the best mean Jaccard on Val; the first
/// point wins ties.
GridResult grid_search(const Dataset& dataset, const Split& split, const GridSpec& grid,
                       const AlignConfig& base, AlignMode mode);

}  // namespace ordalign

#endif  // ORDALIGN_PIPELINE_HPP_
