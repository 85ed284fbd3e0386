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

#include "ordalign/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "ordalign/assignment_oracle.hpp"
#include "ordalign/errors.hpp"

namespace ordalign {
namespace {

Index count_for(double fraction, std::size_t n) {
  return static_cast<Index>(std::llround(fraction * static_cast<double>(n)));
}

std::vector<Index> stack_order(const Split& split) {
  std::vector<Index> out;
  out.reserve(split.sup.size() + split.eval.size() + split.val.size());
  out.insert(out.end(), split.sup.begin(), split.sup.end());
  out.insert(out.end(), split.eval.begin(), split.eval.end());
  out.insert(out.end(), split.val.begin(), split.val.end());
  return out;
}

std::vector<Clip> gather(const Dataset& dataset, std::span<const Index> indices) {
  std::vector<Clip> out;
  out.reserve(indices.size());
  for (Index i : indices) out.push_back(dataset.clips.at(static_cast<std::size_t>(i)));
  return out;
}

std::vector<ClipAlignment> alignments_for(const std::vector<Clip>& clips, const SolveResult& r) {
  std::vector<ClipAlignment> out;
  out.reserve(clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) out.push_back({clips[i].id, r.paths[i]});
  return out;
}

std::vector<ClipAlignment> subset(const RunOutput& run, std::span<const Index> wanted) {
  std::vector<ClipAlignment> out;
  for (Index w : wanted) {
    auto it = std::find(run.stacked.begin(), run.stacked.end(), w);
    if (it != run.stacked.end()) {
      out.push_back(run.alignments[static_cast<std::size_t>(it - run.stacked.begin())]);
    }
  }
  return out;
}

std::vector<Segment> action_segments(const Clip& clip, const LabelSet& labels) {
  std::vector<Segment> out;
  if (!clip.ground_truth) return out;
  for (const auto& s : *clip.ground_truth) {
    if (s.label != labels.background()) out.push_back(s);
  }
  return out;
}

std::vector<Index> action_slots(const AnnotationSequence& annotation, const LabelSet& labels) {
  std::vector<Index> out;
  for (Index k = 0; k < annotation.size(); ++k) {
    if (annotation.label(k) != labels.background()) out.push_back(k);
  }
  return out;
}

RunOutput run_diffrac(const Dataset& dataset, const Split& split, const AlignConfig& config,
                      bool fix_sup) {
  RunOutput out;
  out.stacked = stack_order(split);
  if (out.stacked.empty()) throw ValidationError("no clips to align");
  std::vector<Clip> clips = gather(dataset, out.stacked);
  for (std::size_t i = 0; i < clips.size(); ++i) {
    clips[i].supervised_assignment.reset();
    if (fix_sup && i < split.sup.size()) {
      clips[i].supervised_assignment =
          supervised_assignment_from_ground_truth(clips[i], dataset.labels);
    }
  }
  const CostOperator op = build_cost_operator(clips, config.lambda,
                                              class_weights_for(dataset.labels, config),
                                              kappa_for(dataset.labels, config));
  out.solve = solve(op, clips, config.solve);
  out.alignments = alignments_for(clips, out.solve);
  out.classifier = recover_classifier(op, out.solve.zbar);
  const auto eval = subset(out, split.eval);
  out.report = evaluate_alignment(eval, dataset);
  return out;
}

}  // namespace

Split split_dataset(const Dataset& dataset, const SplitSpec& spec) {
  for (double f : {spec.sup_fraction, spec.val_fraction, spec.test_fraction}) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("split fractions must lie in [0, 1]");
  }
  if (spec.sup_fraction + spec.val_fraction + spec.test_fraction > 1.0 + 1e-12) {
    throw ValidationError("split fractions sum above 1");
  }
  const std::size_t n = dataset.clips.size();
  const Index n_sup = count_for(spec.sup_fraction, n);
  const Index n_val = count_for(spec.val_fraction, n);
  const Index n_test = count_for(spec.test_fraction, n);
  if (n_sup + n_val + n_test > static_cast<Index>(n)) {
    throw ValidationError("split sizes exceed the number of clips");
  }

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }

  Split split;
  auto take = [&, pos = std::size_t{0}](std::vector<Index>& part, Index count) mutable {
    part.assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                order.begin() + static_cast<std::ptrdiff_t>(pos) + count);
    std::sort(part.begin(), part.end());
    pos += static_cast<std::size_t>(count);
  };
  take(split.sup, n_sup);
  take(split.val, n_val);
  take(split.test, n_test);
  take(split.eval, static_cast<Index>(n) - n_sup - n_val - n_test);
  return split;
}

Vector class_weights_for(const LabelSet& labels, const AlignConfig& config) {
  Vector w = Vector::Ones(labels.size());
  w[labels.background()] = config.bg_weight;
  return w;
}

Vector kappa_for(const LabelSet& labels, const AlignConfig& config) {
  Vector k = Vector::Zero(labels.size());
  k[labels.background()] = config.kappa_bg;
  return k;
}

double jaccard_interval(const Interval& predicted, const Interval& truth) {
  if (predicted.length() <= 0) throw ValidationError("empty predicted interval");
  const Index lo = std::max(predicted.start, truth.start);
  const Index hi = std::min(predicted.end, truth.end);
  const Index overlap = std::max<Index>(0, hi - lo);
  return static_cast<double>(overlap) / static_cast<double>(predicted.length());
}

EvalReport evaluate_alignment(std::span<const ClipAlignment> alignments, const Dataset& dataset) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < dataset.clips.size(); ++i) by_id.emplace(dataset.clips[i].id, i);

  EvalReport report;
  std::map<std::string, std::pair<double, int>> per_class;
  double total = 0.0;
  for (const auto& al : alignments) {
    auto fail = [&](const std::string& why) {
      ++report.failed_clips;
      report.failures.push_back("clip '" + al.clip_id + "': " + why);
    };
    auto it = by_id.find(al.clip_id);
    if (it == by_id.end()) {
      fail("not in dataset");
      continue;
    }
    const Clip& clip = dataset.clips[it->second];
    if (!clip.ground_truth) {
      fail("no ground truth");
      continue;
    }
    const Index K = clip.annotation.size();
    if (al.path.length() != clip.length() || !is_admissible(al.path, K)) {
      fail("alignment is not an admissible path for this clip");
      continue;
    }
    const auto segments = action_segments(clip, dataset.labels);
    const auto slots = action_slots(clip.annotation, dataset.labels);
    if (segments.size() != slots.size()) {
      fail(std::to_string(slots.size()) + " action slots but " + std::to_string(segments.size()) +
           " ground-truth segments");
      continue;
    }
    bool labels_agree = true;
    for (std::size_t j = 0; j < slots.size(); ++j) {
      labels_agree = labels_agree && clip.annotation.label(slots[j]) == segments[j].label;
    }
    if (!labels_agree) {
      fail("ground-truth labels disagree with the annotation order");
      continue;
    }
    const auto predicted = slot_intervals(al.path, K);
    for (std::size_t j = 0; j < slots.size(); ++j) {
      const double s = jaccard_interval(predicted[static_cast<std::size_t>(slots[j])],
                                        segments[j].span);
      report.per_interval_scores.push_back({al.clip_id, slots[j], segments[j].label, s});
      auto& acc = per_class[dataset.labels.name(segments[j].label)];
      acc.first += s;
      acc.second += 1;
      total += s;
    }
  }
  if (!report.per_interval_scores.empty()) {
    report.mean_jaccard = total / static_cast<double>(report.per_interval_scores.size());
  }
  for (const auto& [name, acc] : per_class) report.per_class_jaccard[name] = acc.first / acc.second;
  return report;
}

std::vector<Index> interval_labels(const Clip& clip, const LabelSet& labels) {
  if (!clip.ground_truth) throw ValidationError("clip '" + clip.id + "' has no ground truth");
  std::vector<Index> out(static_cast<std::size_t>(clip.length()), labels.background());
  for (const auto& s : *clip.ground_truth) {
    for (Index t = s.span.start; t < s.span.end; ++t) out[static_cast<std::size_t>(t)] = s.label;
  }
  return out;
}

Matrix supervised_assignment_from_ground_truth(const Clip& clip, const LabelSet& labels) {
  const std::string where = "clip '" + clip.id + "': ";
  if (!clip.ground_truth) throw ValidationError(where + "supervised clip has no ground truth");
  const auto segments = action_segments(clip, labels);
  const auto slots = action_slots(clip.annotation, labels);
  if (segments.size() != slots.size() || segments.empty()) {
    throw ValidationError(where + "ground truth does not match the annotation");
  }
  const Index K = clip.annotation.size();
  const Index bg = labels.background();
  auto background_slot_after = [&](Index k) -> Index {
    // Background slot following slot k (k = -1 means before the first).
    const Index cand = k + 1;
    if (cand >= K || clip.annotation.label(cand) != bg) {
      throw ValidationError(where + "background interval where the annotation has none");
    }
    return cand;
  };

  AssignmentPath path;
  path.slot.resize(static_cast<std::size_t>(clip.length()));
  std::size_t j = 0;  // next segment not yet fully passed
  for (Index t = 0; t < clip.length(); ++t) {
    while (j < segments.size() && segments[j].span.end <= t) ++j;
    Index slot = 0;
    if (j < segments.size() && segments[j].span.contains(t)) {
      if (clip.annotation.label(slots[j]) != segments[j].label) {
        throw ValidationError(where + "ground-truth label order disagrees with the annotation");
      }
      slot = slots[j];
    } else {
      slot = background_slot_after(j == 0 ? -1 : slots[j - 1]);
    }
    path.slot[static_cast<std::size_t>(t)] = slot;
  }
  if (!is_admissible(path, K)) {
    throw ValidationError(where + "ground truth does not cover every annotation slot in order");
  }
  return path_to_matrix(path, clip.annotation, labels.size());
}

RunOutput run_weak(const Dataset& dataset, const Split& split, const AlignConfig& config) {
  return run_diffrac(dataset, split, config, false);
}

RunOutput run_semi(const Dataset& dataset, const Split& split, const AlignConfig& config) {
  return run_diffrac(dataset, split, config, true);
}

Classifier train_sl_baseline(const Dataset& dataset, std::span<const Index> sup, double lambda) {
  if (sup.empty()) throw ValidationError("supervised baseline needs a non-empty Sup split");
  const std::vector<Clip> clips = gather(dataset, sup);
  Index total = 0;
  for (const auto& c : clips) total += c.length();
  Matrix onehot = Matrix::Zero(total, dataset.labels.size());
  Index offset = 0;
  for (const auto& c : clips) {
    const auto labels = interval_labels(c, dataset.labels);
    for (Index t = 0; t < c.length(); ++t) onehot(offset + t, labels[static_cast<std::size_t>(t)]) = 1.0;
    offset += c.length();
  }
  const Vector ones = Vector::Ones(dataset.labels.size());
  const Vector zeros = Vector::Zero(dataset.labels.size());
  return recover_classifier(build_cost_operator(clips, lambda, ones, zeros), onehot);
}

std::vector<ClipAlignment> align_with_classifier(const Classifier& classifier,
                                                 const Dataset& dataset,
                                                 std::span<const Index> clips) {
  std::vector<ClipAlignment> out;
  out.reserve(clips.size());
  for (Index i : clips) {
    const Clip& c = dataset.clips.at(static_cast<std::size_t>(i));
    out.push_back({c.id, lmo(-classifier.scores(c.features), c.annotation).path});
  }
  return out;
}

std::vector<ClipAlignment> uniform_alignment(const Dataset& dataset, std::span<const Index> clips) {
  std::vector<ClipAlignment> out;
  out.reserve(clips.size());
  for (Index i : clips) {
    const Clip& c = dataset.clips.at(static_cast<std::size_t>(i));
    out.push_back({c.id, uniform_path(c.length(), c.annotation.size())});
  }
  return out;
}

RunOutput run_ncut_baseline(const Dataset& dataset, const Split& split, const NcutConfig& config,
                            const AlignConfig& penalty) {
  RunOutput out;
  out.stacked = stack_order(split);
  if (out.stacked.empty()) throw ValidationError("no clips to align");
  std::vector<Clip> clips = gather(dataset, out.stacked);
  for (auto& c : clips) c.supervised_assignment.reset();
  const CostOperator op =
      ncut_cost_operator(clips, config.alpha, config.beta, config.min_distance,
                         class_weights_for(dataset.labels, penalty), kappa_for(dataset.labels, penalty));
  out.solve = solve(op, clips, config.solve);
  out.alignments = alignments_for(clips, out.solve);
  const auto eval = subset(out, split.eval);
  out.report = evaluate_alignment(eval, dataset);
  return out;
}

std::optional<double> average_precision(std::span<const double> scores,
                                        std::span<const bool> positives) {
  if (scores.size() != positives.size()) throw ValidationError("score/label length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (positives[order[rank]]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  if (hits == 0) return std::nullopt;
  return sum / static_cast<double>(hits);
}

std::map<std::string, std::optional<double>> classify_and_ap(const Classifier& classifier,
                                                             const Dataset& dataset,
                                                             std::span<const Index> clips) {
  std::vector<Index> flat_labels;
  std::vector<Matrix> per_clip;
  Index total = 0;
  for (Index i : clips) {
    const Clip& c = dataset.clips.at(static_cast<std::size_t>(i));
    per_clip.push_back(classifier.scores(c.features));
    const auto labels = interval_labels(c, dataset.labels);
    flat_labels.insert(flat_labels.end(), labels.begin(), labels.end());
    total += c.length();
  }
  std::map<std::string, std::optional<double>> out;
  for (Index a = 0; a < dataset.labels.size(); ++a) {
    if (a == dataset.labels.background()) continue;
    std::vector<double> s;
    s.reserve(static_cast<std::size_t>(total));
    for (const auto& m : per_clip) {
      for (Index t = 0; t < m.rows(); ++t) s.push_back(m(t, a));
    }
    std::unique_ptr<bool[]> pos(new bool[flat_labels.size()]);
    for (std::size_t t = 0; t < flat_labels.size(); ++t) pos[t] = flat_labels[t] == a;
    out[dataset.labels.name(a)] =
        average_precision(s, std::span<const bool>(pos.get(), flat_labels.size()));
  }
  return out;
}

GridResult grid_search(const Dataset& dataset, const Split& split, const GridSpec& grid,
                       const AlignConfig& base, AlignMode mode) {
  if (grid.lambdas.empty() || grid.kappa_bgs.empty() || grid.bg_weights.empty()) {
    throw ValidationError("hyper-parameter grid is empty");
  }
  if (split.val.empty()) throw ValidationError("grid search needs a non-empty Val split");
  GridResult result;
  bool have_best = false;
  for (double lambda : grid.lambdas) {
    for (double kappa : grid.kappa_bgs) {
      for (double weight : grid.bg_weights) {
        AlignConfig cfg = base;
        cfg.lambda = lambda;
        cfg.kappa_bg = kappa;
        cfg.bg_weight = weight;
        const RunOutput run =
            mode == AlignMode::kSemi ? run_semi(dataset, split, cfg) : run_weak(dataset, split, cfg);
        const auto val = subset(run, split.val);
        const double score = evaluate_alignment(val, dataset).mean_jaccard;
        result.points.push_back({cfg, score});
        if (!have_best || score > result.best_val_jaccard) {
          result.best = cfg;
          result.best_val_jaccard = score;
          have_best = true;
        }
      }
    }
  }
  return result;
}

}  // namespace ordalign
