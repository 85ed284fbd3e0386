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

#include "ordalign/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include <json.hpp>

#include "ordalign/errors.hpp"

namespace ordalign {
namespace fs = std::filesystem;

void validate_synthetic_config(const SyntheticConfig& c) {
  if (c.n_clips < 1) throw ValidationError("n_clips must be at least 1");
  if (c.num_labels < 2) throw ValidationError("A must be at least 2 (one action plus background)");
  if (c.dim < c.num_labels) throw ValidationError("d must be at least A so class means are orthogonal");
  auto check_range = [](std::pair<int, int> r, const char* name) {
    if (r.first < 1 || r.second < r.first) {
      throw ValidationError(std::string(name) + " must be a non-empty range of positive counts");
    }
  };
  check_range(c.intervals_per_segment, "intervals_per_segment");
  check_range(c.segments_per_clip, "segments_per_clip");
  if (!(c.class_mean_separation >= 0.0)) throw ValidationError("class_mean_separation must be >= 0");
  if (!(c.background_fraction >= 0.0 && c.background_fraction < 1.0)) {
    throw ValidationError("background_fraction must lie in [0, 1)");
  }
  if (!(c.noise_sigma > 0.0)) throw ValidationError("noise_sigma must be positive");
}

SyntheticDataset generate_synthetic(const SyntheticConfig& config) {
  validate_synthetic_config(config);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, config.noise_sigma);
  std::uniform_int_distribution<int> n_segments(config.segments_per_clip.first,
                                                config.segments_per_clip.second);
  // Log-uniform lengths: short and long segments are equally likely to share
  // a clip, so equal-length segmentation is a weak guess.
  std::uniform_real_distribution<double> log_length(
      std::log(static_cast<double>(config.intervals_per_segment.first)),
      std::log(static_cast<double>(config.intervals_per_segment.second) + 1.0));
  auto seg_length = [&](std::mt19937_64& g) {
    const int len = static_cast<int>(std::floor(std::exp(log_length(g))));
    return std::clamp(len, config.intervals_per_segment.first, config.intervals_per_segment.second);
  };
  std::uniform_real_distribution<double> jitter(0.0, 2.0);

  const int num_actions = config.num_labels - 1;
  std::vector<std::string> names;
  for (int a = 1; a <= num_actions; ++a) names.push_back("action_" + std::to_string(a));
  names.emplace_back(kBackgroundName);
  const Index bg = num_actions;
  std::uniform_int_distribution<int> pick_action(0, num_actions - 1);

  // Orthogonal means scaled so that every pair is separation * sigma apart.
  const double scale = config.class_mean_separation * config.noise_sigma / std::sqrt(2.0);
  auto class_mean = [&](Index label) {
    RowVector m = RowVector::Zero(config.dim);
    m[label] = scale;
    return m;
  };

  double mean_segment = 0.0;
  {
    const int lo = config.intervals_per_segment.first;
    const int hi = config.intervals_per_segment.second;
    const double span = std::log(hi + 1.0) - std::log(static_cast<double>(lo));
    for (int len = lo; len <= hi; ++len) {
      mean_segment += len * (std::log(len + 1.0) - std::log(static_cast<double>(len))) / span;
    }
  }
  const double f = config.background_fraction;

  SyntheticDataset out;
  out.manifest.labels = names;
  out.manifest.padding = PaddingMode::kBetweenOnly;
  out.dataset.labels = LabelSet(names, bg);

  for (int n = 0; n < config.n_clips; ++n) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof(id_buf), "clip_%04d", n);
    const std::string id(id_buf);

    const int segments = n_segments(rng);
    // Mean gap length that makes background about f of the clip.
    const double mean_gap =
        segments > 1 ? f * segments * mean_segment / ((1.0 - f) * (segments - 1)) : 0.0;

    std::vector<Segment> truth;
    std::vector<Index> labels_per_interval;
    for (int s = 0; s < segments; ++s) {
      if (s > 0) {
        const int gap = std::max(1, static_cast<int>(std::lround(mean_gap * jitter(rng))));
        labels_per_interval.insert(labels_per_interval.end(), static_cast<std::size_t>(gap), bg);
      }
      const Index label = pick_action(rng);
      const int len = seg_length(rng);
      const Index start = static_cast<Index>(labels_per_interval.size());
      labels_per_interval.insert(labels_per_interval.end(), static_cast<std::size_t>(len), label);
      truth.push_back({label, Interval{start, start + len}});
    }

    Clip clip;
    clip.id = id;
    clip.features.resize(static_cast<Index>(labels_per_interval.size()), config.dim);
    for (Index t = 0; t < clip.features.rows(); ++t) {
      clip.features.row(t) = class_mean(labels_per_interval[static_cast<std::size_t>(t)]);
      for (Index j = 0; j < config.dim; ++j) clip.features(t, j) += noise(rng);
    }

    ManifestClip mc;
    mc.id = id;
    mc.features_path = "features/" + id + ".tsv";
    std::vector<ManifestSegment> gt;
    for (const auto& s : truth) {
      mc.annotations.push_back(names[static_cast<std::size_t>(s.label)]);
      gt.push_back({names[static_cast<std::size_t>(s.label)], s.span.start, s.span.end});
    }
    mc.ground_truth = std::move(gt);

    clip.annotation =
        build_annotation_sequence(mc.annotations, out.dataset.labels, out.manifest.padding);
    clip.ground_truth = std::move(truth);
    validate_clip(clip, out.dataset.labels);

    out.manifest.clips.push_back(std::move(mc));
    out.dataset.clips.push_back(std::move(clip));
  }
  return out;
}

void write_synthetic(const SyntheticDataset& data, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir / "features", ec);
  if (ec) throw IoError("cannot create '" + (out_dir / "features").string() + "': " + ec.message());
  for (std::size_t i = 0; i < data.dataset.clips.size(); ++i) {
    write_features(data.dataset.clips[i].features, out_dir / data.manifest.clips[i].features_path);
  }
  write_manifest(data.manifest, out_dir / "manifest.json");
}

SyntheticConfig read_synthetic_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path.string() + "' at byte " +
                          std::to_string(e.byte));
  }
  SyntheticConfig c;
  try {
    c.n_clips = j.value("n_clips", c.n_clips);
    c.num_labels = j.value("A", c.num_labels);
    c.dim = j.value("d", c.dim);
    c.seed = j.value("seed", c.seed);
    if (j.contains("intervals_per_segment")) {
      const auto r = j.at("intervals_per_segment").get<std::vector<int>>();
      if (r.size() != 2) throw ValidationError("intervals_per_segment: expected [min, max]");
      c.intervals_per_segment = {r[0], r[1]};
    }
    if (j.contains("segments_per_clip")) {
      const auto r = j.at("segments_per_clip").get<std::vector<int>>();
      if (r.size() != 2) throw ValidationError("segments_per_clip: expected [min, max]");
      c.segments_per_clip = {r[0], r[1]};
    }
    c.class_mean_separation = j.value("class_mean_separation", c.class_mean_separation);
    c.background_fraction = j.value("background_fraction", c.background_fraction);
    c.noise_sigma = j.value("noise_sigma", c.noise_sigma);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  validate_synthetic_config(c);
  return c;
}

void write_synthetic_config(const SyntheticConfig& c, const fs::path& path) {
  nlohmann::json j;
  j["n_clips"] = c.n_clips;
  j["A"] = c.num_labels;
  j["d"] = c.dim;
  j["seed"] = c.seed;
  j["intervals_per_segment"] = {c.intervals_per_segment.first, c.intervals_per_segment.second};
  j["segments_per_clip"] = {c.segments_per_clip.first, c.segments_per_clip.second};
  j["class_mean_separation"] = c.class_mean_separation;
  j["background_fraction"] = c.background_fraction;
  j["noise_sigma"] = c.noise_sigma;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

}  // namespace ordalign
