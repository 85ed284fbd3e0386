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

// Deterministic synthetic datasets: clips of class segments separated by
// background gaps, with Gaussian interval features around per-class means.

#ifndef ORDALIGN_SYNTHETIC_HPP_
#define ORDALIGN_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "ordalign/data_io.hpp"
#include "ordalign/pipeline.hpp"

namespace ordalign {

struct SyntheticConfig {
  int n_clips = 30;
  int num_labels = 5;  // including background
  int dim = 20;
  std::uint64_t seed = 0;
  std::pair<int, int> intervals_per_segment{1, 8};
  std::pair<int, int> segments_per_clip{2, 3};
  double class_mean_separation = 5.0;  // pairwise mean distance in units of noise_sigma
  double background_fraction = 0.3;
  double noise_sigma = 1.0;

  bool operator==(const SyntheticConfig&) const = default;
};

void validate_synthetic_config(const SyntheticConfig& config);

struct SyntheticDataset {
  DatasetManifest manifest;  // features paths are features/<id>.tsv
  Dataset dataset;
};

SyntheticDataset generate_synthetic(const SyntheticConfig& config);

/// Writes manifest.json and features/<id>.tsv under out_dir.
void write_synthetic(const SyntheticDataset& data, const std::filesystem::path& out_dir);

SyntheticConfig read_synthetic_config(const std::filesystem::path& path);
void write_synthetic_config(const SyntheticConfig& config, const std::filesystem::path& path);

}  // namespace ordalign

#endif  // ORDALIGN_SYNTHETIC_HPP_
