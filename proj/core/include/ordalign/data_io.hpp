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

// Text file formats: JSON dataset manifests with tab-separated feature
// tables, tab-separated alignment files, JSON reports and classifier
// models, and line-delimited solver traces.

#ifndef ORDALIGN_DATA_IO_HPP_
#define ORDALIGN_DATA_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordalign/frank_wolfe.hpp"
#include "ordalign/model.hpp"
#include "ordalign/pipeline.hpp"

namespace ordalign {

struct ManifestSegment {
  std::string label;
  Index start = 0;
  Index end = 0;  // exclusive

  bool operator==(const ManifestSegment&) const = default;
};

struct ManifestClip {
  std::string id;
  std::string features_path;  // relative to the manifest directory unless absolute
  std::vector<std::string> annotations;
  std::optional<std::vector<ManifestSegment>> ground_truth;

  bool operator==(const ManifestClip&) const = default;
};

struct DatasetManifest {
  std::vector<std::string> labels;  // includes the background label
  PaddingMode padding = PaddingMode::kBetweenOnly;
  std::vector<ManifestClip> clips;

  bool operator==(const DatasetManifest&) const = default;
};

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Loads every feature table and validates clips against their annotations
/// and ground truth.
Dataset load_dataset(const DatasetManifest& manifest, const std::filesystem::path& base_dir);
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// One interval per line, delimiter-separated numeric columns. Blank lines
/// and lines starting with '#' are skipped.
Matrix read_features(const std::filesystem::path& path);
void write_features(const Matrix& features, const std::filesystem::path& path);

/// Header line then one record per interval: clip, interval, slot (1-based),
/// label name.
void write_alignment(std::span<const ClipAlignment> alignments, const Dataset& dataset,
                     const std::filesystem::path& path);
std::vector<ClipAlignment> read_alignment(const std::filesystem::path& path);

/// Run settings echoed into reports.
struct ReportContext {
  std::map<std::string, double> numbers;
  std::map<std::string, std::string> strings;
  std::uint64_t seed = 0;

  bool operator==(const ReportContext&) const = default;
};

void write_report(const EvalReport& report, const ReportContext& context, const LabelSet& labels,
                  const std::filesystem::path& path);
EvalReport read_report(const std::filesystem::path& path, const LabelSet& labels,
                       ReportContext* context = nullptr);

struct ClassifierModel {
  Classifier classifier;
  std::vector<std::string> labels;
  std::vector<std::string> test_clips;  // held-out clip ids
};

void write_classifier(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel read_classifier(const std::filesystem::path& path);

/// One JSON object per line: iteration, objective, gap, gamma.
void write_trace(const SolveResult& result, const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace ordalign

#endif  // ORDALIGN_DATA_IO_HPP_
