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

#include "ordalign/data_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "ordalign/errors.hpp"

namespace ordalign {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json parse_json(const fs::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path.string() + "' at byte " +
                          std::to_string(e.byte) + ": " + e.what());
  }
}

// Typed field access with a readable locus on failure.
template <typename T>
T field(const json& obj, const std::string& key, const std::string& locus) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(locus + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(locus + "." + key + ": wrong type");
  }
}

const char* padding_name(PaddingMode m) {
  return m == PaddingMode::kBetweenAndEnds ? "between_and_ends" : "between_only";
}

PaddingMode parse_padding(const std::string& s, const std::string& locus) {
  if (s == "between_only") return PaddingMode::kBetweenOnly;
  if (s == "between_and_ends") return PaddingMode::kBetweenAndEnds;
  throw ValidationError(locus + ".padding: unknown padding mode '" + s + "'");
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_delim = [](char c) { return c == '\t' || c == ' ' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_delim(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_delim(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_number(std::string_view token, const std::string& locus) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError(locus + ": not a number '" + std::string(token) + "'");
  }
  return v;
}

Index parse_index(std::string_view token, const std::string& locus) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ValidationError(locus + ": not an integer '" + std::string(token) + "'");
  }
  return static_cast<Index>(v);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buf, ptr);
}

DatasetManifest read_manifest(const fs::path& path) {
  const json j = parse_json(path);
  const std::string root = path.filename().string();
  DatasetManifest m;
  m.labels = field<std::vector<std::string>>(j, "labels", root);
  if (j.contains("padding")) m.padding = parse_padding(field<std::string>(j, "padding", root), root);
  const auto clips = field<json>(j, "clips", root);
  if (!clips.is_array()) throw ValidationError(root + ".clips: expected an array");
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const std::string locus = root + ".clips[" + std::to_string(i) + "]";
    const json& c = clips[i];
    ManifestClip mc;
    mc.id = field<std::string>(c, "id", locus);
    mc.features_path = field<std::string>(c, "features", locus);
    mc.annotations = field<std::vector<std::string>>(c, "annotations", locus);
    if (c.contains("ground_truth") && !c.at("ground_truth").is_null()) {
      std::vector<ManifestSegment> gt;
      const json& segs = c.at("ground_truth");
      if (!segs.is_array()) throw ValidationError(locus + ".ground_truth: expected an array");
      for (std::size_t s = 0; s < segs.size(); ++s) {
        const std::string sl = locus + ".ground_truth[" + std::to_string(s) + "]";
        gt.push_back({field<std::string>(segs[s], "label", sl), field<Index>(segs[s], "start", sl),
                      field<Index>(segs[s], "end", sl)});
      }
      mc.ground_truth = std::move(gt);
    }
    m.clips.push_back(std::move(mc));
  }
  return m;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
  json j;
  j["labels"] = manifest.labels;
  j["padding"] = padding_name(manifest.padding);
  j["clips"] = json::array();
  for (const auto& c : manifest.clips) {
    json jc;
    jc["id"] = c.id;
    jc["features"] = c.features_path;
    jc["annotations"] = c.annotations;
    if (c.ground_truth) {
      jc["ground_truth"] = json::array();
      for (const auto& s : *c.ground_truth) {
        jc["ground_truth"].push_back({{"label", s.label}, {"start", s.start}, {"end", s.end}});
      }
    }
    j["clips"].push_back(std::move(jc));
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

Dataset load_dataset(const DatasetManifest& manifest, const fs::path& base_dir) {
  Dataset ds;
  ds.labels = LabelSet::WithBackground(manifest.labels);
  for (const auto& mc : manifest.clips) {
    Clip clip;
    clip.id = mc.id;
    fs::path fp(mc.features_path);
    if (fp.is_relative()) fp = base_dir / fp;
    if (!fs::exists(fp)) {
      throw IoError("clip '" + mc.id + "': feature file '" + fp.string() + "' does not exist");
    }
    clip.features = read_features(fp);
    clip.annotation = build_annotation_sequence(mc.annotations, ds.labels, manifest.padding);
    if (mc.ground_truth) {
      std::vector<Segment> gt;
      for (const auto& s : *mc.ground_truth) {
        gt.push_back({ds.labels.index_of(s.label), Interval{s.start, s.end}});
      }
      clip.ground_truth = std::move(gt);
    }
    validate_clip(clip, ds.labels);
    if (!ds.clips.empty() && ds.clips.front().dim() != clip.dim()) {
      throw ValidationError("clip '" + clip.id + "' has feature dimension " +
                            std::to_string(clip.dim()) + ", expected " +
                            std::to_string(ds.clips.front().dim()));
    }
    ds.clips.push_back(std::move(clip));
  }
  return ds;
}

Dataset load_dataset(const fs::path& manifest_path) {
  return load_dataset(read_manifest(manifest_path), manifest_path.parent_path());
}

Matrix read_features(const fs::path& path) {
  auto in = open_in(path);
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    const std::string locus = path.string() + ":" + std::to_string(lineno);
    if (cols < 0) cols = static_cast<Index>(fields.size());
    if (static_cast<Index>(fields.size()) != cols) {
      throw ValidationError(locus + ": expected " + std::to_string(cols) + " columns, found " +
                            std::to_string(fields.size()));
    }
    for (auto f : fields) values.push_back(parse_number(f, locus));
    ++rows;
  }
  if (rows == 0) throw ValidationError(path.string() + ": no feature rows");
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = values[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

void write_features(const Matrix& features, const fs::path& path) {
  auto out = open_out(path);
  std::string line;
  for (Index r = 0; r < features.rows(); ++r) {
    line.clear();
    for (Index c = 0; c < features.cols(); ++c) {
      if (c > 0) line += '\t';
      line += format_double(features(r, c));
    }
    line += '\n';
    out << line;
  }
  finish(out, path);
}

void write_alignment(std::span<const ClipAlignment> alignments, const Dataset& dataset,
                     const fs::path& path) {
  std::map<std::string, const Clip*> by_id;
  for (const auto& c : dataset.clips) by_id.emplace(c.id, &c);
  auto out = open_out(path);
  out << "clip\tinterval\tslot\tlabel\n";
  for (const auto& al : alignments) {
    auto it = by_id.find(al.clip_id);
    if (it == by_id.end()) throw ValidationError("alignment for unknown clip '" + al.clip_id + "'");
    const Clip& clip = *it->second;
    for (Index t = 0; t < al.path.length(); ++t) {
      const Index k = al.path.slot[static_cast<std::size_t>(t)];
      out << al.clip_id << '\t' << t << '\t' << (k + 1) << '\t'
          << dataset.labels.name(clip.annotation.label(k)) << '\n';
    }
  }
  finish(out, path);
}

std::vector<ClipAlignment> read_alignment(const fs::path& path) {
  auto in = open_in(path);
  std::vector<ClipAlignment> out;
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("clip\t", 0) == 0) continue;
    }
    const std::string locus = path.string() + ":" + std::to_string(lineno);
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 4) {
      throw ValidationError(locus + ": expected 4 tab-separated fields, found " +
                            std::to_string(fields.size()));
    }
    const std::string id(fields[0]);
    const Index t = parse_index(fields[1], locus + " (interval)");
    const Index slot = parse_index(fields[2], locus + " (slot)");
    if (slot < 1) throw ValidationError(locus + " (slot): slots are 1-based");
    if (out.empty() || out.back().clip_id != id) {
      for (const auto& prev : out) {
        if (prev.clip_id == id) throw ValidationError(locus + ": records of clip '" + id + "' are not contiguous");
      }
      out.push_back({id, {}});
    }
    auto& path_slots = out.back().path.slot;
    if (t != static_cast<Index>(path_slots.size())) {
      throw ValidationError(locus + " (interval): expected " + std::to_string(path_slots.size()));
    }
    path_slots.push_back(slot - 1);
  }
  return out;
}

void write_report(const EvalReport& report, const ReportContext& context, const LabelSet& labels,
                  const fs::path& path) {
  json j;
  j["seed"] = context.seed;
  json cfg = json::object();
  for (const auto& [k, v] : context.numbers) cfg[k] = v;
  for (const auto& [k, v] : context.strings) cfg[k] = v;
  j["config"] = std::move(cfg);
  j["mean_jaccard"] = report.mean_jaccard;
  j["per_class_jaccard"] = report.per_class_jaccard;
  j["per_interval_scores"] = json::array();
  for (const auto& s : report.per_interval_scores) {
    j["per_interval_scores"].push_back(
        {{"clip", s.clip_id}, {"slot", s.slot + 1}, {"label", labels.name(s.label)}, {"score", s.score}});
  }
  if (report.per_class_ap) {
    json ap = json::object();
    for (const auto& [k, v] : *report.per_class_ap) ap[k] = v ? json(*v) : json(nullptr);
    j["per_class_ap"] = std::move(ap);
  }
  j["failed_clips"] = report.failed_clips;
  j["failures"] = report.failures;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

EvalReport read_report(const fs::path& path, const LabelSet& labels, ReportContext* context) {
  const json j = parse_json(path);
  const std::string root = path.filename().string();
  EvalReport r;
  r.mean_jaccard = field<double>(j, "mean_jaccard", root);
  r.per_class_jaccard = field<std::map<std::string, double>>(j, "per_class_jaccard", root);
  const auto scores = field<json>(j, "per_interval_scores", root);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const std::string locus = root + ".per_interval_scores[" + std::to_string(i) + "]";
    r.per_interval_scores.push_back({field<std::string>(scores[i], "clip", locus),
                                     field<Index>(scores[i], "slot", locus) - 1,
                                     labels.index_of(field<std::string>(scores[i], "label", locus)),
                                     field<double>(scores[i], "score", locus)});
  }
  if (j.contains("per_class_ap")) {
    std::map<std::string, std::optional<double>> ap;
    for (const auto& [k, v] : j.at("per_class_ap").items()) {
      ap[k] = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    }
    r.per_class_ap = std::move(ap);
  }
  r.failed_clips = field<int>(j, "failed_clips", root);
  r.failures = field<std::vector<std::string>>(j, "failures", root);
  if (context) {
    *context = ReportContext{};
    context->seed = field<std::uint64_t>(j, "seed", root);
    const json config = field<json>(j, "config", root);
    for (const auto& [k, v] : config.items()) {
      if (v.is_string()) {
        context->strings[k] = v.get<std::string>();
      } else {
        context->numbers[k] = v.get<double>();
      }
    }
  }
  return r;
}

void write_classifier(const ClassifierModel& model, const fs::path& path) {
  const auto& c = model.classifier;
  json j;
  j["labels"] = model.labels;
  j["dim"] = c.weights.rows();
  json w = json::array();
  for (Index r = 0; r < c.weights.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(c.weights.cols()));
    for (Index a = 0; a < c.weights.cols(); ++a) row[static_cast<std::size_t>(a)] = c.weights(r, a);
    w.push_back(row);
  }
  j["weights"] = std::move(w);
  std::vector<double> b(static_cast<std::size_t>(c.bias.size()));
  for (Index a = 0; a < c.bias.size(); ++a) b[static_cast<std::size_t>(a)] = c.bias[a];
  j["bias"] = b;
  j["test_clips"] = model.test_clips;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

ClassifierModel read_classifier(const fs::path& path) {
  const json j = parse_json(path);
  const std::string root = path.filename().string();
  ClassifierModel m;
  m.labels = field<std::vector<std::string>>(j, "labels", root);
  const auto rows = field<std::vector<std::vector<double>>>(j, "weights", root);
  const auto bias = field<std::vector<double>>(j, "bias", root);
  const Index dim = field<Index>(j, "dim", root);
  const Index A = static_cast<Index>(m.labels.size());
  if (static_cast<Index>(rows.size()) != dim || static_cast<Index>(bias.size()) != A) {
    throw ValidationError(root + ": weight/bias shape does not match labels and dim");
  }
  m.classifier.weights.resize(dim, A);
  for (Index r = 0; r < dim; ++r) {
    if (static_cast<Index>(rows[static_cast<std::size_t>(r)].size()) != A) {
      throw ValidationError(root + ".weights[" + std::to_string(r) + "]: expected " +
                            std::to_string(A) + " entries");
    }
    for (Index a = 0; a < A; ++a) m.classifier.weights(r, a) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)];
  }
  m.classifier.bias.resize(A);
  for (Index a = 0; a < A; ++a) m.classifier.bias[a] = bias[static_cast<std::size_t>(a)];
  if (j.contains("test_clips")) m.test_clips = field<std::vector<std::string>>(j, "test_clips", root);
  return m;
}

void write_trace(const SolveResult& result, const fs::path& path) {
  auto out = open_out(path);
  for (std::size_t k = 0; k < result.objective_history.size(); ++k) {
    json rec;
    rec["iteration"] = k;
    rec["objective"] = result.objective_history[k];
    rec["gap"] = k < result.gap_history.size() ? json(result.gap_history[k]) : json(nullptr);
    rec["gamma"] = k < result.step_history.size() ? json(result.step_history[k]) : json(nullptr);
    out << rec.dump() << '\n';
  }
  finish(out, path);
}

}  // namespace ordalign
