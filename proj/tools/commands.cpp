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

#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordalign/data_io.hpp"
#include "ordalign/errors.hpp"
#include "ordalign/pipeline.hpp"
#include "ordalign/synthetic.hpp"

namespace ordalign::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SplitFlags {
  double sup_fraction = 0.0;
  double val_fraction = 0.05;
  double test_fraction = 0.10;
  std::uint64_t seed = 0;
};

struct SolveFlags {
  double gap_tol = 1e-4;
  int max_iter = 500;
  std::string step_rule = "linesearch";
};

void add_split_flags(CLI::App* cmd, SplitFlags& f) {
  cmd->add_option("--sup-fraction", f.sup_fraction, "Fraction of clips with time-stamped supervision")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--val-fraction", f.val_fraction, "Fraction of clips used for validation")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--test-fraction", f.test_fraction, "Fraction of clips held out for classification")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", f.seed, "Split seed");
}

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--gap-tol", f.gap_tol, "Duality-gap stopping tolerance");
  cmd->add_option("--max-iter", f.max_iter, "Maximum Frank-Wolfe iterations");
  cmd->add_option("--step-rule", f.step_rule, "Step rule")
      ->check(CLI::IsMember({"linesearch", "universal"}));
}

SplitSpec to_split_spec(const SplitFlags& f, std::uint64_t seed) {
  SplitSpec s;
  s.sup_fraction = f.sup_fraction;
  s.val_fraction = f.val_fraction;
  s.test_fraction = f.test_fraction;
  s.seed = seed;
  return s;
}

SolveOptions to_solve_options(const SolveFlags& f) {
  SolveOptions o;
  o.gap_tol = f.gap_tol;
  o.max_iter = f.max_iter;
  o.step_rule = f.step_rule == "universal" ? StepRule::kUniversal : StepRule::kExactLineSearch;
  return o;
}

std::vector<ClipAlignment> pick(const RunOutput& run, const std::vector<Index>& wanted) {
  std::vector<ClipAlignment> out;
  for (Index w : wanted) {
    for (std::size_t i = 0; i < run.stacked.size(); ++i) {
      if (run.stacked[i] == w) out.push_back(run.alignments[i]);
    }
  }
  return out;
}

std::vector<std::string> clip_ids(const Dataset& ds, const std::vector<Index>& idx) {
  std::vector<std::string> out;
  for (Index i : idx) out.push_back(ds.clips[static_cast<std::size_t>(i)].id);
  return out;
}

void write_json(const json& j, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in '" + path.string() + "' at byte " +
                          std::to_string(e.byte));
  }
}

json ap_json(const std::map<std::string, std::optional<double>>& ap) {
  json j = json::object();
  for (const auto& [k, v] : ap) j[k] = v ? json(*v) : json(nullptr);
  return j;
}

std::optional<double> mean_ap(const std::map<std::string, std::optional<double>>& ap) {
  double sum = 0.0;
  int n = 0;
  for (const auto& [k, v] : ap) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

json summarize(const std::vector<double>& values) {
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
  return {{"mean", mean}, {"std", sd}, {"values", values}};
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a) {
  SyntheticConfig cfg = a.config.empty() ? SyntheticConfig{} : read_synthetic_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  const auto data = generate_synthetic(cfg);
  write_synthetic(data, a.out);
  write_synthetic_config(cfg, fs::path(a.out) / "config.json");
  std::cout << "wrote " << data.dataset.clips.size() << " clips to " << a.out << '\n';
  return kSuccess;
}

struct AlignArgs {
  std::string manifest;
  std::string mode = "weak";
  double lambda = 1e-2;
  double kappa_bg = 0.0;
  double bg_weight = 1.0;
  SplitFlags split;
  SolveFlags solve;
  int repeats = 1;
  std::string out;
  bool trace = false;
};

int cmd_align(const AlignArgs& a) {
  const Dataset ds = load_dataset(fs::path(a.manifest));
  AlignConfig cfg;
  cfg.lambda = a.lambda;
  cfg.kappa_bg = a.kappa_bg;
  cfg.bg_weight = a.bg_weight;
  cfg.solve = to_solve_options(a.solve);

  std::vector<double> scores;
  json runs = json::array();
  for (int r = 0; r < a.repeats; ++r) {
    const std::uint64_t seed = a.split.seed + static_cast<std::uint64_t>(r);
    const fs::path dir = a.repeats == 1 ? fs::path(a.out) : fs::path(a.out) / ("repeat_" + std::to_string(r));
    const Split split = split_dataset(ds, to_split_spec(a.split, seed));
    RunOutput run = a.mode == "semi" ? run_semi(ds, split, cfg) : run_weak(ds, split, cfg);
    if (!split.test.empty()) run.report.per_class_ap = classify_and_ap(run.classifier, ds, split.test);

    ReportContext ctx;
    ctx.seed = seed;
    ctx.strings = {{"mode", a.mode}, {"step_rule", a.solve.step_rule}};
    ctx.numbers = {{"lambda", a.lambda},
                   {"kappa_bg", a.kappa_bg},
                   {"bg_weight", a.bg_weight},
                   {"sup_fraction", a.split.sup_fraction},
                   {"val_fraction", a.split.val_fraction},
                   {"test_fraction", a.split.test_fraction},
                   {"gap_tol", a.solve.gap_tol},
                   {"max_iter", a.solve.max_iter},
                   {"iterations", run.solve.iterations},
                   {"final_gap", run.solve.final_gap},
                   {"converged", run.solve.converged ? 1.0 : 0.0}};
    const auto eval_alignments = pick(run, split.eval);
    write_alignment(eval_alignments, ds, dir / "alignment.tsv");
    write_report(run.report, ctx, ds.labels, dir / "report.json");
    write_classifier({run.classifier, ds.labels.names(), clip_ids(ds, split.test)}, dir / "model.json");
    if (a.trace) write_trace(run.solve, dir / "trace.jsonl");

    scores.push_back(run.report.mean_jaccard);
    runs.push_back({{"seed", seed},
                    {"mean_jaccard", run.report.mean_jaccard},
                    {"iterations", run.solve.iterations},
                    {"final_gap", run.solve.final_gap},
                    {"failed_clips", run.report.failed_clips}});
    if (run.report.failed_clips > 0) {
      std::cerr << "warning: " << run.report.failed_clips << " clip(s) excluded from evaluation\n";
    }
  }
  write_json({{"mode", a.mode}, {"repeats", a.repeats}, {"mean_jaccard", summarize(scores)}, {"runs", runs}},
             fs::path(a.out) / "summary.json");
  std::cout << "mean Jaccard " << summarize(scores)["mean"].get<double>() << '\n';
  return kSuccess;
}

struct EvalArgs {
  std::string alignment;
  std::string manifest;
  std::string out;
};

int cmd_eval(const EvalArgs& a) {
  const Dataset ds = load_dataset(fs::path(a.manifest));
  const auto alignments = read_alignment(a.alignment);
  const EvalReport report = evaluate_alignment(alignments, ds);
  ReportContext ctx;
  ctx.strings = {{"alignment", fs::path(a.alignment).filename().string()}};
  write_report(report, ctx, ds.labels, a.out);
  if (report.failed_clips > 0) {
    std::cerr << "warning: " << report.failed_clips << " clip(s) excluded from evaluation\n";
  }
  std::cout << "mean Jaccard " << report.mean_jaccard << '\n';
  return kSuccess;
}

struct ClassifyArgs {
  std::string manifest;
  std::string model;
  std::string out;
};

int cmd_classify(const ClassifyArgs& a) {
  const Dataset ds = load_dataset(fs::path(a.manifest));
  const ClassifierModel model = read_classifier(a.model);
  if (model.labels != ds.labels.names()) {
    throw ValidationError("model labels do not match the manifest labels");
  }
  std::vector<Index> test;
  if (model.test_clips.empty()) {
    for (std::size_t i = 0; i < ds.clips.size(); ++i) {
      if (ds.clips[i].ground_truth) test.push_back(static_cast<Index>(i));
    }
  } else {
    for (const auto& id : model.test_clips) {
      bool found = false;
      for (std::size_t i = 0; i < ds.clips.size(); ++i) {
        if (ds.clips[i].id == id) {
          test.push_back(static_cast<Index>(i));
          found = true;
        }
      }
      if (!found) throw ValidationError("test clip '" + id + "' not in manifest");
    }
  }
  const auto ap = classify_and_ap(model.classifier, ds, test);
  const auto m = mean_ap(ap);
  write_json({{"test_clips", clip_ids(ds, test)},
              {"per_class_ap", ap_json(ap)},
              {"mean_ap", m ? json(*m) : json(nullptr)}},
             a.out);
  if (m) std::cout << "mean AP " << *m << '\n';
  return kSuccess;
}

struct BaselineArgs {
  std::string kind;
  std::string manifest;
  std::string out;
  double lambda = 1e-2;
  double alpha = 0.1;
  double beta = 1.0;
  Index dmin = 5;
  SplitFlags split;
  SolveFlags solve;
};

int cmd_baseline(const BaselineArgs& a) {
  const Dataset ds = load_dataset(fs::path(a.manifest));
  const Split split = split_dataset(ds, to_split_spec(a.split, a.split.seed));
  ReportContext ctx;
  ctx.seed = a.split.seed;
  ctx.strings = {{"baseline", a.kind}};
  ctx.numbers = {{"sup_fraction", a.split.sup_fraction},
                 {"val_fraction", a.split.val_fraction},
                 {"test_fraction", a.split.test_fraction}};

  std::vector<ClipAlignment> alignments;
  EvalReport report;
  if (a.kind == "ncut") {
    NcutConfig nc;
    nc.alpha = a.alpha;
    nc.beta = a.beta;
    nc.min_distance = a.dmin;
    nc.solve = to_solve_options(a.solve);
    const RunOutput run = run_ncut_baseline(ds, split, nc, AlignConfig{});
    alignments = pick(run, split.eval);
    report = run.report;
    ctx.numbers.insert({{"alpha", a.alpha}, {"beta", a.beta}, {"dmin", static_cast<double>(a.dmin)},
                        {"iterations", run.solve.iterations}, {"final_gap", run.solve.final_gap}});
  } else if (a.kind == "sl") {
    const Classifier c = train_sl_baseline(ds, split.sup, a.lambda);
    alignments = align_with_classifier(c, ds, split.eval);
    report = evaluate_alignment(alignments, ds);
    if (!split.test.empty()) report.per_class_ap = classify_and_ap(c, ds, split.test);
    ctx.numbers["lambda"] = a.lambda;
  } else {
    alignments = uniform_alignment(ds, split.eval);
    report = evaluate_alignment(alignments, ds);
  }
  write_alignment(alignments, ds, fs::path(a.out) / "alignment.tsv");
  write_report(report, ctx, ds.labels, fs::path(a.out) / "report.json");
  std::cout << a.kind << " mean Jaccard " << report.mean_jaccard << '\n';
  return kSuccess;
}

struct GridArgs {
  std::string manifest;
  std::string grid;
  std::string out;
};

int cmd_grid(const GridArgs& a) {
  const Dataset ds = load_dataset(fs::path(a.manifest));
  const json g = read_json(a.grid);
  GridSpec spec;
  SplitSpec split_spec;
  AlignConfig base;
  std::string mode = "weak";
  try {
    spec.lambdas = g.value("lambda", std::vector<double>{base.lambda});
    spec.kappa_bgs = g.value("kappa_bg", std::vector<double>{base.kappa_bg});
    spec.bg_weights = g.value("bg_weight", std::vector<double>{base.bg_weight});
    mode = g.value("mode", mode);
    split_spec.sup_fraction = g.value("sup_fraction", split_spec.sup_fraction);
    split_spec.val_fraction = g.value("val_fraction", split_spec.val_fraction);
    split_spec.test_fraction = g.value("test_fraction", split_spec.test_fraction);
    split_spec.seed = g.value("seed", split_spec.seed);
    base.solve.gap_tol = g.value("gap_tol", base.solve.gap_tol);
    base.solve.max_iter = g.value("max_iter", base.solve.max_iter);
  } catch (const json::exception& e) {
    throw ValidationError(a.grid + ": " + e.what());
  }
  if (mode != "weak" && mode != "semi") throw ValidationError("grid mode must be weak or semi");
  const AlignMode m = mode == "semi" ? AlignMode::kSemi : AlignMode::kWeak;
  const Split split = split_dataset(ds, split_spec);
  const GridResult result = grid_search(ds, split, spec, base, m);
  const RunOutput best = m == AlignMode::kSemi ? run_semi(ds, split, result.best) : run_weak(ds, split, result.best);

  json points = json::array();
  for (const auto& p : result.points) {
    points.push_back({{"lambda", p.config.lambda},
                      {"kappa_bg", p.config.kappa_bg},
                      {"bg_weight", p.config.bg_weight},
                      {"val_mean_jaccard", p.val_jaccard}});
  }
  write_json({{"mode", mode},
              {"seed", split_spec.seed},
              {"best", {{"lambda", result.best.lambda},
                        {"kappa_bg", result.best.kappa_bg},
                        {"bg_weight", result.best.bg_weight}}},
              {"best_val_mean_jaccard", result.best_val_jaccard},
              {"eval_mean_jaccard", best.report.mean_jaccard},
              {"points", points}},
             a.out);
  std::cout << "best lambda=" << result.best.lambda << " kappa_bg=" << result.best.kappa_bg
            << " bg_weight=" << result.best.bg_weight << " eval mean Jaccard "
            << best.report.mean_jaccard << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Weakly supervised temporal alignment under ordering constraints"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("--config", gen.config, "Synthetic config JSON (defaults when omitted)");
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--seed", gen.seed, "Overrides the config seed");

  AlignArgs al;
  auto* align = app.add_subcommand("align", "Align clips and recover classifiers");
  align->add_option("--manifest", al.manifest, "Dataset manifest")->required();
  align->add_option("--mode", al.mode, "Supervision mode")->check(CLI::IsMember({"weak", "semi"}));
  align->add_option("--lambda", al.lambda, "Ridge strength");
  align->add_option("--kappa-bg", al.kappa_bg, "Linear penalty on the background label");
  align->add_option("--bg-weight", al.bg_weight, "Loss weight of the background label");
  add_split_flags(align, al.split);
  add_solve_flags(align, al.solve);
  align->add_option("--repeats", al.repeats, "Random splits (seed, seed+1, ...)")->check(CLI::PositiveNumber);
  align->add_option("--out", al.out, "Output directory")->required();
  align->add_flag("--trace", al.trace, "Write per-iteration solver trace");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score an alignment file");
  eval->add_option("--alignment", ev.alignment, "Alignment file")->required();
  eval->add_option("--manifest", ev.manifest, "Dataset manifest")->required();
  eval->add_option("--out", ev.out, "Report path")->required();

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify", "Per-class AP of a recovered classifier");
  classify->add_option("--manifest", cl.manifest, "Dataset manifest")->required();
  classify->add_option("--model", cl.model, "Classifier model JSON")->required();
  classify->add_option("--out", cl.out, "Output path")->required();

  BaselineArgs bl;
  auto* baseline = app.add_subcommand("baseline", "Run a baseline alignment");
  baseline->add_option("--kind", bl.kind, "Baseline kind")
      ->required()
      ->check(CLI::IsMember({"ncut", "sl", "uniform"}));
  baseline->add_option("--manifest", bl.manifest, "Dataset manifest")->required();
  baseline->add_option("--out", bl.out, "Output directory")->required();
  baseline->add_option("--lambda", bl.lambda, "Ridge strength (sl)");
  baseline->add_option("--alpha", bl.alpha, "Temporal decay (ncut)");
  baseline->add_option("--beta", bl.beta, "Appearance decay (ncut)");
  baseline->add_option("--dmin", bl.dmin, "Neighbourhood width (ncut)")->check(CLI::PositiveNumber);
  add_split_flags(baseline, bl.split);
  add_solve_flags(baseline, bl.solve);

  GridArgs gr;
  auto* grid = app.add_subcommand("grid", "Hyper-parameter search on the Val split");
  grid->add_option("--manifest", gr.manifest, "Dataset manifest")->required();
  grid->add_option("--grid", gr.grid, "Grid JSON")->required();
  grid->add_option("--out", gr.out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kValidationFailure;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*align) return cmd_align(al);
    if (*eval) return cmd_eval(ev);
    if (*classify) return cmd_classify(cl);
    if (*baseline) return cmd_baseline(bl);
    if (*grid) return cmd_grid(gr);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoFailure;
  }
  return kValidationFailure;
}

}  // namespace ordalign::cli
