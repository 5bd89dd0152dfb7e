// Copyright 2026 The qdl Authors
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

/**
 * @file qdl_cli.hpp
 * Command-line driver: train, test, distance, resources, preprocess.
 *
 * Exit status: 0 success, 1 usage error, 2 data error, 3 numerical error.
 * Every output file is produced only after the computation succeeded and is
 * written atomically.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qdl/qdl.hpp"
#include "qdl/report_io.hpp"

namespace qdl::cli {

using json = io::json;

enum ExitStatus : int { kOk = 0, kUsage = 1, kDataError = 2, kNumericalError = 3 };

inline int exit_status(ErrorKind kind) {
  if (kind == ErrorKind::Usage) return kUsage;
  if (is_numerical(kind)) return kNumericalError;
  return kDataError;
}

inline constexpr std::array<std::string_view, 3> kClassNames{"Setosa", "Versicolour", "Virginica"};

struct RunManifest {
  std::string command;
  std::string iris_path = "data/iris.csv";
  std::optional<std::size_t> layers;
  std::size_t iterations = 5000;
  double epsilon = 0.001;
  double lr = 0.05;
  std::optional<std::uint64_t> split_seed;
  std::uint64_t init_seed = 1;
  std::optional<std::uint64_t> shots;
  std::uint64_t shot_seed = 1;
  bool estimated_basis = false;
  std::string out_dir = "out";
  std::string report_path;
  std::string vector_path;
  std::string label_path;
  std::optional<std::size_t> dim;
  std::size_t threads = 1;

  [[nodiscard]] std::uint64_t split_seed_or_default() const { return split_seed.value_or(1); }
};

/// Fields present in the manifest file replace the flag values.
inline void apply_manifest(RunManifest& m, const json& j) {
  try {
    if (j.contains("iris")) m.iris_path = j.at("iris").get<std::string>();
    if (j.contains("layers")) m.layers = j.at("layers").get<std::size_t>();
    if (j.contains("iterations")) m.iterations = j.at("iterations").get<std::size_t>();
    if (j.contains("epsilon")) m.epsilon = j.at("epsilon").get<double>();
    if (j.contains("lr")) m.lr = j.at("lr").get<double>();
    if (j.contains("split_seed")) m.split_seed = j.at("split_seed").get<std::uint64_t>();
    if (j.contains("init_seed")) m.init_seed = j.at("init_seed").get<std::uint64_t>();
    if (j.contains("shots")) {
      if (j.at("shots").is_null()) {
        m.shots.reset();
      } else {
        m.shots = j.at("shots").get<std::uint64_t>();
      }
    }
    if (j.contains("shot_seed")) m.shot_seed = j.at("shot_seed").get<std::uint64_t>();
    if (j.contains("estimated_basis")) m.estimated_basis = j.at("estimated_basis").get<bool>();
    if (j.contains("out")) m.out_dir = j.at("out").get<std::string>();
    if (j.contains("report")) m.report_path = j.at("report").get<std::string>();
    if (j.contains("vector")) m.vector_path = j.at("vector").get<std::string>();
    if (j.contains("label")) m.label_path = j.at("label").get<std::string>();
    if (j.contains("dim")) m.dim = j.at("dim").get<std::size_t>();
    if (j.contains("threads")) m.threads = j.at("threads").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Usage, std::string("manifest: ") + e.what());
  }
}

inline MeasurementMode measurement_mode(const RunManifest& m) {
  if (!m.shots) return ExactMeasurement{};
  ShotPlan plan;
  plan.shots_weights = *m.shots;
  plan.shots_projection = *m.shots;
  plan.rng_seed = m.shot_seed;
  plan.basis = m.estimated_basis ? PhiBasis::Estimated : PhiBasis::Exact;
  plan.validate();
  return plan;
}

inline std::string run_id(const RunManifest& m, std::size_t layers) {
  std::string id = "L" + std::to_string(layers) + "-split" +
                   std::to_string(m.split_seed_or_default()) + "-init" +
                   std::to_string(m.init_seed);
  if (m.shots) id += "-shots" + std::to_string(*m.shots) + "-seed" + std::to_string(m.shot_seed);
  return id;
}

inline json hyperparameters_json(const RunManifest& m) {
  json h{{"epsilon", m.epsilon},
         {"learning_rate", m.lr},
         {"iterations", m.iterations},
         {"mode", m.shots ? "shots" : "exact"}};
  h["shots"] = m.shots ? json(*m.shots) : json(nullptr);
  h["phi_basis"] = m.estimated_basis ? "estimated" : "exact";
  return h;
}

inline std::vector<io::TaggedProjection> label_rows() {
  std::vector<io::TaggedProjection> rows;
  for (iris::Species sp : iris::kAllSpecies) {
    const AmplitudeVector v = iris::label_state(sp);
    rows.push_back({{{v[0], v[1], v[2], v[3]}, iris::index_of(sp)}, "label"});
  }
  return rows;
}

inline int cmd_train(const RunManifest& m, std::ostream& out) {
  const std::size_t layers = m.layers.value_or(3);
  if (layers != 3 && layers != 4) throw Error(ErrorKind::Usage, "--layers must be 3 or 4");

  const auto samples = iris::load_iris(m.iris_path);
  const auto data = iris::split(samples, m.split_seed_or_default());

  TrainingConfig cfg;
  cfg.epsilon = m.epsilon;
  cfg.learning_rate = m.lr;
  cfg.iterations = m.iterations;
  cfg.seed = m.init_seed;
  cfg.mode = measurement_mode(m);
  cfg.threads = m.threads;
  cfg.validate();

  const NetworkConfig initial =
      NetworkConfig::random(4, NetworkConfig::blocks_for_layers(layers), m.init_seed);
  const TrainingResult result = train(initial, data.train, cfg);
  const TrainingTrace& trace = result.trace;
  const RecognitionReport recognition = recognition_report(result.best, data.test);

  std::size_t collapsed_total = 0;
  std::size_t collapsed_max = 0;
  for (std::size_t c : trace.collapsed_sample_counts) {
    collapsed_total += c;
    collapsed_max = std::max(collapsed_max, c);
  }

  const std::string id = run_id(m, layers);
  json report;
  report["schema"] = io::kReportSchema;
  report["run_id"] = id;
  report["command"] = "train";
  report["seeds"] = {{"split", m.split_seed_or_default()},
                     {"init", m.init_seed},
                     {"shot", m.shot_seed}};
  report["config"] = io::network_to_json(result.best);
  report["initial_params"] = param_view(initial);
  report["hyperparameters"] = hyperparameters_json(m);
  report["initial_acc_mse"] = trace.acc_mse_per_iteration.front();
  report["final_acc_mse"] = trace.acc_mse_per_iteration.back();
  report["best_acc_mse"] = trace.acc_mse_per_iteration[trace.best_iteration];
  report["best_iteration"] = trace.best_iteration;
  report["collapsed_samples"] = {{"total", collapsed_total}, {"max_per_iteration", collapsed_max}};
  report["test"] = io::recognition_to_json(recognition);
  report["resource_estimate"] = io::resources_to_json(resource_estimate(4));
  report["assumptions"] = {
      "repeated training runs differ only in the initialization seed",
      "the reported parameters are those with the minimum AccEk seen during training",
      "the initial AccEk is the first curve point; the final AccEk is the last curve point"};

  const std::filesystem::path dir(m.out_dir);
  io::write_atomic(dir / ("run-" + id + "-curve.csv"), io::curve_csv(trace));
  io::write_atomic(dir / "report.json", report.dump(2) + "\n");

  out << "run " << id << ": AccEk " << io::format_double(trace.acc_mse_per_iteration.front())
      << " -> " << io::format_double(trace.acc_mse_per_iteration.back()) << " (best "
      << io::format_double(trace.acc_mse_per_iteration[trace.best_iteration]) << " at iteration "
      << trace.best_iteration << ")\n";
  return kOk;
}

inline int cmd_test(const RunManifest& m, std::ostream& out) {
  if (m.report_path.empty()) throw Error(ErrorKind::Usage, "--report is required");
  json report;
  try {
    report = json::parse(io::read_file(m.report_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaMismatch, std::string("report is not JSON: ") + e.what());
  }
  if (!report.contains("schema") || report["schema"] != io::kReportSchema) {
    throw Error(ErrorKind::SchemaMismatch, "report schema is not " + std::string(io::kReportSchema));
  }
  if (!report.contains("config")) throw Error(ErrorKind::SchemaMismatch, "report has no config");
  const NetworkConfig config = io::network_from_json(report["config"]);
  if (config.dim() != 4) {
    throw Error(ErrorKind::SchemaMismatch, "report dim " + std::to_string(config.dim()) +
                                               " does not match the 4-attribute dataset");
  }
  if (m.layers && *m.layers != config.neuron_layers()) {
    throw Error(ErrorKind::SchemaMismatch, "manifest asks for " + std::to_string(*m.layers) +
                                               " layers, report has " +
                                               std::to_string(config.neuron_layers()));
  }
  std::uint64_t split_seed = m.split_seed_or_default();
  try {
    const auto reported = report.at("seeds").at("split").get<std::uint64_t>();
    if (m.split_seed && *m.split_seed != reported) {
      throw Error(ErrorKind::SchemaMismatch, "split seed differs from the training run");
    }
    split_seed = reported;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaMismatch, std::string("report seeds: ") + e.what());
  }

  const auto samples = iris::load_iris(m.iris_path);
  const auto data = iris::split(samples, split_seed);
  const RecognitionReport recognition = recognition_report(config, data.test);

  const CompiledNetwork net(config);
  std::vector<io::TaggedProjection> rows;
  for (const auto& s : data.test) {
    const auto v = s.input;
    rows.push_back({{{v[0], v[1], v[2], v[3]}, s.class_index}, "input"});
    try {
      const AmplitudeVector k = output_state(net, s.input);
      rows.push_back({{{k[0], k[1], k[2], k[3]}, s.class_index}, "output"});
    } catch (const NonlinearCollapse&) {
    }
  }
  for (auto& r : label_rows()) rows.push_back(r);

  json result;
  result["schema"] = "qdl.recognition/1";
  result["run_id"] = report.value("run_id", std::string());
  result["split_seed"] = split_seed;
  result["layers"] = config.neuron_layers();
  result["recognition"] = io::recognition_to_json(recognition);

  const std::filesystem::path dir(m.out_dir);
  io::write_atomic(dir / "recognition.json", result.dump(2) + "\n");
  io::write_atomic(dir / "projections.csv", io::projections_csv(rows, kClassNames));

  for (std::size_t t = 0; t < recognition.thresholds.size(); ++t) {
    out << "threshold " << recognition.thresholds[t] << ": rate "
        << recognition.rate_per_threshold[t] << "\n";
  }
  return kOk;
}

inline int cmd_distance(const RunManifest& m, std::ostream& out) {
  if (m.vector_path.empty() || m.label_path.empty()) {
    throw Error(ErrorKind::Usage, "--vector and --label are required");
  }
  const AmplitudeVector k = io::read_vector_file(m.vector_path);
  const AmplitudeVector v = io::read_vector_file(m.label_path);
  if (k.dim() != v.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector dim " + std::to_string(k.dim()) + " vs label dim " + std::to_string(v.dim()));
  }
  BranchState state = ghz_init(k.qubits());
  state = set_input(std::move(state), k);
  state = prepare_label(std::move(state), v);

  const MeasurementMode mode = measurement_mode(m);
  const MseEstimate est = std::holds_alternative<ShotPlan>(mode)
                              ? measure_shots(state, std::get<ShotPlan>(mode))
                              : measure_exact(state);
  json result{{"mode", m.shots ? "shots" : "exact"},
              {"gamma_sq", est.gamma_sq},
              {"lambda_sq", est.lambda_sq},
              {"p_phi", est.p_phi},
              {"mse_ghz", est.mse},
              {"distance_squared", distance_squared(k, v)}};
  out << result.dump() << "\n";
  return kOk;
}

inline int cmd_resources(const RunManifest& m, std::ostream& out) {
  if (!m.dim) throw Error(ErrorKind::Usage, "--dim is required");
  out << io::resources_to_json(resource_estimate(*m.dim)).dump() << "\n";
  return kOk;
}

inline int cmd_preprocess(const RunManifest& m, std::ostream& out) {
  const auto samples = iris::load_iris(m.iris_path);
  std::vector<io::TaggedProjection> rows;
  for (const auto& s : samples) {
    const AmplitudeVector x = iris::preprocess(s);
    rows.push_back({{{x[0], x[1], x[2], x[3]}, iris::index_of(s.species)}, "input"});
  }
  for (auto& r : label_rows()) rows.push_back(r);
  io::write_atomic(std::filesystem::path(m.out_dir) / "projections.csv",
                   io::projections_csv(rows, kClassNames));
  out << "wrote " << samples.size() << " preprocessed samples\n";
  return kOk;
}

/// Parses `args` (without the program name) and runs one command.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator and trainer for GHZ-based quantum feedforward networks", "qdl"};
  app.require_subcommand(1);

  RunManifest m;
  std::string manifest_path;
  std::size_t layers = 3;
  std::uint64_t split_seed = 1;
  std::uint64_t shots = 0;
  std::size_t dim = 0;

  auto* train = app.add_subcommand("train", "train a network on the Iris training split");
  auto* test = app.add_subcommand("test", "score a trained report on the Iris test split");
  auto* distance = app.add_subcommand("distance", "estimate E between two unit vectors");
  auto* resources = app.add_subcommand("resources", "qubit, path, combiner and detector counts");
  auto* preprocess = app.add_subcommand("preprocess", "emit the preprocessed Iris projections");

  for (auto* sub : {train, test, preprocess}) {
    sub->add_option("--iris", m.iris_path, "Iris CSV file")->capture_default_str();
    sub->add_option("--out", m.out_dir, "output directory")->capture_default_str();
  }
  for (auto* sub : {train, test}) {
    sub->add_option("--layers", layers, "neuron layers (3 or 4)");
    sub->add_option("--split-seed", split_seed, "train/test split seed");
  }
  train->add_option("--iterations", m.iterations)->capture_default_str();
  train->add_option("--epsilon", m.epsilon, "finite-difference step (rad)")->capture_default_str();
  train->add_option("--lr", m.lr, "learning rate (rad)")->capture_default_str();
  train->add_option("--init-seed", m.init_seed)->capture_default_str();
  train->add_option("--threads", m.threads, "workers for gradient evaluation")->capture_default_str();
  for (auto* sub : {train, distance}) {
    sub->add_option("--shots", shots, "repetitions per measurement (omit for exact)");
    sub->add_option("--shot-seed", m.shot_seed)->capture_default_str();
    sub->add_flag("--estimated-basis", m.estimated_basis,
                  "rotate the second measurement with estimated weights");
  }
  distance->add_option("--seed", m.shot_seed, "alias of --shot-seed");
  test->add_option("--report", m.report_path, "report.json from train");
  distance->add_option("--vector", m.vector_path, "unknown vector, one value per line");
  distance->add_option("--label", m.label_path, "known vector, one value per line");
  resources->add_option("--dim,N", dim, "vector dimension N");
  for (auto* sub : {train, test, distance, resources, preprocess}) {
    sub->add_option("--manifest", manifest_path, "JSON manifest overriding flags");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  m.command = chosen->get_name();
  auto given = [chosen](const char* name) {
    const CLI::Option* opt = chosen->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--layers")) m.layers = layers;
  if (given("--split-seed")) m.split_seed = split_seed;
  if (given("--shots")) m.shots = shots;
  if (given("--dim")) m.dim = dim;

  try {
    if (!manifest_path.empty()) {
      json manifest;
      try {
        manifest = json::parse(io::read_file(manifest_path));
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Usage, std::string("manifest is not JSON: ") + e.what());
      }
      apply_manifest(m, manifest);
    }
    if (m.command == "train") return cmd_train(m, out);
    if (m.command == "test") return cmd_test(m, out);
    if (m.command == "distance") return cmd_distance(m, out);
    if (m.command == "resources") return cmd_resources(m, out);
    return cmd_preprocess(m, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_status(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace qdl::cli
