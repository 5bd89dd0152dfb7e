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
 * @file report_io.hpp
 * Run-report JSON, curve and projection CSVs, and atomic file output.
 *
 * Doubles are written with round-trip precision so a network restored from
 * a report evaluates bit-identically.
 */

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdl/error.hpp"
#include "qdl/evaluation.hpp"
#include "qdl/network.hpp"
#include "qdl/trainer.hpp"

namespace qdl::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kReportSchema = "qdl.run-report/1";

/// Writes through a sibling temp file and renames, so readers never see a
/// truncated file.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorKind::Io, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " to " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return out.str();
}

inline json network_to_json(const NetworkConfig& config) {
  return json{{"dim", config.dim()},
              {"layers", config.neuron_layers()},
              {"uu_blocks", config.n_uu_layers()},
              {"params", param_view(config)}};
}

/// Restores a canonical-mesh network from {dim, uu_blocks, params}.
inline NetworkConfig network_from_json(const json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const auto blocks = j.at("uu_blocks").get<std::size_t>();
    const auto params = j.at("params").get<std::vector<double>>();
    if (j.contains("layers") && j.at("layers").get<std::size_t>() != blocks + 1) {
      throw Error(ErrorKind::SchemaMismatch, "layers and uu_blocks disagree");
    }
    const NetworkConfig shape = NetworkConfig::identity(dim, blocks);
    return with_params(shape, params);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaMismatch, std::string("network config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaMismatch) throw;
    throw Error(ErrorKind::SchemaMismatch, e.what());
  }
}

inline json recognition_to_json(const RecognitionReport& r) {
  json samples = json::array();
  for (const auto& s : r.per_sample) {
    json row{{"true_class", s.true_class}, {"recognized", s.recognized}};
    row["fidelity"] = s.fidelity ? json(*s.fidelity) : json(nullptr);
    row["argmax_class"] = s.argmax_class ? json(*s.argmax_class) : json(nullptr);
    row["collapsed"] = !s.fidelity.has_value();
    samples.push_back(std::move(row));
  }
  return json{{"thresholds", r.thresholds},
              {"rate_per_threshold", r.rate_per_threshold},
              {"collapsed_samples", r.collapsed},
              {"supplementary_argmax_accuracy",
               {{"value", r.argmax_accuracy},
                {"note", "not part of the threshold protocol; highest-fidelity label vs true class"}}},
              {"per_sample", std::move(samples)}};
}

inline json resources_to_json(const ResourceCount& rc) {
  return json{{"qubits", rc.qubits},
              {"paths", rc.paths},
              {"combiners", rc.combiners},
              {"detectors", rc.detectors}};
}

/// iteration,acc_mse rows, one per training iteration.
inline std::string curve_csv(const TrainingTrace& trace) {
  std::string out = "iteration,acc_mse\n";
  for (std::size_t i = 0; i < trace.acc_mse_per_iteration.size(); ++i) {
    out += std::to_string(i) + "," + format_double(trace.acc_mse_per_iteration[i]) + "\n";
  }
  return out;
}

struct TaggedProjection {
  ProjectionRow row;
  std::string_view source;  // input | output | label
};

inline std::string projections_csv(std::span<const TaggedProjection> rows,
                                   std::span<const std::string_view> class_names) {
  std::string out = "x1,x2,x3,x4,class,source\n";
  for (const auto& [row, source] : rows) {
    for (double v : row.x) out += format_double(v) + ",";
    out += (row.class_index < class_names.size() ? std::string(class_names[row.class_index])
                                                 : std::to_string(row.class_index));
    out += ",";
    out += source;
    out += "\n";
  }
  return out;
}

/// One value per line; blank lines and '#' comments are ignored.
inline AmplitudeVector read_vector_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    double v = 0.0;
    if (!(fields >> v)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw Error(ErrorKind::ParseError, path.string() + " line " + std::to_string(line_no));
    }
    std::string rest;
    if (fields >> rest) {
      throw Error(ErrorKind::ParseError,
                  path.string() + " line " + std::to_string(line_no) + ": one value per line");
    }
    values.push_back(v);
  }
  if (values.size() < 2 || !is_power_of_two(values.size())) {
    throw Error(ErrorKind::BadDimension, path.string() + " holds " +
                                             std::to_string(values.size()) +
                                             " values, need a power of two >= 2");
  }
  return AmplitudeVector::from_span(values);
}

}  // namespace qdl::io
