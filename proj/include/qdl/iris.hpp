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
 * @file iris.hpp
 * Iris ingestion, cut-and-normalize preprocessing, stratified split and
 * label states.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qdl/amplitude.hpp"
#include "qdl/error.hpp"
#include "qdl/network.hpp"

namespace qdl::iris {

enum class Species : std::size_t { Setosa = 0, Versicolour = 1, Virginica = 2 };

inline constexpr std::array<Species, 3> kAllSpecies{Species::Setosa, Species::Versicolour,
                                                    Species::Virginica};
inline constexpr std::size_t kPerClass = 50;
inline constexpr std::size_t kTrainPerClass = 40;

constexpr std::string_view to_string(Species s) {
  switch (s) {
    case Species::Setosa: return "Setosa";
    case Species::Versicolour: return "Versicolour";
    case Species::Virginica: return "Virginica";
  }
  return "?";
}

constexpr std::size_t index_of(Species s) { return static_cast<std::size_t>(s); }

/// Case-insensitive; accepts an "iris-" prefix and both spellings of Versicolour.
inline std::optional<Species> parse_species(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '"') {
      s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (s.starts_with("iris-")) s.erase(0, 5);
  if (s == "setosa") return Species::Setosa;
  if (s == "versicolor" || s == "versicolour") return Species::Versicolour;
  if (s == "virginica") return Species::Virginica;
  return std::nullopt;
}

struct RawSample {
  double sepal_length;  // cm
  double sepal_width;
  double petal_length;
  double petal_width;
  Species species;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::optional<double> parse_number(std::string_view field) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

[[noreturn]] inline void parse_failure(std::size_t line_no, const std::string& why) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + why);
}

}  // namespace detail

/// Parses the comma-separated Iris layout (four numbers then the species).
/// A non-numeric first line is treated as a header; blank lines are ignored.
inline std::vector<RawSample> parse_iris(std::istream& in) {
  std::vector<RawSample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    const auto fields = detail::split_fields(text);
    const bool first = !seen_content;
    seen_content = true;
    if (first && !fields.empty() && !detail::parse_number(fields[0])) continue;
    if (fields.size() != 5) {
      detail::parse_failure(line_no, "expected 5 fields, found " + std::to_string(fields.size()));
    }
    std::array<double, 4> values{};
    for (std::size_t k = 0; k < 4; ++k) {
      const auto v = detail::parse_number(fields[k]);
      if (!v) detail::parse_failure(line_no, "bad number '" + std::string(fields[k]) + "'");
      if (!(*v > 0.0)) detail::parse_failure(line_no, "measurement must be positive");
      values[k] = *v;
    }
    const auto species = parse_species(fields[4]);
    if (!species) detail::parse_failure(line_no, "unknown species '" + std::string(fields[4]) + "'");
    samples.push_back({values[0], values[1], values[2], values[3], *species});
  }
  if (samples.empty()) {
    detail::parse_failure(line_no, "no samples found");
  }
  return samples;
}

inline void check_class_counts(const std::vector<RawSample>& samples) {
  std::array<std::size_t, 3> counts{};
  for (const auto& s : samples) ++counts[index_of(s.species)];
  for (Species sp : kAllSpecies) {
    if (counts[index_of(sp)] != kPerClass) {
      throw Error(ErrorKind::ClassCountMismatch,
                  std::string(to_string(sp)) + " has " + std::to_string(counts[index_of(sp)]) +
                      " samples, expected " + std::to_string(kPerClass));
    }
  }
}

/// Loads and validates the full 150-sample dataset.
inline std::vector<RawSample> load_iris(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  auto samples = parse_iris(in);
  check_class_counts(samples);
  return samples;
}

/// SL, SW and PL are cut by 4, 3 and 4 cm; PW is kept. Then amplitude encoded.
inline AmplitudeVector preprocess(const RawSample& s) {
  const std::array<double, 4> cut{s.sepal_length - 4.0, s.sepal_width - 3.0,
                                  s.petal_length - 4.0, s.petal_width};
  return amplitude_encode(cut);
}

/// |v>_1 = e0 (Setosa), |v>_2 = e1 (Versicolour), |v>_3 = e2 (Virginica).
inline AmplitudeVector label_state(Species s) { return AmplitudeVector::basis(4, index_of(s)); }

inline LabeledSample to_labeled(const RawSample& s) {
  return {preprocess(s), label_state(s.species), index_of(s.species)};
}

struct SplitDataset {
  std::vector<LabeledSample> train;
  std::vector<LabeledSample> test;
  std::vector<std::size_t> train_indices;  // into the loaded sample list
  std::vector<std::size_t> test_indices;
  std::uint64_t split_seed = 0;
};

/// Per class, a seeded shuffle picks 40 training samples; the other 10 are
/// test samples. Each side is class-major, ascending within a class.
inline SplitDataset split(const std::vector<RawSample>& samples, std::uint64_t seed) {
  check_class_counts(samples);
  std::mt19937_64 rng(seed);
  SplitDataset out;
  out.split_seed = seed;
  for (Species sp : kAllSpecies) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (samples[i].species == sp) members.push_back(i);
    }
    std::shuffle(members.begin(), members.end(), rng);
    std::sort(members.begin(), members.begin() + kTrainPerClass);
    std::sort(members.begin() + kTrainPerClass, members.end());
    out.train_indices.insert(out.train_indices.end(), members.begin(),
                             members.begin() + kTrainPerClass);
    out.test_indices.insert(out.test_indices.end(), members.begin() + kTrainPerClass,
                            members.end());
  }
  for (std::size_t i : out.train_indices) out.train.push_back(to_labeled(samples[i]));
  for (std::size_t i : out.test_indices) out.test.push_back(to_labeled(samples[i]));
  return out;
}

}  // namespace qdl::iris
