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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qdl {

/// Failure categories raised by the library. Each maps to one exit status
/// class in the command-line tool (see `exit_status`).
enum class ErrorKind {
  ZeroVector,
  BadDimension,
  DimensionMismatch,
  NotNormalized,
  BadMesh,
  NonlinearCollapse,
  DegenerateBranch,
  DegenerateEstimate,
  EmptyDataset,
  AllSamplesCollapsed,
  ParseError,
  ClassCountMismatch,
  SchemaMismatch,
  Io,
  Usage,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::BadMesh: return "BadMesh";
    case ErrorKind::NonlinearCollapse: return "NonlinearCollapse";
    case ErrorKind::DegenerateBranch: return "DegenerateBranch";
    case ErrorKind::DegenerateEstimate: return "DegenerateEstimate";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::AllSamplesCollapsed: return "AllSamplesCollapsed";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ClassCountMismatch: return "ClassCountMismatch";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

/// True for errors that come from the numerics rather than from the inputs.
constexpr bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::NonlinearCollapse ||
         kind == ErrorKind::DegenerateBranch ||
         kind == ErrorKind::DegenerateEstimate ||
         kind == ErrorKind::AllSamplesCollapsed;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when the nonlinear layer annihilates the branch (a == 0).
/// `layer` is the zero-based UU->NL block index, or npos outside a network.
class NonlinearCollapse : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit NonlinearCollapse(double a, std::size_t layer = npos)
      : Error(ErrorKind::NonlinearCollapse,
              "squared norm a=" + std::to_string(a) +
                  (layer == npos ? std::string()
                                 : " at layer " + std::to_string(layer))),
        a_(a),
        layer_(layer) {}

  [[nodiscard]] double a() const noexcept { return a_; }
  [[nodiscard]] std::size_t layer() const noexcept { return layer_; }

 private:
  double a_;
  std::size_t layer_;
};

}  // namespace qdl
