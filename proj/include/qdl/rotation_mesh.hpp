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
 * @file rotation_mesh.hpp
 * Real orthogonal weight matrices from a triangular mesh of Givens rotations.
 *
 * A mesh on N modes holds N(N-1)/2 rotations. The canonical enumeration is
 * for j = 1..N-1, i = j-1 down to 0, giving planes
 * (0,1), (1,2), (0,2), (2,3), (1,3), (0,3), ... and the weight matrix is
 * the left-to-right product G_0 G_1 ... G_{m-1} in that order. Every matrix
 * built this way lies in SO(N).
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdl/amplitude.hpp"
#include "qdl/error.hpp"

namespace qdl {

struct Rotation {
  std::size_t plane_i;
  std::size_t plane_j;
  double theta;  // radians

  friend bool operator==(const Rotation&, const Rotation&) = default;
};

constexpr std::size_t mesh_size(std::size_t dim) { return dim * (dim - 1) / 2; }

class RotationMesh {
 public:
  /// Any ordering is accepted as long as the count and planes are valid.
  RotationMesh(std::size_t dim, std::vector<Rotation> rotations)
      : dim_(dim), rotations_(std::move(rotations)) {
    validate();
  }

  /// Canonical triangular mesh carrying `thetas` in enumeration order.
  static RotationMesh canonical(std::size_t dim, std::span<const double> thetas) {
    const auto planes = canonical_planes(dim);
    if (thetas.size() != planes.size()) {
      throw Error(ErrorKind::BadMesh, "expected " + std::to_string(planes.size()) +
                                          " angles, got " +
                                          std::to_string(thetas.size()));
    }
    std::vector<Rotation> rotations;
    rotations.reserve(planes.size());
    for (std::size_t k = 0; k < planes.size(); ++k) {
      rotations.push_back({planes[k].first, planes[k].second, thetas[k]});
    }
    return RotationMesh(dim, std::move(rotations));
  }

  static RotationMesh identity(std::size_t dim) {
    return canonical(dim, std::vector<double>(mesh_size(dim), 0.0));
  }

  static std::vector<std::pair<std::size_t, std::size_t>> canonical_planes(std::size_t dim) {
    if (dim < 2 || !is_power_of_two(dim)) {
      throw Error(ErrorKind::BadDimension,
                  "mesh dimension " + std::to_string(dim) + " is not a power of two >= 2");
    }
    std::vector<std::pair<std::size_t, std::size_t>> planes;
    planes.reserve(mesh_size(dim));
    for (std::size_t j = 1; j < dim; ++j) {
      for (std::size_t i = j; i-- > 0;) {
        planes.emplace_back(i, j);
      }
    }
    return planes;
  }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] const std::vector<Rotation>& rotations() const noexcept { return rotations_; }

  [[nodiscard]] std::vector<double> angles() const {
    std::vector<double> out;
    out.reserve(rotations_.size());
    for (const auto& r : rotations_) out.push_back(r.theta);
    return out;
  }

  /// Same planes, new angles.
  [[nodiscard]] RotationMesh with_angles(std::span<const double> thetas) const {
    if (thetas.size() != rotations_.size()) {
      throw Error(ErrorKind::BadMesh, "angle count mismatch");
    }
    std::vector<Rotation> rotations = rotations_;
    for (std::size_t k = 0; k < rotations.size(); ++k) rotations[k].theta = thetas[k];
    return RotationMesh(dim_, std::move(rotations));
  }

  /// Inverse mesh: reversed order, negated angles.
  [[nodiscard]] RotationMesh inverse() const {
    std::vector<Rotation> rotations(rotations_.rbegin(), rotations_.rend());
    for (auto& r : rotations) r.theta = -r.theta;
    return RotationMesh(dim_, std::move(rotations));
  }

  [[nodiscard]] bool is_canonical() const {
    const auto planes = canonical_planes(dim_);
    for (std::size_t k = 0; k < planes.size(); ++k) {
      if (rotations_[k].plane_i != planes[k].first ||
          rotations_[k].plane_j != planes[k].second) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const RotationMesh&, const RotationMesh&) = default;

 private:
  void validate() const {
    if (dim_ < 2 || !is_power_of_two(dim_)) {
      throw Error(ErrorKind::BadMesh, "dimension " + std::to_string(dim_) +
                                          " is not a power of two >= 2");
    }
    if (rotations_.size() != mesh_size(dim_)) {
      throw Error(ErrorKind::BadMesh, "mesh on " + std::to_string(dim_) + " modes needs " +
                                          std::to_string(mesh_size(dim_)) +
                                          " rotations, got " +
                                          std::to_string(rotations_.size()));
    }
    for (const auto& r : rotations_) {
      if (!(r.plane_i < r.plane_j && r.plane_j < dim_)) {
        throw Error(ErrorKind::BadMesh, "invalid plane (" + std::to_string(r.plane_i) +
                                            "," + std::to_string(r.plane_j) + ")");
      }
    }
  }

  std::size_t dim_;
  std::vector<Rotation> rotations_;
};

/// Counter-clockwise rotation by theta in the (i, j) coordinate plane.
inline Eigen::MatrixXd givens(std::size_t dim, const Rotation& r) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
  const auto i = static_cast<Eigen::Index>(r.plane_i);
  const auto j = static_cast<Eigen::Index>(r.plane_j);
  const double c = std::cos(r.theta);
  const double s = std::sin(r.theta);
  g(i, i) = c;
  g(i, j) = -s;
  g(j, i) = s;
  g(j, j) = c;
  return g;
}

/// Ordered product of the mesh's rotations. Right-multiplying one rotation at
/// a time only touches columns i and j.
inline Eigen::MatrixXd build_matrix(const RotationMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (const auto& r : mesh.rotations()) {
    const auto i = static_cast<Eigen::Index>(r.plane_i);
    const auto j = static_cast<Eigen::Index>(r.plane_j);
    const double c = std::cos(r.theta);
    const double s = std::sin(r.theta);
    const Eigen::VectorXd col_i = m.col(i);
    const Eigen::VectorXd col_j = m.col(j);
    m.col(i) = c * col_i + s * col_j;
    m.col(j) = -s * col_i + c * col_j;
  }
  return m;
}

/// out_vec <- W out_vec with W = build_matrix(weights).
inline BranchState apply_weight(BranchState state, const Eigen::MatrixXd& weights) {
  if (static_cast<std::size_t>(weights.rows()) != state.dim() ||
      static_cast<std::size_t>(weights.cols()) != state.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "weight matrix " + std::to_string(weights.rows()) + "x" +
                    std::to_string(weights.cols()) + " on dim " +
                    std::to_string(state.dim()));
  }
  state.out_vec = AmplitudeVector(weights * state.out_vec.values());
  return state;
}

inline BranchState apply_weight(BranchState state, const RotationMesh& mesh) {
  if (mesh.dim() != state.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "mesh dim " + std::to_string(mesh.dim()) +
                                                  " vs state dim " +
                                                  std::to_string(state.dim()));
  }
  return apply_weight(std::move(state), build_matrix(mesh));
}

/// One uniform draw in [0, 2*pi).
template <class Rng>
double random_angle(Rng& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::uniform_real_distribution<double> dist(0.0, two_pi);
  double theta = dist(rng);
  // libstdc++ can round up to the closed endpoint.
  while (theta >= two_pi) theta = dist(rng);
  return theta;
}

/// Canonical mesh with every angle drawn uniformly from [0, 2*pi).
template <class Rng>
RotationMesh random_mesh(std::size_t dim, Rng& rng) {
  std::vector<double> thetas(mesh_size(dim));
  for (auto& t : thetas) t = random_angle(rng);
  return RotationMesh::canonical(dim, thetas);
}

}  // namespace qdl
