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
 * @file network.hpp
 * Feedforward network of UU -> NL blocks acting on the |0> branch.
 *
 * A "3-layer" network (input, hidden, output) has two blocks and a
 * "4-layer" network has three. The forward pass is
 *
 *     ghz_init -> set_input -> prepare_label -> (apply_weight -> apply_nonlinear)^B
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdl/amplitude.hpp"
#include "qdl/error.hpp"
#include "qdl/measurement.hpp"
#include "qdl/nonlinear.hpp"
#include "qdl/rotation_mesh.hpp"

namespace qdl {

/// An encoded input together with its label state.
struct LabeledSample {
  AmplitudeVector input;
  AmplitudeVector label;
  std::size_t class_index = 0;
};

class NetworkConfig {
 public:
  NetworkConfig(std::size_t dim, std::vector<RotationMesh> meshes)
      : dim_(dim), meshes_(std::move(meshes)) {
    if (meshes_.empty()) {
      throw Error(ErrorKind::BadMesh, "network needs at least one UU block");
    }
    for (const auto& m : meshes_) {
      if (m.dim() != dim_) {
        throw Error(ErrorKind::DimensionMismatch, "mesh dim " + std::to_string(m.dim()) +
                                                      " in a dim-" + std::to_string(dim_) +
                                                      " network");
      }
    }
  }

  static NetworkConfig identity(std::size_t dim, std::size_t blocks) {
    return NetworkConfig(dim, std::vector<RotationMesh>(blocks, RotationMesh::identity(dim)));
  }

  /// Fresh network with every angle uniform in [0, 2*pi), meshes drawn in
  /// block order from one stream.
  static NetworkConfig random(std::size_t dim, std::size_t blocks, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<RotationMesh> meshes;
    meshes.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) meshes.push_back(random_mesh(dim, rng));
    return NetworkConfig(dim, std::move(meshes));
  }

  /// Neuron-layer count (3 or 4 in the Iris experiment) to UU block count.
  static std::size_t blocks_for_layers(std::size_t layers) {
    if (layers < 2) {
      throw Error(ErrorKind::Usage, "a network needs at least 2 neuron layers");
    }
    return layers - 1;
  }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t n_uu_layers() const noexcept { return meshes_.size(); }
  [[nodiscard]] std::size_t neuron_layers() const noexcept { return meshes_.size() + 1; }
  [[nodiscard]] std::size_t parameter_count() const noexcept {
    return meshes_.size() * mesh_size(dim_);
  }
  [[nodiscard]] const std::vector<RotationMesh>& meshes() const noexcept { return meshes_; }

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;

 private:
  std::size_t dim_;
  std::vector<RotationMesh> meshes_;
};

/// Flat parameter vector: block-major, canonical mesh order within a block.
inline std::vector<double> param_view(const NetworkConfig& config) {
  std::vector<double> flat;
  flat.reserve(config.parameter_count());
  for (const auto& m : config.meshes()) {
    for (const auto& r : m.rotations()) flat.push_back(r.theta);
  }
  return flat;
}

/// Inverse of param_view: same structure, new angles.
inline NetworkConfig with_params(const NetworkConfig& config, std::span<const double> flat) {
  if (flat.size() != config.parameter_count()) {
    throw Error(ErrorKind::BadMesh, "expected " + std::to_string(config.parameter_count()) +
                                        " parameters, got " + std::to_string(flat.size()));
  }
  std::vector<RotationMesh> meshes;
  meshes.reserve(config.n_uu_layers());
  std::size_t offset = 0;
  for (const auto& m : config.meshes()) {
    const std::size_t n = m.rotations().size();
    meshes.push_back(m.with_angles(flat.subspan(offset, n)));
    offset += n;
  }
  return NetworkConfig(config.dim(), std::move(meshes));
}

/// Weight matrices built once per parameter point and shared by every sample.
class CompiledNetwork {
 public:
  explicit CompiledNetwork(const NetworkConfig& config) : dim_(config.dim()) {
    weights_.reserve(config.n_uu_layers());
    for (const auto& m : config.meshes()) weights_.push_back(build_matrix(m));
  }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] const std::vector<Eigen::MatrixXd>& weights() const noexcept { return weights_; }

 private:
  std::size_t dim_;
  std::vector<Eigen::MatrixXd> weights_;
};

struct ForwardPass {
  BranchState state;
  std::vector<double> layer_factors;  // a_l per nonlinear layer
};

inline ForwardPass forward_traced(const CompiledNetwork& net, const AmplitudeVector& input,
                                  const AmplitudeVector& label) {
  if (input.dim() != net.dim() || label.dim() != net.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "sample dim does not match network dim " +
                                                  std::to_string(net.dim()));
  }
  BranchState state = ghz_init(log2_exact(net.dim()));
  state = set_input(std::move(state), input);
  state = prepare_label(std::move(state), label);

  std::vector<double> factors;
  factors.reserve(net.weights().size());
  for (std::size_t layer = 0; layer < net.weights().size(); ++layer) {
    state = apply_weight(std::move(state), net.weights()[layer]);
    double a = 0.0;
    try {
      state = apply_nonlinear(std::move(state), &a);
    } catch (const NonlinearCollapse& e) {
      throw NonlinearCollapse(e.a(), layer);
    }
    factors.push_back(a);
  }
  return {std::move(state), std::move(factors)};
}

inline BranchState forward(const CompiledNetwork& net, const AmplitudeVector& input,
                           const AmplitudeVector& label) {
  return forward_traced(net, input, label).state;
}

inline BranchState forward(const NetworkConfig& config, const AmplitudeVector& input,
                           const AmplitudeVector& label) {
  return forward(CompiledNetwork(config), input, label);
}

/// |k> alone. The label branch never couples to it, so a fixed placeholder
/// label is used.
inline AmplitudeVector output_state(const CompiledNetwork& net, const AmplitudeVector& input) {
  return forward(net, input, AmplitudeVector::basis(net.dim(), net.dim() - 1)).out_vec;
}

inline AmplitudeVector output_state(const NetworkConfig& config, const AmplitudeVector& input) {
  return output_state(CompiledNetwork(config), input);
}

}  // namespace qdl
