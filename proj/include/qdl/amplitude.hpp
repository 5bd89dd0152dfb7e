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
 * @file amplitude.hpp
 * Real amplitude vectors and the two-branch GHZ state.
 *
 * The (n+1)-qubit GHZ register is never stored as a 2^(n+1) state vector.
 * Every transformation in the network acts on one ancilla branch only, so the
 * state is kept as the pair
 *
 *     gamma |0>_anc |k>  +  lambda |1>_anc |v>
 *
 * with |k> the network branch and |v> the label branch.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "qdl/error.hpp"

namespace qdl {

/// Tolerance on unit norm and on the branch-weight identities.
inline constexpr double kNormTolerance = 1e-12;

constexpr bool is_power_of_two(std::size_t n) {
  return n != 0 && (n & (n - 1)) == 0;
}

/// log2 of a power of two.
constexpr std::size_t log2_exact(std::size_t n) {
  std::size_t bits = 0;
  while (n > 1) {
    n >>= 1;
    ++bits;
  }
  return bits;
}

/**
 * @brief Real vector of probability amplitudes of dimension 2^n, n >= 1.
 *
 * The dimension invariant is enforced at construction. Normalization is not:
 * intermediate quantities (for example the raw data before encoding) share
 * this type, and callers check `is_normalized()` where the contract needs it.
 */
class AmplitudeVector {
 public:
  explicit AmplitudeVector(Eigen::VectorXd amps) : amps_(std::move(amps)) {
    check_dim(static_cast<std::size_t>(amps_.size()));
  }

  AmplitudeVector(std::initializer_list<double> amps)
      : AmplitudeVector(from_span(std::span<const double>(amps.begin(), amps.size()))) {}

  static AmplitudeVector from_span(std::span<const double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] = values[i];
    }
    return AmplitudeVector(std::move(v));
  }

  /// Computational basis vector e_index.
  static AmplitudeVector basis(std::size_t dim, std::size_t index) {
    check_dim(dim);
    if (index >= dim) {
      throw Error(ErrorKind::BadDimension, "basis index " + std::to_string(index) +
                                               " out of range for dim " +
                                               std::to_string(dim));
    }
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return AmplitudeVector(std::move(v));
  }

  [[nodiscard]] std::size_t dim() const noexcept {
    return static_cast<std::size_t>(amps_.size());
  }
  [[nodiscard]] std::size_t qubits() const noexcept { return log2_exact(dim()); }

  [[nodiscard]] double operator[](std::size_t i) const {
    return amps_[static_cast<Eigen::Index>(i)];
  }
  [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return amps_; }

  [[nodiscard]] double norm_squared() const { return amps_.squaredNorm(); }
  [[nodiscard]] bool is_normalized(double tol = kNormTolerance) const {
    return std::abs(norm_squared() - 1.0) <= tol;
  }

  friend bool operator==(const AmplitudeVector& a, const AmplitudeVector& b) {
    return a.amps_.size() == b.amps_.size() && a.amps_ == b.amps_;
  }

 private:
  static void check_dim(std::size_t dim) {
    if (dim < 2 || !is_power_of_two(dim)) {
      throw Error(ErrorKind::BadDimension,
                  "amplitude vector dimension " + std::to_string(dim) +
                      " is not a power of two >= 2");
    }
  }

  Eigen::VectorXd amps_;
};

namespace detail {

inline void require_same_dim(const AmplitudeVector& u, const AmplitudeVector& v) {
  if (u.dim() != v.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "dim " + std::to_string(u.dim()) + " vs " + std::to_string(v.dim()));
  }
}

inline void require_normalized(const AmplitudeVector& u, std::string_view what) {
  if (!u.is_normalized()) {
    throw Error(ErrorKind::NotNormalized,
                std::string(what) + " has squared norm " +
                    std::to_string(u.norm_squared()));
  }
}

}  // namespace detail

/// |x> = raw / A with A = sqrt(sum raw_i^2).
inline AmplitudeVector amplitude_encode(std::span<const double> raw) {
  if (!is_power_of_two(raw.size()) || raw.size() < 2) {
    throw Error(ErrorKind::BadDimension,
                "cannot encode " + std::to_string(raw.size()) + " values");
  }
  AmplitudeVector v = AmplitudeVector::from_span(raw);
  const double norm = std::sqrt(v.norm_squared());
  if (norm == 0.0) {
    throw Error(ErrorKind::ZeroVector, "all components are zero");
  }
  return AmplitudeVector(v.values() / norm);
}

inline AmplitudeVector amplitude_encode(std::initializer_list<double> raw) {
  return amplitude_encode(std::span<const double>(raw.begin(), raw.size()));
}

inline double inner(const AmplitudeVector& u, const AmplitudeVector& v) {
  detail::require_same_dim(u, v);
  return u.values().dot(v.values());
}

/// Squared Euclidean distance (u - v)^T (u - v) between two unit vectors.
inline double distance_squared(const AmplitudeVector& u, const AmplitudeVector& v) {
  detail::require_same_dim(u, v);
  detail::require_normalized(u, "first vector");
  detail::require_normalized(v, "second vector");
  return (u.values() - v.values()).squaredNorm();
}

/**
 * @brief The GHZ register as a branch pair.
 *
 * `raw_weight` is the unnormalized |0>-branch weight sqrt(prod a_l) carried
 * across nonlinear layers; gamma and lambda are always derived from it.
 */
struct BranchState {
  double gamma;
  double lambda;
  AmplitudeVector out_vec;
  AmplitudeVector label_vec;
  double raw_weight;

  [[nodiscard]] std::size_t dim() const noexcept { return out_vec.dim(); }

  /// Checks every structural invariant; returns an empty string when valid.
  [[nodiscard]] std::string violation() const {
    if (out_vec.dim() != label_vec.dim()) return "branch dimensions differ";
    if (!out_vec.is_normalized()) return "out_vec not normalized";
    if (!label_vec.is_normalized()) return "label_vec not normalized";
    if (std::abs(gamma * gamma + lambda * lambda - 1.0) > kNormTolerance) {
      return "gamma^2 + lambda^2 != 1";
    }
    if (!(raw_weight > 0.0)) return "raw_weight not positive";
    const double expected = raw_weight / std::sqrt(raw_weight * raw_weight + 1.0);
    if (std::abs(gamma - expected) > kNormTolerance) {
      return "gamma inconsistent with raw_weight";
    }
    return {};
  }
  [[nodiscard]] bool valid() const { return violation().empty(); }
};

/// (|0>|0...0> + |1>|1...1>)/sqrt(2) on n data qubits.
inline BranchState ghz_init(std::size_t n) {
  if (n < 1 || n >= 8 * sizeof(std::size_t) - 1) {
    throw Error(ErrorKind::BadDimension, "GHZ register needs n >= 1 data qubits");
  }
  const std::size_t dim = std::size_t{1} << n;
  const double h = 1.0 / std::sqrt(2.0);
  return BranchState{h, h, AmplitudeVector::basis(dim, 0),
                     AmplitudeVector::basis(dim, dim - 1), 1.0};
}

/// Prepares |x> on the |0> branch. Unitary, so branch weights are untouched.
inline BranchState set_input(BranchState state, const AmplitudeVector& x) {
  detail::require_same_dim(state.out_vec, x);
  detail::require_normalized(x, "input");
  state.out_vec = x;
  return state;
}

}  // namespace qdl
