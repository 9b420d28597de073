// Copyright 2026 The openecho Authors
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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace openecho {

using Complex = std::complex<double>;

/// Dense complex square matrix, row-major. Row-major storage makes the
/// row-stacking vectorization a plain reinterpretation of the buffer.
using Operator = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on a value (not a shape) was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical routine failed (eigensolver, step-size validation, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Operator is not supported on the required tensor factor.
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Rejected experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

/// Every numerical threshold the library uses, in one place.
struct Tolerances {
  double structural = 1e-10;           // Hermiticity, unitarity, algebra identities
  double dynamical = 1e-6;             // cross-method agreement of time evolution
  double invariant = 1e-8;             // trace / positivity along trajectories
  double condition_threshold = 1e8;    // eigenvector conditioning before Padé fallback
  double degeneracy = 1e-6;            // H_d zero-mode threshold, relative to gamma
  double ground_gap = 1e-9;            // below this the ground state is flagged degenerate
  double zero_mode = 1e-8;             // |lambda| below this counts as a steady state
};

inline constexpr Tolerances kTolerances{};

// ---------------------------------------------------------------------------
// VectorizedState
// ---------------------------------------------------------------------------

/// Doubled-space wave function: components rho_{mn} at index m*d + n.
class VectorizedState {
 public:
  VectorizedState() = default;
  explicit VectorizedState(CVector entries);

  std::size_t dim2() const { return static_cast<std::size_t>(entries_.size()); }
  std::size_t dim() const { return dim_; }
  const CVector& entries() const { return entries_; }
  CVector& entries() { return entries_; }

 private:
  CVector entries_;
  std::size_t dim_ = 0;
};

}  // namespace openecho
