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

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "openecho/kernels.hpp"
#include "openecho/models.hpp"
#include "openecho/operator_core.hpp"

namespace openecho {

/// e^{-iAt} for one fixed generator A and many times t.
///
/// The eigendecomposition is computed once at construction. When the
/// eigenvector matrix is worse conditioned than the threshold, no spectral
/// cache is kept and every time point goes through the Padé exponential.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(Operator generator,
                              double condition_threshold = kTolerances.condition_threshold);

  const Operator& generator() const { return generator_; }
  const std::optional<Eigensystem>& spectral_cache() const { return cache_; }
  bool ill_conditioned() const { return !cache_.has_value(); }
  double condition() const { return condition_; }

  CVector apply(const CVector& psi0, double t) const;
  Operator matrix(double t) const;

  /// psi(t_k) for every t_k; the spectral coefficients are shared across times.
  std::vector<CVector> apply_on_grid(const CVector& psi0, std::span<const double> times,
                                     Exec exec = Exec::kParallel) const;

 private:
  Operator generator_;
  std::optional<Eigensystem> cache_;
  double condition_ = 1.0;
};

/// H^D = H_s - i H_d on the d^2-dimensional doubled space:
///   H_s = H (x) I - I (x) H^T
///   H_d = gamma sum_m [ -2 L_m (x) L_m^* + (L_m^dag L_m) (x) I + I (x) (L_m^dag L_m)^* ]
class DoubledHamiltonian {
 public:
  explicit DoubledHamiltonian(const LindbladModel& model, const Tolerances& tol = kTolerances);

  const Operator& hs() const { return hs_; }
  const Operator& hd() const { return hd_; }
  const Operator& hD() const { return propagator_.generator(); }
  const SpectralPropagator& propagator() const { return propagator_; }

  std::size_t dim() const { return dim_; }
  std::size_t dim2() const { return dim_ * dim_; }
  double gamma() const { return gamma_; }
  bool hermitian_jumps() const { return hermitian_jumps_; }

 private:
  Operator hs_;
  Operator hd_;
  SpectralPropagator propagator_;
  std::size_t dim_;
  double gamma_;
  bool hermitian_jumps_;
};

DoubledHamiltonian build_doubled(const LindbladModel& model);

/// psi(t) = e^{-i H^D t} psi0 at each requested time (sorted, >= 0).
std::vector<VectorizedState> propagate(const DoubledHamiltonian& hd, const VectorizedState& psi0,
                                       std::span<const double> times, Exec exec = Exec::kParallel);

/// Worst-case deviations of a trajectory from a physical density matrix.
struct StateInvariants {
  double max_trace_deviation = 0.0;  // |<vec I|psi(t)> - Tr rho0|
  double max_hermiticity_deviation = 0.0;
  double min_eigenvalue = 0.0;       // of (rho + rho^dag)/2, over all samples

  bool ok(double tol = kTolerances.invariant) const {
    return max_trace_deviation <= tol && max_hermiticity_deviation <= tol && min_eigenvalue >= -tol;
  }
};

StateInvariants check_state_invariants(std::span<const VectorizedState> states, Complex trace0,
                                       Exec exec = Exec::kParallel);

// ---------------------------------------------------------------------------
// Direct time stepping of the master equation
// ---------------------------------------------------------------------------

/// Right-hand side of the master equation evaluated on matrices, with the
/// non-Hermitian effective Hamiltonian precomputed.
class MasterEquationRhs {
 public:
  explicit MasterEquationRhs(const LindbladModel& model);
  Operator operator()(const Operator& rho) const;

 private:
  Operator effective_;  // -iH - gamma sum L^dag L
  std::vector<Operator> jumps_;
  std::vector<Operator> jumps_dag_;
  double gamma_;
};

Operator lindblad_rhs(const LindbladModel& model, const Operator& rho);

using MatrixRhs = std::function<Operator(const Operator&)>;

/// Fixed-step classical RK4 from t = 0; each output time is hit exactly by
/// splitting its interval into equal steps no larger than dt.
std::vector<Operator> integrate_rk4(const MatrixRhs& rhs, const Operator& x0, std::span<const double> times,
                                    double dt);

enum class StepCheck { kValidate, kSkip };

/// Independent fourth-order integration of the master equation. With
/// kValidate the run is repeated at dt/2 and NumericalError is thrown when
/// any output moves by more than the invariant tolerance.
std::vector<Operator> rk4_oracle(const LindbladModel& model, const Operator& rho0, std::span<const double> times,
                                 double dt, StepCheck check = StepCheck::kValidate);

/// Step size giving ||generator|| * dt = `fraction`, from a spectral-norm bound.
double suggested_rk4_step(const LindbladModel& model, double fraction = 0.05);

}  // namespace openecho
