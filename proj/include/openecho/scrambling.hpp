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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "openecho/doubled_space.hpp"

namespace openecho {

/// A-first tensor layout: H = H_A (x) H_B.
struct BipartiteSplit {
  std::size_t dim_a = 1;
  std::size_t dim_b = 1;

  BipartiteSplit() = default;
  BipartiteSplit(std::size_t da, std::size_t db);
  std::size_t dim() const { return dim_a * dim_b; }
};

// ---------------------------------------------------------------------------
// Operator evolutions
// ---------------------------------------------------------------------------

/// The four operator-level Lindblad flows, dR/dt = G[R]:
///   kForward        +i[H,R] + 2g sum L^dag R L - g sum {L^dag L, R}   (sign of the middle term
///                                                                     flipped with fermionic_sign)
///   kBackward       -i[H,R] + 2g sum L^dag R L - g sum {L^dag L, R}
///   kAdjoint        -i[H,R] + 2g sum L R L^dag - g sum {L^dag L, R}
///   kAdjointDagger  +i[H,R] + 2g sum L R L^dag - g sum {L^dag L, R}
enum class OperatorFlow { kForward, kBackward, kAdjoint, kAdjointDagger };

std::string to_string(OperatorFlow f);

/// Matrix G on vec(R) (row stacking) with d vec(R)/dt = G vec(R).
Operator flow_generator(const LindbladModel& model, OperatorFlow flow, bool fermionic_sign = false);

/// The same flow evaluated directly on matrices, for time stepping.
MatrixRhs flow_rhs(const LindbladModel& model, OperatorFlow flow, bool fermionic_sign = false);

/// e^{Gt} for one flow, with the spectral cache shared across calls.
class OperatorEvolution {
 public:
  OperatorEvolution(const LindbladModel& model, OperatorFlow flow, bool fermionic_sign = false);

  Operator apply(const Operator& r, double t) const;
  std::size_t dim() const { return dim_; }
  OperatorFlow flow() const { return flow_; }

 private:
  SpectralPropagator propagator_;  // generator iG, so e^{-i(iG)t} = e^{Gt}
  std::size_t dim_;
  OperatorFlow flow_;
};

Operator op_evolve_forward(const LindbladModel& model, const Operator& r, double t, bool fermionic_sign = false);
Operator op_evolve_backward(const LindbladModel& model, const Operator& r, double t);
Operator op_evolve_adjoint(const LindbladModel& model, const Operator& r, double t);
Operator op_evolve_adjoint_dagger(const LindbladModel& model, const Operator& r, double t);

// ---------------------------------------------------------------------------
// Open-system OTOC
// ---------------------------------------------------------------------------

/// W_A if w = W_A (x) I_B within tol, otherwise SupportError.
Operator require_support_a(const Operator& w, const BipartiteSplit& split, double tol = kTolerances.structural);
/// R_B if r = I_A (x) R_B within tol, otherwise SupportError.
Operator require_support_b(const Operator& r, const BipartiteSplit& split, double tol = kTolerances.structural);

enum class TwirlMethod { kExact, kPauli, kMonteCarlo };

std::string to_string(TwirlMethod m);
TwirlMethod twirl_method_from_string(const std::string& s);

struct TwirlEstimate {
  double value = 0.0;
  double stderr_ = 0.0;  // zero for exact sums
  std::size_t n_samples = 0;
  TwirlMethod method = TwirlMethod::kExact;
};

/// F^D(t) = (1/d) Tr{ R^dag e^{L^dag t}[ W^dag e^{L t}[R] W ] } for W on A and R on B.
/// Forward/backward/adjoint-dagger evolutions are built once and reused.
class OpenOtoc {
 public:
  OpenOtoc(const LindbladModel& model, BipartiteSplit split, bool fermionic_sign = false);

  /// Full-space W and R (checked for support).
  Complex value(const Operator& w, const Operator& r, double t) const;

  /// Average over W_A. `exact` uses the partial-trace formula, `pauli` sums
  /// the 4^{n_A} Pauli strings (d_A must be a power of two), `montecarlo`
  /// averages n_samples Haar unitaries drawn from `seed`.
  TwirlEstimate average_w(const Operator& r, double t, TwirlMethod method, std::size_t n_samples = 10000,
                          std::uint64_t seed = 1, Exec exec = Exec::kParallel) const;

  /// Average over both W_A and R_B (exact twirls).
  double average_ab(double t, Exec exec = Exec::kParallel) const;

  const BipartiteSplit& split() const { return split_; }

 private:
  // (1/(d d_A)) Tr_B{ Tr_A[adjdag_t[r_dag]] Tr_A[fwd_t[r]] }, with r and r_dag independent.
  Complex exact_w_average(const Operator& r, const Operator& r_dag, double t) const;

  BipartiteSplit split_;
  OperatorEvolution forward_;
  OperatorEvolution backward_;
  OperatorEvolution adjoint_dagger_;
};

Complex otoc_open(const LindbladModel& model, const Operator& w, const Operator& r, const BipartiteSplit& split,
                  double t, bool fermionic_sign = false);

TwirlEstimate haar_average_w(const LindbladModel& model, const Operator& r, const BipartiteSplit& split, double t,
                             TwirlMethod method, std::size_t n_samples = 10000, std::uint64_t seed = 1);

double average_otoc_ab(const LindbladModel& model, const BipartiteSplit& split, double t);

/// Closed-system OTOC (1/d) Tr[R^dag(t) W^dag R(t) W] with R(t) = e^{iHt} R e^{-iHt}.
Complex closed_otoc(const Operator& h, const Operator& w, const Operator& r, double t);

// ---------------------------------------------------------------------------
// Noise-averaged Loschmidt echo
// ---------------------------------------------------------------------------

/// i.i.d. GUE-normalized Hermitian noises on B, E|V_ij|^2 = strength^2 / d_B.
struct NoiseEnsemble {
  std::size_t n_samples = 64;  // independent (alpha, alpha') pairs
  double strength = 0.1;
  std::uint64_t seed = 1;

  Operator draw(std::size_t d, std::uint64_t index) const;
};

struct NoiseAveragedLe {
  double value = 0.0;  // (1/d_B^2) mean Re Tr[A_a^dag A_a'], A = e^{-i(H^D + V^D) t}
  double stderr_ = 0.0;
  double normalized = 0.0;  // same with each A Frobenius-normalized (1 at strength 0)
  double normalized_stderr = 0.0;
  std::size_t n_samples = 0;
};

NoiseAveragedLe noise_averaged_le(const LindbladModel& model_b, const NoiseEnsemble& noise, double t,
                                  Exec exec = Exec::kParallel);

// ---------------------------------------------------------------------------
// OTOC and second Rényi entropy
// ---------------------------------------------------------------------------

struct OtocRenyi {
  double lhs = 0.0;  // Tr_A rho_A(t)^2 = exp(-S_A^(2))
  double rhs = 0.0;  // (1/d_B) sum_P Tr{ V e^{L^dag t}[ P^dag e^{L t}[V] P ] }, P over B Pauli strings
};

/// Requires Hermitian jumps and d_B a power of two.
OtocRenyi otoc_renyi_check(const LindbladModel& model, const Operator& o, const BipartiteSplit& split, double t);
/// Same at several times, sharing the evolutions.
std::vector<OtocRenyi> otoc_renyi_check(const LindbladModel& model, const Operator& o, const BipartiteSplit& split,
                                        std::span<const double> times);

// ---------------------------------------------------------------------------
// Measurement protocol
// ---------------------------------------------------------------------------

/// rho0 = M_B, forward evolution, W^dag rho W, backward evolution, then
/// Tr[rho2 M_B]. Evolutions are RK4-integrated on matrices with step dt
/// (0 picks one from the model norms).
double protocol_simulate(const LindbladModel& model, const Operator& w, const Operator& m,
                         const BipartiteSplit& split, double t, double dt = 0.0);

// ---------------------------------------------------------------------------
// Demo models
// ---------------------------------------------------------------------------

/// One system qubit A coupled to a two-qubit bath chain B:
///   H = J X_A + coupling Z_A X_1 + J (X_1 X_2 + Z_1 + 0.7 Z_2 + 0.4 X_2),
/// dephasing Z on the two B qubits at rate gamma.
LindbladModel chain_model_1p2(double coupling_j, double coupling, double gamma);
/// The B part alone (same H_B and jumps).
LindbladModel chain_bath_model(double coupling_j, double gamma);

double spearman_correlation(std::span<const double> x, std::span<const double> y);

void to_json(nlohmann::json& j, const TwirlEstimate& e);

}  // namespace openecho
