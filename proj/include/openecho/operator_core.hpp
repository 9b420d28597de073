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
#include <string>
#include <vector>

#include "openecho/types.hpp"

namespace openecho {

// ---------------------------------------------------------------------------
// Construction and predicates
// ---------------------------------------------------------------------------

Operator identity(std::size_t d);

/// A (x) B with (A(x)B)[(m,n),(i,j)] = A[m,i] * B[n,j].
Operator kron(const Operator& a, const Operator& b);

/// Left-to-right Kronecker product of a list (empty list gives the 1x1 identity).
Operator kron_all(const std::vector<Operator>& factors);

bool is_square(const Operator& a);
bool is_hermitian(const Operator& a, double tol = kTolerances.structural);
bool is_unitary(const Operator& a, double tol = kTolerances.structural);
/// Hermitian within tol and smallest eigenvalue of (A + A^dag)/2 >= -tol.
bool is_psd(const Operator& a, double tol = kTolerances.structural);

/// Eigenvalues of the symmetrized (A + A^dag)/2, ascending.
RVector hermitian_eigenvalues(const Operator& a);

/// Hilbert-Schmidt inner product Tr(A^dag B).
Complex hs_inner(const Operator& a, const Operator& b);

// ---------------------------------------------------------------------------
// Vectorization (row stacking)
// ---------------------------------------------------------------------------

VectorizedState vec(const Operator& rho);
Operator unvec(const VectorizedState& psi);
/// Vectorized identity; the doubled-space EPR state (unnormalized).
VectorizedState vec_identity(std::size_t d);

// ---------------------------------------------------------------------------
// Matrix functions
// ---------------------------------------------------------------------------

enum class PropagatorPath { kEigen, kPade };

struct Propagator {
  Operator value;           // e^{-iAt}
  PropagatorPath path = PropagatorPath::kEigen;
  double condition = 1.0;   // 2-norm condition number of the eigenvector matrix
  bool ill_conditioned = false;
};

/// Complex eigendecomposition A = V diag(lambda) V^{-1}.
struct Eigensystem {
  CVector eigenvalues;
  Operator vectors;
  Operator inverse;
  double condition = 1.0;
};

Eigensystem eigensystem(const Operator& a);

/// exp(A) by scaling and squaring with the [13/13] Padé approximant.
Operator expm_pade(const Operator& a);

/// e^{-iAt} through an eigendecomposition; no conditioning check.
Operator propagator_eigen(const Operator& a, double t);
/// e^{-iAt} through expm_pade.
Operator propagator_pade(const Operator& a, double t);

/// e^{-iAt} for a general (non-Hermitian) A. Uses the eigendecomposition
/// unless the eigenvector matrix condition number exceeds the threshold, in
/// which case the result is flagged ill-conditioned and the Padé path is used.
Propagator mat_func_propagator(const Operator& a, double t,
                               double condition_threshold = kTolerances.condition_threshold);

// ---------------------------------------------------------------------------
// Subsystems
// ---------------------------------------------------------------------------

enum class Keep { kA, kB };

/// Trace out one factor of an operator on C^{dA} (x) C^{dB} (A is the
/// more significant index).
Operator partial_trace(const Operator& o, std::size_t dim_a, std::size_t dim_b, Keep keep);

// ---------------------------------------------------------------------------
// Random and structured unitaries
// ---------------------------------------------------------------------------

class Rng;

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix).
Operator haar_unitary(std::size_t d, std::uint64_t seed);
Operator haar_unitary(std::size_t d, Rng& rng);

/// Single-qubit Paulis in the order I, X, Y, Z.
const std::vector<Operator>& single_qubit_paulis();

/// All 4^n Pauli strings; string index k has base-4 digits
/// (k_0 ... k_{n-1}) with qubit 0 the most significant factor.
std::vector<Operator> pauli_basis(int n_qubits);
std::string pauli_label(std::size_t index, int n_qubits);

/// log2(d) when d is a power of two, otherwise -1.
int qubit_count(std::size_t d);

}  // namespace openecho
