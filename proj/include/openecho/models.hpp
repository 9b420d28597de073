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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "openecho/types.hpp"

namespace openecho {

/// Hamiltonian, jump operators and dissipation strength of
///   d rho/dt = -i[H, rho] + 2 gamma sum_m L_m rho L_m^dag - gamma sum_m {L_m^dag L_m, rho}.
class LindbladModel {
 public:
  LindbladModel(Operator hamiltonian, std::vector<Operator> jumps, double gamma,
                double tol = kTolerances.structural);

  const Operator& hamiltonian() const { return hamiltonian_; }
  const std::vector<Operator>& jumps() const { return jumps_; }
  double gamma() const { return gamma_; }
  std::size_t dim() const { return static_cast<std::size_t>(hamiltonian_.rows()); }
  bool hermitian_jumps(double tol = kTolerances.structural) const;

  /// Same H and jumps with a different dissipation strength.
  LindbladModel with_gamma(double gamma) const;

 private:
  Operator hamiltonian_;
  std::vector<Operator> jumps_;
  double gamma_;
};

// ---------------------------------------------------------------------------
// Majorana fermions and SYK
// ---------------------------------------------------------------------------

/// Jordan-Wigner Majoranas on N/2 qubits, normalized to {chi_i, chi_j} = delta_ij:
///   chi_{2k}   = Z...Z X I...I / sqrt(2),  chi_{2k+1} = Z...Z Y I...I / sqrt(2).
std::vector<Operator> majorana_ops(int n_majorana);

/// Fermion parity Z (x) ... (x) Z on N/2 qubits.
Operator fermion_parity(int n_majorana);

enum class VarianceConvention {
  kPaper,     // 3! (q-1)! J^2 / N^3 = 36 J^2 / N^3
  kStandard,  // 3! J^2 / N^3
};

std::string to_string(VarianceConvention c);
VarianceConvention variance_convention_from_string(const std::string& s);

double coupling_variance(int n_majorana, double coupling_j, VarianceConvention c);

struct SykCoupling {
  std::array<int, 4> sites;  // strictly increasing, zero-based
  double value;
};

/// One disorder realization of the q = 4 SYK couplings.
struct SykEnsemble {
  int n_majorana = 0;
  double coupling_j = 1.0;
  std::uint64_t seed = 0;
  VarianceConvention convention = VarianceConvention::kPaper;
  std::vector<SykCoupling> couplings;  // lexicographic order of (i<j<k<l)

  /// Draws couplings i.i.d. Gaussian, zero mean, variance from `convention`.
  static SykEnsemble draw(int n_majorana, double coupling_j, std::uint64_t seed,
                          VarianceConvention convention = VarianceConvention::kPaper);
};

Operator syk_hamiltonian(const SykEnsemble& ensemble);

enum class SiteSelection { kAll, kHalf };

std::string to_string(SiteSelection s);
SiteSelection site_selection_from_string(const std::string& s);

/// SYK Hamiltonian with jumps chi_1..chi_N (kAll) or chi_1..chi_{N/2} (kHalf).
LindbladModel dissipative_syk(const SykEnsemble& ensemble, double gamma, SiteSelection sites);

struct GroundState {
  Operator rho;          // |g><g|
  CVector vector;        // |g>, first non-negligible component real positive
  double energy = 0.0;
  double gap = 0.0;      // E_1 - E_0 (0 for d = 1)
  bool degenerate = false;
};

/// Lowest eigenvector of a Hermitian H. A gap below `gap_tol` sets
/// `degenerate`; the lowest-index eigenvector is still returned.
GroundState ground_state(const Operator& hamiltonian, double gap_tol = kTolerances.ground_gap);

/// Lowest eigenvector of H inside the eigenspace of a Hermitian `symmetry`
/// (commuting with H) with eigenvalue `sector`; gap measured within the sector.
GroundState ground_state_in_sector(const Operator& hamiltonian, const Operator& symmetry, double sector = 1.0,
                                   double gap_tol = kTolerances.ground_gap);

// ---------------------------------------------------------------------------
// Generic qubit models for identity checks
// ---------------------------------------------------------------------------

enum class JumpKind {
  kPauliZ,           // Z on every qubit (Hermitian)
  kRandomHermitian,  // one random Hermitian jump per qubit
  kRandomGeneral,    // one random non-Hermitian jump per qubit
};

/// Random Hermitian H (entries of scale `coupling_j`) on n qubits with
/// single-qubit jumps of the requested kind.
LindbladModel random_qubit_model(int n_qubits, double coupling_j, double gamma, JumpKind kind,
                                 std::uint64_t seed);

/// Random Hermitian matrix with E|H_ij|^2 = scale^2 / d.
Operator random_hermitian(std::size_t d, double scale, std::uint64_t seed);

/// Operator acting as `op` on qubit `site` of an n-qubit register.
Operator embed_qubit_operator(const Operator& op, int site, int n_qubits);

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

/// Everything needed to rebuild a dissipative SYK model.
struct SykModelSpec {
  int n_majorana = 6;
  double coupling_j = 1.0;
  std::uint64_t seed = 1;
  double gamma = 0.0;
  SiteSelection sites = SiteSelection::kAll;
  VarianceConvention convention = VarianceConvention::kPaper;

  LindbladModel build() const;
};

void to_json(nlohmann::json& j, const SykModelSpec& s);
void from_json(const nlohmann::json& j, SykModelSpec& s);

}  // namespace openecho
