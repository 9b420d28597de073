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

#include "openecho/models.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "openecho/operator_core.hpp"
#include "openecho/rng.hpp"

namespace openecho {

LindbladModel::LindbladModel(Operator hamiltonian, std::vector<Operator> jumps, double gamma, double tol)
    : hamiltonian_(std::move(hamiltonian)), jumps_(std::move(jumps)), gamma_(gamma) {
  if (!is_square(hamiltonian_)) throw DimensionError("LindbladModel: Hamiltonian is not square");
  if (!is_hermitian(hamiltonian_, tol)) throw InvalidArgument("LindbladModel: Hamiltonian is not Hermitian");
  if (!(gamma_ >= 0.0) || !std::isfinite(gamma_)) throw InvalidArgument("LindbladModel: gamma must be finite and >= 0");
  for (const auto& l : jumps_)
    if (l.rows() != hamiltonian_.rows() || l.cols() != hamiltonian_.cols())
      throw DimensionError("LindbladModel: jump operator dimension differs from the Hamiltonian");
}

bool LindbladModel::hermitian_jumps(double tol) const {
  for (const auto& l : jumps_)
    if (!is_hermitian(l, tol)) return false;
  return true;
}

LindbladModel LindbladModel::with_gamma(double gamma) const {
  return LindbladModel(hamiltonian_, jumps_, gamma);
}

// ---------------------------------------------------------------------------

std::vector<Operator> majorana_ops(int n_majorana) {
  if (n_majorana < 2 || n_majorana % 2 != 0)
    throw InvalidArgument("majorana_ops: N must be a positive even integer, got " + std::to_string(n_majorana));
  if (n_majorana > 12) throw InvalidArgument("majorana_ops: N > 12 is outside the supported range");
  const int n_qubits = n_majorana / 2;
  const auto& p = single_qubit_paulis();
  const double norm = 1.0 / std::sqrt(2.0);
  std::vector<Operator> out;
  out.reserve(static_cast<std::size_t>(n_majorana));
  for (int k = 0; k < n_qubits; ++k) {
    for (int which : {1, 2}) {
      std::vector<Operator> factors;
      for (int q = 0; q < n_qubits; ++q) factors.push_back(q < k ? p[3] : (q == k ? p[which] : p[0]));
      out.push_back(norm * kron_all(factors));
    }
  }
  return out;
}

Operator fermion_parity(int n_majorana) {
  if (n_majorana < 2 || n_majorana % 2 != 0) throw InvalidArgument("fermion_parity: N must be even");
  return kron_all(std::vector<Operator>(static_cast<std::size_t>(n_majorana / 2), single_qubit_paulis()[3]));
}

std::string to_string(VarianceConvention c) { return c == VarianceConvention::kPaper ? "paper" : "standard"; }

VarianceConvention variance_convention_from_string(const std::string& s) {
  if (s == "paper") return VarianceConvention::kPaper;
  if (s == "standard") return VarianceConvention::kStandard;
  throw InvalidArgument("unknown variance convention '" + s + "'");
}

double coupling_variance(int n_majorana, double coupling_j, VarianceConvention c) {
  const double n3 = std::pow(static_cast<double>(n_majorana), 3);
  const double prefactor = c == VarianceConvention::kPaper ? 36.0 : 6.0;
  return prefactor * coupling_j * coupling_j / n3;
}

SykEnsemble SykEnsemble::draw(int n_majorana, double coupling_j, std::uint64_t seed, VarianceConvention convention) {
  if (n_majorana < 2 || n_majorana % 2 != 0) throw InvalidArgument("SykEnsemble: N must be a positive even integer");
  SykEnsemble e;
  e.n_majorana = n_majorana;
  e.coupling_j = coupling_j;
  e.seed = seed;
  e.convention = convention;
  const double sigma = std::sqrt(coupling_variance(n_majorana, coupling_j, convention));
  Rng rng(seed);
  for (int i = 0; i < n_majorana; ++i)
    for (int j = i + 1; j < n_majorana; ++j)
      for (int k = j + 1; k < n_majorana; ++k)
        for (int l = k + 1; l < n_majorana; ++l) e.couplings.push_back({{i, j, k, l}, sigma * rng.normal()});
  return e;
}

Operator syk_hamiltonian(const SykEnsemble& ensemble) {
  const auto chi = majorana_ops(ensemble.n_majorana);
  const auto d = chi.front().rows();
  Operator h = Operator::Zero(d, d);
  for (const auto& c : ensemble.couplings) {
    const auto& [i, j, k, l] = c.sites;
    h += c.value * (chi[i] * chi[j] * chi[k] * chi[l]);
  }
  // Each quartic term is Hermitian; symmetrize away round-off.
  return 0.5 * (h + h.adjoint());
}

std::string to_string(SiteSelection s) { return s == SiteSelection::kAll ? "all" : "half"; }

SiteSelection site_selection_from_string(const std::string& s) {
  if (s == "all") return SiteSelection::kAll;
  if (s == "half") return SiteSelection::kHalf;
  throw InvalidArgument("invalid site selection '" + s + "' (expected all|half)");
}

LindbladModel dissipative_syk(const SykEnsemble& ensemble, double gamma, SiteSelection sites) {
  auto chi = majorana_ops(ensemble.n_majorana);
  if (sites == SiteSelection::kHalf) {
    chi.resize(chi.size() / 2);
  } else if (sites != SiteSelection::kAll) {
    throw InvalidArgument("dissipative_syk: invalid site selection");
  }
  return LindbladModel(syk_hamiltonian(ensemble), std::move(chi), gamma);
}

namespace {

void fix_phase(CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-12) {
      v *= std::conj(v(i)) / mag;
      v(i) = mag;
      return;
    }
  }
}

GroundState lowest_state(const Eigen::MatrixXcd& h, const Eigen::MatrixXcd* lift, double gap_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver{h};
  if (solver.info() != Eigen::Success) throw NumericalError("ground_state: eigensolver failed");
  GroundState g;
  g.energy = solver.eigenvalues()(0);
  g.gap = solver.eigenvalues().size() > 1 ? solver.eigenvalues()(1) - g.energy : 0.0;
  g.degenerate = solver.eigenvalues().size() > 1 && g.gap < gap_tol;
  g.vector = lift ? CVector(*lift * solver.eigenvectors().col(0)) : CVector(solver.eigenvectors().col(0));
  g.vector.normalize();
  fix_phase(g.vector);
  g.rho = g.vector * g.vector.adjoint();
  return g;
}

}  // namespace

GroundState ground_state(const Operator& hamiltonian, double gap_tol) {
  if (!is_hermitian(hamiltonian, kTolerances.structural)) throw InvalidArgument("ground_state: H is not Hermitian");
  return lowest_state(Eigen::MatrixXcd(0.5 * (hamiltonian + hamiltonian.adjoint())), nullptr, gap_tol);
}

GroundState ground_state_in_sector(const Operator& hamiltonian, const Operator& symmetry, double sector,
                                   double gap_tol) {
  if (!is_hermitian(hamiltonian, kTolerances.structural)) throw InvalidArgument("ground_state: H is not Hermitian");
  if (symmetry.rows() != hamiltonian.rows() || !is_hermitian(symmetry, kTolerances.structural))
    throw InvalidArgument("ground_state_in_sector: symmetry must be Hermitian with the dimension of H");
  if ((hamiltonian * symmetry - symmetry * hamiltonian).cwiseAbs().maxCoeff() > 1e-9)
    throw InvalidArgument("ground_state_in_sector: symmetry does not commute with H");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sym{Eigen::MatrixXcd(symmetry)};
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < sym.eigenvalues().size(); ++k)
    if (std::abs(sym.eigenvalues()(k) - sector) < 1e-8) cols.push_back(k);
  if (cols.empty()) throw InvalidArgument("ground_state_in_sector: empty symmetry sector");
  Eigen::MatrixXcd q(hamiltonian.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = sym.eigenvectors().col(cols[c]);
  const Eigen::MatrixXcd hq = q.adjoint() * hamiltonian * q;
  return lowest_state(0.5 * (hq + hq.adjoint()), &q, gap_tol);
}

// ---------------------------------------------------------------------------

Operator random_hermitian(std::size_t d, double scale, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(d);
  Operator g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  return scale / std::sqrt(static_cast<double>(d)) * (g + g.adjoint()) / 2.0;
}

Operator embed_qubit_operator(const Operator& op, int site, int n_qubits) {
  if (op.rows() != 2 || op.cols() != 2) throw DimensionError("embed_qubit_operator: need a 2x2 operator");
  if (site < 0 || site >= n_qubits) throw InvalidArgument("embed_qubit_operator: site out of range");
  std::vector<Operator> factors(static_cast<std::size_t>(n_qubits), identity(2));
  factors[static_cast<std::size_t>(site)] = op;
  return kron_all(factors);
}

LindbladModel random_qubit_model(int n_qubits, double coupling_j, double gamma, JumpKind kind, std::uint64_t seed) {
  if (n_qubits < 1) throw InvalidArgument("random_qubit_model: need at least one qubit");
  const std::size_t d = std::size_t{1} << n_qubits;
  Operator h = random_hermitian(d, coupling_j, derive_seed(seed, 0));
  std::vector<Operator> jumps;
  for (int q = 0; q < n_qubits; ++q) {
    Operator local;
    switch (kind) {
      case JumpKind::kPauliZ:
        local = single_qubit_paulis()[3];
        break;
      case JumpKind::kRandomHermitian:
        local = random_hermitian(2, 1.0, derive_seed(seed, 1 + static_cast<std::uint64_t>(q)));
        break;
      case JumpKind::kRandomGeneral: {
        Rng rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(q)));
        local = Operator(2, 2);
        for (Eigen::Index i = 0; i < 2; ++i)
          for (Eigen::Index j = 0; j < 2; ++j) {
            const double re = rng.normal();
            const double im = rng.normal();
            local(i, j) = Complex(re, im) / std::sqrt(2.0);
          }
        break;
      }
    }
    jumps.push_back(embed_qubit_operator(local, q, n_qubits));
  }
  return LindbladModel(std::move(h), std::move(jumps), gamma);
}

// ---------------------------------------------------------------------------

LindbladModel SykModelSpec::build() const {
  return dissipative_syk(SykEnsemble::draw(n_majorana, coupling_j, seed, convention), gamma, sites);
}

void to_json(nlohmann::json& j, const SykModelSpec& s) {
  j = nlohmann::json{{"N", s.n_majorana},           {"J", s.coupling_j},
                     {"seed", s.seed},              {"gamma", s.gamma},
                     {"sites", to_string(s.sites)}, {"variance_convention", to_string(s.convention)}};
}

void from_json(const nlohmann::json& j, SykModelSpec& s) {
  static const std::vector<std::string> known = {"N", "J", "seed", "gamma", "sites", "variance_convention"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InvalidArgument("SykModelSpec: unknown key '" + key + "'");
  s.n_majorana = j.at("N").get<int>();
  s.coupling_j = j.at("J").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.gamma = j.at("gamma").get<double>();
  s.sites = site_selection_from_string(j.at("sites").get<std::string>());
  s.convention = variance_convention_from_string(j.value("variance_convention", std::string("paper")));
}

}  // namespace openecho
