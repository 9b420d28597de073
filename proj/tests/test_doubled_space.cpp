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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "openecho/doubled_space.hpp"
#include "openecho/echo.hpp"
#include "openecho/spectrum.hpp"
#include "test_util.hpp"

namespace openecho {
namespace {

using testing::max_abs_diff;
using testing::pauli;

LindbladModel dephasing(double gamma) { return LindbladModel(Operator::Zero(2, 2), {pauli(3)}, gamma); }

TEST(DoubledHamiltonian, DephasingSpectrum) {
  const double gamma = 0.3;
  auto eig = lindblad_spectrum(DoubledHamiltonian(dephasing(gamma)));
  ASSERT_EQ(eig.size(), 4u);
  std::vector<Complex> expected = {0.0, 0.0, Complex(0.0, -4.0 * gamma), Complex(0.0, -4.0 * gamma)};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(std::abs(eig[k] - expected[k]), 1e-13) << k;
}

TEST(DoubledHamiltonian, DephasingCoherenceDecay) {
  const double gamma = 0.25;
  const DoubledHamiltonian hd(dephasing(gamma));
  const Operator rho0 = 0.5 * (identity(2) + pauli(1));
  const std::vector<double> times = {0.0, 0.1, 1.0, 3.0};
  const auto states = propagate(hd, vec(rho0), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const Operator expected = 0.5 * (identity(2) + std::exp(-4.0 * gamma * times[k]) * pauli(1));
    EXPECT_LT(max_abs_diff(unvec(states[k]), expected), 1e-13) << times[k];
  }
}

TEST(DoubledHamiltonian, AmplitudeDampingPopulation) {
  // L = sigma^- = |0><1|: rho_11 decays as e^{-2 gamma t}, coherence as e^{-gamma t}.
  Operator lower = Operator::Zero(2, 2);
  lower(0, 1) = 1.0;
  const double gamma = 0.4;
  const DoubledHamiltonian hd(LindbladModel(Operator::Zero(2, 2), {lower}, gamma));
  Operator rho0 = Operator::Constant(2, 2, 0.5);
  const double t = 1.3;
  const Operator rho = unvec(propagate(hd, vec(rho0), std::vector<double>{t})[0]);
  EXPECT_NEAR(rho(1, 1).real(), 0.5 * std::exp(-2.0 * gamma * t), 1e-12);
  EXPECT_NEAR(rho(0, 0).real(), 1.0 - 0.5 * std::exp(-2.0 * gamma * t), 1e-12);
  EXPECT_LT(std::abs(rho(0, 1) - 0.5 * std::exp(-gamma * t)), 1e-12);
}

TEST(DoubledHamiltonian, StructureAndLeftVacuum) {
  for (auto kind : {JumpKind::kPauliZ, JumpKind::kRandomHermitian, JumpKind::kRandomGeneral}) {
    const auto model = random_qubit_model(2, 1.0, 0.7, kind, 5);
    const DoubledHamiltonian hd(model);
    EXPECT_TRUE(is_hermitian(hd.hs()));
    if (kind != JumpKind::kRandomGeneral) EXPECT_TRUE(is_hermitian(hd.hd()));
    const CVector left = hd.hD().adjoint() * vec_identity(4).entries();
    EXPECT_LT(left.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(DoubledHamiltonian, GeneratorMatchesMatrixRhs) {
  const auto model = random_qubit_model(2, 1.0, 0.5, JumpKind::kRandomGeneral, 8);
  const DoubledHamiltonian hd(model);
  const Operator rho = testing::random_density(4, 3);
  const Operator via_doubled = unvec(VectorizedState(CVector(-kI * (hd.hD() * vec(rho).entries()))));
  EXPECT_LT(max_abs_diff(via_doubled, lindblad_rhs(model, rho)), 1e-12);
  EXPECT_LT(max_abs_diff(MasterEquationRhs(model)(rho), lindblad_rhs(model, rho)), 1e-13);
}

TEST(DoubledHamiltonian, ClosedLimitIsUnitaryConjugation) {
  const Operator h = random_hermitian(4, 1.0, 2);
  const DoubledHamiltonian hd(LindbladModel(h, {}, 0.0));
  const Operator rho0 = testing::random_density(4, 4);
  const double t = 0.9;
  const Operator u = propagator_pade(h, t);
  const Operator rho = unvec(propagate(hd, vec(rho0), std::vector<double>{t})[0]);
  EXPECT_LT(max_abs_diff(rho, u * rho0 * u.adjoint()), 1e-12);
}

TEST(SpectralPropagator, GridMatchesSinglePointsAndMatrix) {
  const auto model = random_qubit_model(2, 1.0, 0.3, JumpKind::kRandomGeneral, 1);
  const DoubledHamiltonian hd(model);
  const SpectralPropagator& p = hd.propagator();
  const CVector psi0 = vec(testing::random_density(4, 2)).entries();
  const std::vector<double> times = {0.0, 0.5, 2.0};
  const auto grid = p.apply_on_grid(psi0, times, Exec::kSerial);
  for (std::size_t k = 0; k < times.size(); ++k) {
    EXPECT_LT((grid[k] - p.apply(psi0, times[k])).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((grid[k] - p.matrix(times[k]) * psi0).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((grid[k] - propagator_pade(p.generator(), times[k]) * psi0).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SpectralPropagator, ForcedPadeFallback) {
  const auto model = random_qubit_model(2, 1.0, 0.3, JumpKind::kRandomGeneral, 1);
  const Operator g = DoubledHamiltonian(model).hD();
  const SpectralPropagator eigen_path(g);
  const SpectralPropagator pade_path(g, 0.5);
  EXPECT_FALSE(eigen_path.ill_conditioned());
  EXPECT_TRUE(pade_path.ill_conditioned());
  const CVector psi0 = vec(testing::random_density(4, 5)).entries();
  EXPECT_LT((eigen_path.apply(psi0, 1.7) - pade_path.apply(psi0, 1.7)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SpectralPropagator, LongTimeTracePreservation) {
  const auto model = dissipative_syk(SykEnsemble::draw(6, 1.0, 1), 100.0, SiteSelection::kAll);
  const DoubledHamiltonian hd(model);
  const Operator rho0 = ground_state(model.hamiltonian()).rho;
  const std::vector<double> times = {1e3, 1e4, 1e5};
  const auto inv = check_state_invariants(propagate(hd, vec(rho0), times), 1.0);
  EXPECT_TRUE(inv.ok()) << inv.max_trace_deviation;
}

TEST(SpectralPropagator, RejectsBadInput) {
  const SpectralPropagator p(pauli(3));
  EXPECT_THROW(p.apply(CVector::Zero(3), 1.0), DimensionError);
  const std::vector<double> unsorted = {1.0, 0.5};
  EXPECT_THROW(p.apply_on_grid(CVector::Zero(2), unsorted), InvalidArgument);
}

TEST(Rk4Oracle, AgreesWithSpectralPropagation) {
  for (auto kind : {JumpKind::kPauliZ, JumpKind::kRandomGeneral}) {
    const auto model = random_qubit_model(2, 1.0, 0.5, kind, 3);
    const Operator rho0 = testing::random_density(4, 6);
    const std::vector<double> times = {0.0, 1.0, 2.5, 5.0};
    const auto rk = rk4_oracle(model, rho0, times, suggested_rk4_step(model, 0.01));
    const auto sp = propagate(DoubledHamiltonian(model), vec(rho0), times);
    for (std::size_t k = 0; k < times.size(); ++k) EXPECT_LT(max_abs_diff(rk[k], unvec(sp[k])), 1e-6);
  }
}

TEST(Rk4Oracle, StepValidationRejectsCoarseStep) {
  const auto model = random_qubit_model(2, 1.0, 0.5, JumpKind::kPauliZ, 3);
  const std::vector<double> times = {0.0, 2.0};
  EXPECT_THROW(rk4_oracle(model, testing::random_density(4, 1), times, 0.5), NumericalError);
  EXPECT_NO_THROW(rk4_oracle(model, testing::random_density(4, 1), times, 0.5, StepCheck::kSkip));
}

TEST(Rk4Oracle, IntegratesScalarExponential) {
  const MatrixRhs rhs = [](const Operator& x) { return Operator(-2.0 * x); };
  const std::vector<double> times = {0.5, 1.0};
  const auto out = integrate_rk4(rhs, identity(1), times, 1e-3);
  EXPECT_NEAR(out[1](0, 0).real(), std::exp(-2.0), 1e-12);
  EXPECT_THROW(integrate_rk4(rhs, identity(1), times, 0.0), InvalidArgument);
}

TEST(Invariants, DetectViolations) {
  Operator bad = Operator::Zero(2, 2);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;
  const std::vector<VectorizedState> states = {vec(0.5 * identity(2)), vec(bad)};
  const auto inv = check_state_invariants(states, 1.0);
  EXPECT_NEAR(inv.min_eigenvalue, -0.2, 1e-14);
  EXPECT_FALSE(inv.ok());
  const std::vector<VectorizedState> good = {vec(0.5 * identity(2))};
  EXPECT_TRUE(check_state_invariants(good, 1.0).ok());
}

TEST(Invariants, SerialAndParallelAgree) {
  const auto model = random_qubit_model(3, 1.0, 0.2, JumpKind::kRandomGeneral, 4);
  const DoubledHamiltonian hd(model);
  const auto times = linear_grid(0.0, 3.0, 16);
  const auto a = propagate(hd, vec(testing::random_density(8, 1)), times, Exec::kSerial);
  const auto b = propagate(hd, vec(testing::random_density(8, 1)), times, Exec::kParallel);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].entries(), b[k].entries());
  const auto ia = check_state_invariants(a, 1.0, Exec::kSerial);
  const auto ib = check_state_invariants(a, 1.0, Exec::kParallel);
  EXPECT_EQ(ia.max_trace_deviation, ib.max_trace_deviation);
  EXPECT_EQ(ia.min_eigenvalue, ib.min_eigenvalue);
  EXPECT_TRUE(ia.ok());
}

}  // namespace
}  // namespace openecho
