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

#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "openecho/doubled_space.hpp"
#include "openecho/echo.hpp"
#include "openecho/experiment.hpp"
#include "openecho/kernels.hpp"
#include "openecho/scrambling.hpp"

namespace openecho {
namespace {

class Kernels : public ::testing::Test {
 protected:
  // More threads than cores is fine for OpenMP and exercises the ordering logic.
  void SetUp() override {
    saved_ = kernels::max_threads();
    kernels::set_threads(4);
  }
  void TearDown() override { kernels::set_threads(saved_); }

 private:
  int saved_ = 1;
};

TEST_F(Kernels, MapPreservesIndexOrder) {
  auto f = [](std::size_t i) { return static_cast<double>(i * i); };
  const auto serial = kernels::map(Exec::kSerial, 1000, f);
  const auto parallel = kernels::map(Exec::kParallel, 1000, f);
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(parallel[31], 961.0);
}

TEST_F(Kernels, SumIsBitwiseDeterministic) {
  // Terms of wildly different magnitudes make floating-point reassociation visible.
  auto f = [](std::size_t i) { return std::pow(-1.0, static_cast<double>(i)) * std::exp(0.05 * static_cast<double>(i % 700)); };
  const double serial = kernels::sum(Exec::kSerial, 5000, 0.0, f);
  for (int rep = 0; rep < 5; ++rep) EXPECT_EQ(kernels::sum(Exec::kParallel, 5000, 0.0, f), serial);
}

TEST_F(Kernels, ExceptionsPropagate) {
  auto f = [](std::size_t i) -> int {
    if (i == 17) throw std::runtime_error("boom");
    return static_cast<int>(i);
  };
  EXPECT_THROW(kernels::map(Exec::kParallel, 64, f), std::runtime_error);
  EXPECT_THROW(kernels::map(Exec::kSerial, 64, f), std::runtime_error);
}

TEST_F(Kernels, EmptyRange) {
  EXPECT_TRUE(kernels::map(Exec::kParallel, 0, [](std::size_t i) { return i; }).empty());
  EXPECT_EQ(kernels::sum(Exec::kParallel, 0, 2.5, [](std::size_t) { return 1.0; }), 2.5);
}

TEST_F(Kernels, GridPropagationSerialEqualsParallel) {
  const auto model = random_qubit_model(3, 1.0, 0.4, JumpKind::kRandomGeneral, 2);
  const DoubledHamiltonian hd(model);
  const auto times = log_grid(0.01, 100.0, 64);
  const VectorizedState psi0 = vec_identity(8);
  const auto a = propagate(hd, psi0, times, Exec::kSerial);
  const auto b = propagate(hd, psi0, times, Exec::kParallel);
  for (std::size_t k = 0; k < times.size(); ++k) EXPECT_EQ(a[k].entries(), b[k].entries());
}

TEST_F(Kernels, TwirlSerialEqualsParallel) {
  const auto model = random_qubit_model(3, 1.0, 0.3, JumpKind::kRandomHermitian, 3);
  const OpenOtoc otoc(model, BipartiteSplit(2, 4));
  EXPECT_EQ(otoc.average_ab(0.7, Exec::kSerial), otoc.average_ab(0.7, Exec::kParallel));
}

TEST_F(Kernels, DisorderAverageIndependentOfThreadCount) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::kFig2Weak);
  c.n_realizations = 3;
  c.time_grid = {0.1, 100.0, 20, GridSpacing::kLog};
  const auto four = disorder_average_le(c);
  kernels::set_threads(1);
  const auto one = disorder_average_le(c);
  EXPECT_EQ(four.mean, one.mean);
  EXPECT_EQ(four.stderr_, one.stderr_);
}

TEST_F(Kernels, EchoRunSerialEqualsParallel) {
  const auto e = SykEnsemble::draw(6, 1.0, 4);
  const auto first = dissipative_syk(e, 0.02, SiteSelection::kAll);
  const auto second = dissipative_syk(e, 0.1, SiteSelection::kAll);
  const Operator rho0 = ground_state_in_sector(first.hamiltonian(), fermion_parity(6)).rho;
  const auto times = log_grid(0.1, 100.0, 30);
  const auto a = le_time_series(first, second, rho0, times, Exec::kSerial);
  const auto b = le_time_series(first, second, rho0, times, Exec::kParallel);
  EXPECT_EQ(a.le.values(), b.le.values());
  EXPECT_EQ(a.renyi2_second.values(), b.renyi2_second.values());
}

}  // namespace
}  // namespace openecho
