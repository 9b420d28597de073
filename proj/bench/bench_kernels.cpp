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

// Serial reference versus OpenMP kernels on the three data-parallel hot spots:
// time-grid propagation, twirl sums and disorder realizations.

#include <benchmark/benchmark.h>

#include "openecho/doubled_space.hpp"
#include "openecho/echo.hpp"
#include "openecho/experiment.hpp"
#include "openecho/scrambling.hpp"

namespace {

using namespace openecho;

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::kParallel : Exec::kSerial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "openmp" : "serial"); }

void BM_GridPropagation(benchmark::State& state) {
  const auto model = dissipative_syk(SykEnsemble::draw(8, 1.0, 1), 10.0, SiteSelection::kHalf);
  const DoubledHamiltonian hd(model);
  const auto times = log_grid(1e-3, 1e4, 600);
  const VectorizedState psi0 = vec(ground_state(model.hamiltonian()).rho);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(hd, psi0, times, exec_of(state)));
  label(state);
}
BENCHMARK(BM_GridPropagation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TrajectoryInvariants(benchmark::State& state) {
  const auto model = dissipative_syk(SykEnsemble::draw(8, 1.0, 1), 10.0, SiteSelection::kHalf);
  const auto states = propagate(DoubledHamiltonian(model), vec(ground_state(model.hamiltonian()).rho),
                                log_grid(1e-3, 1e4, 600));
  for (auto _ : state) benchmark::DoNotOptimize(check_state_invariants(states, 1.0, exec_of(state)));
  label(state);
}
BENCHMARK(BM_TrajectoryInvariants)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TwirlDoubleAverage(benchmark::State& state) {
  const auto model = random_qubit_model(4, 1.0, 0.3, JumpKind::kRandomHermitian, 1);
  const OpenOtoc otoc(model, BipartiteSplit(4, 4));
  for (auto _ : state) benchmark::DoNotOptimize(otoc.average_ab(0.5, exec_of(state)));
  label(state);
}
BENCHMARK(BM_TwirlDoubleAverage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_TwirlMonteCarlo(benchmark::State& state) {
  const auto model = random_qubit_model(3, 1.0, 0.3, JumpKind::kRandomHermitian, 2);
  const OpenOtoc otoc(model, BipartiteSplit(2, 4));
  const Operator r = kron(identity(2), haar_unitary(4, 3));
  for (auto _ : state)
    benchmark::DoNotOptimize(otoc.average_w(r, 0.5, TwirlMethod::kMonteCarlo, 2000, 1, exec_of(state)));
  label(state);
}
BENCHMARK(BM_TwirlMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DisorderRealizations(benchmark::State& state) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::kFig2Weak);
  c.n_realizations = 8;
  c.time_grid.n_points = 100;
  const int saved = kernels::max_threads();
  if (!state.range(0)) kernels::set_threads(1);
  for (auto _ : state) benchmark::DoNotOptimize(disorder_average_le(c));
  kernels::set_threads(saved);
  label(state);
}
BENCHMARK(BM_DisorderRealizations)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NoiseEnsemble(benchmark::State& state) {
  const auto bath = chain_bath_model(1.0, 0.1);
  NoiseEnsemble noise;
  noise.n_samples = 64;
  for (auto _ : state) benchmark::DoNotOptimize(noise_averaged_le(bath, noise, 2.0, exec_of(state)));
  label(state);
}
BENCHMARK(BM_NoiseEnsemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
