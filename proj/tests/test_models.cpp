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

#include <gtest/gtest.h>

#include "openecho/models.hpp"
#include "openecho/operator_core.hpp"
#include "test_util.hpp"

namespace openecho {
namespace {

using testing::max_abs_diff;
using testing::pauli;

TEST(Majorana, CliffordAlgebra) {
  for (int n : {2, 4, 6, 8}) {
    const auto chi = majorana_ops(n);
    ASSERT_EQ(static_cast<int>(chi.size()), n);
    const std::size_t d = std::size_t{1} << (n / 2);
    for (int i = 0; i < n; ++i) {
      EXPECT_TRUE(is_hermitian(chi[i]));
      for (int j = 0; j < n; ++j) {
        const Operator anti = chi[i] * chi[j] + chi[j] * chi[i];
        EXPECT_LT(max_abs_diff(anti, (i == j ? 1.0 : 0.0) * identity(d)), 1e-14) << n << ' ' << i << ' ' << j;
      }
    }
  }
}

TEST(Majorana, TwoMajoranasAreScaledPaulis) {
  const auto chi = majorana_ops(2);
  EXPECT_LT(max_abs_diff(chi[0], pauli(1) / std::sqrt(2.0)), 1e-15);
  EXPECT_LT(max_abs_diff(chi[1], pauli(2) / std::sqrt(2.0)), 1e-15);
}

TEST(Majorana, RejectsOddOrTooLarge) {
  EXPECT_THROW(majorana_ops(5), InvalidArgument);
  EXPECT_THROW(majorana_ops(0), InvalidArgument);
  EXPECT_THROW(majorana_ops(14), InvalidArgument);
}

TEST(Majorana, ParityAnticommutesWithEveryMajorana) {
  const auto chi = majorana_ops(6);
  const Operator p = fermion_parity(6);
  for (const auto& c : chi) EXPECT_LT(max_abs_diff(p * c, -c * p), 1e-14);
}

TEST(Syk, CouplingCountAndOrder) {
  const auto e = SykEnsemble::draw(8, 1.0, 3);
  ASSERT_EQ(e.couplings.size(), 70u);
  for (std::size_t k = 0; k < e.couplings.size(); ++k) {
    const auto& s = e.couplings[k].sites;
    EXPECT_TRUE(s[0] < s[1] && s[1] < s[2] && s[2] < s[3]);
    if (k > 0) EXPECT_LT(e.couplings[k - 1].sites, s);
  }
}

TEST(Syk, CouplingVarianceConventions) {
  EXPECT_DOUBLE_EQ(coupling_variance(6, 1.0, VarianceConvention::kPaper), 36.0 / 216.0);
  EXPECT_DOUBLE_EQ(coupling_variance(6, 2.0, VarianceConvention::kStandard), 6.0 * 4.0 / 216.0);
}

TEST(Syk, EmpiricalCouplingStatistics) {
  const int n = 6;
  double sum = 0.0, sum2 = 0.0;
  std::size_t count = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (const auto& c : SykEnsemble::draw(n, 1.0, seed).couplings) {
      sum += c.value;
      sum2 += c.value * c.value;
      ++count;
    }
  }
  ASSERT_GE(count, 10000u);
  const double mean = sum / static_cast<double>(count);
  const double var = sum2 / static_cast<double>(count) - mean * mean;
  const double expected = 36.0 / 216.0;
  EXPECT_LT(std::abs(mean), 4.0 * std::sqrt(expected / static_cast<double>(count)));
  EXPECT_NEAR(var / expected, 1.0, 0.05);
}

TEST(Syk, HamiltonianMatchesDirectSum) {
  const auto e = SykEnsemble::draw(6, 1.0, 11);
  const auto chi = majorana_ops(6);
  Operator h = Operator::Zero(8, 8);
  for (const auto& c : e.couplings)
    h += c.value * chi[c.sites[0]] * chi[c.sites[1]] * chi[c.sites[2]] * chi[c.sites[3]];
  EXPECT_LT(max_abs_diff(syk_hamiltonian(e), h), 1e-14);
}

TEST(Syk, HermitianTracelessParityConserving) {
  const Operator p = fermion_parity(6);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Operator h = syk_hamiltonian(SykEnsemble::draw(6, 1.0, seed));
    EXPECT_TRUE(is_hermitian(h));
    EXPECT_LT(std::abs(h.trace()), 1e-10);
    EXPECT_LT(max_abs_diff(h * p, p * h), 1e-13);
  }
}

TEST(Syk, SeedReproducibility) {
  const auto a = SykEnsemble::draw(6, 1.0, 5);
  const auto b = SykEnsemble::draw(6, 1.0, 5);
  const auto c = SykEnsemble::draw(6, 1.0, 6);
  for (std::size_t k = 0; k < a.couplings.size(); ++k) EXPECT_EQ(a.couplings[k].value, b.couplings[k].value);
  EXPECT_NE(a.couplings[0].value, c.couplings[0].value);
}

TEST(DissipativeSyk, JumpSets) {
  const auto e = SykEnsemble::draw(6, 1.0, 1);
  const auto chi = majorana_ops(6);
  const auto all = dissipative_syk(e, 0.5, SiteSelection::kAll);
  const auto half = dissipative_syk(e, 0.5, SiteSelection::kHalf);
  ASSERT_EQ(all.jumps().size(), 6u);
  ASSERT_EQ(half.jumps().size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(max_abs_diff(half.jumps()[k], chi[k]), 0.0);
  EXPECT_DOUBLE_EQ(all.gamma(), 0.5);
  EXPECT_TRUE(all.hermitian_jumps());
}

TEST(GroundState, TwoLevelSystem) {
  const GroundState g = ground_state(pauli(3));
  EXPECT_DOUBLE_EQ(g.energy, -1.0);
  EXPECT_DOUBLE_EQ(g.gap, 2.0);
  EXPECT_FALSE(g.degenerate);
  EXPECT_NEAR(std::abs(g.vector(1)), 1.0, 1e-15);
  EXPECT_NEAR(g.rho.trace().real(), 1.0, 1e-15);
}

TEST(GroundState, EigenEquationAndPhase) {
  const Operator h = syk_hamiltonian(SykEnsemble::draw(8, 1.0, 2));
  const GroundState g = ground_state(h);
  EXPECT_LT((h * g.vector - g.energy * g.vector).norm(), 1e-12);
  EXPECT_NEAR(g.vector.norm(), 1.0, 1e-13);
  EXPECT_NEAR(g.energy, hermitian_eigenvalues(h)(0), 1e-12);
  for (Eigen::Index i = 0; i < g.vector.size(); ++i) {
    if (std::abs(g.vector(i)) > 1e-12) {
      EXPECT_GT(g.vector(i).real(), 0.0);
      EXPECT_NEAR(g.vector(i).imag(), 0.0, 1e-14);
      break;
    }
  }
}

TEST(GroundState, SixMajoranaLevelsAreParityDoublets) {
  const Operator h = syk_hamiltonian(SykEnsemble::draw(6, 1.0, 1));
  EXPECT_TRUE(ground_state(h).degenerate);
  const Operator p = fermion_parity(6);
  const GroundState even = ground_state_in_sector(h, p, 1.0);
  const GroundState odd = ground_state_in_sector(h, p, -1.0);
  EXPECT_FALSE(even.degenerate);
  EXPECT_NEAR(even.energy, odd.energy, 1e-10);
  EXPECT_LT((p * even.vector - even.vector).norm(), 1e-12);
  EXPECT_LT((p * odd.vector + odd.vector).norm(), 1e-12);
  EXPECT_LT((h * even.vector - even.energy * even.vector).norm(), 1e-12);
}

TEST(GroundState, SectorRequiresCommutingSymmetry) {
  EXPECT_THROW(ground_state_in_sector(pauli(3), pauli(1)), InvalidArgument);
  EXPECT_THROW(ground_state(testing::random_matrix(3, 1)), InvalidArgument);
}

TEST(LindbladModel, Validation) {
  EXPECT_THROW(LindbladModel(testing::random_matrix(2, 1), {}, 1.0), InvalidArgument);
  EXPECT_THROW(LindbladModel(pauli(3), {identity(3)}, 1.0), DimensionError);
  EXPECT_THROW(LindbladModel(pauli(3), {pauli(1)}, -1.0), InvalidArgument);
  const LindbladModel m(pauli(3), {pauli(1)}, 1.0);
  EXPECT_DOUBLE_EQ(m.with_gamma(3.0).gamma(), 3.0);
  EXPECT_EQ(max_abs_diff(m.with_gamma(3.0).hamiltonian(), pauli(3)), 0.0);
}

TEST(QubitModels, EmbedMatchesKron) {
  const Operator x1 = embed_qubit_operator(pauli(1), 1, 3);
  EXPECT_EQ(max_abs_diff(x1, kron_all({identity(2), pauli(1), identity(2)})), 0.0);
  EXPECT_THROW(embed_qubit_operator(pauli(1), 3, 3), InvalidArgument);
}

TEST(QubitModels, RandomModelKinds) {
  const auto z = random_qubit_model(2, 1.0, 0.3, JumpKind::kPauliZ, 1);
  ASSERT_EQ(z.jumps().size(), 2u);
  EXPECT_EQ(max_abs_diff(z.jumps()[0], kron(pauli(3), identity(2))), 0.0);
  EXPECT_TRUE(random_qubit_model(2, 1.0, 0.3, JumpKind::kRandomHermitian, 1).hermitian_jumps());
  EXPECT_FALSE(random_qubit_model(2, 1.0, 0.3, JumpKind::kRandomGeneral, 1).hermitian_jumps());
}

TEST(QubitModels, RandomHermitianScale) {
  const std::size_t d = 64;
  const Operator h = random_hermitian(d, 2.0, 9);
  EXPECT_TRUE(is_hermitian(h));
  const double mean_sq = h.cwiseAbs2().sum() / static_cast<double>(d * d);
  EXPECT_NEAR(mean_sq, 4.0 / static_cast<double>(d), 0.2 * 4.0 / static_cast<double>(d));
}

TEST(Serialization, SpecRoundTrip) {
  SykModelSpec s;
  s.n_majorana = 8;
  s.seed = 17;
  s.gamma = 0.25;
  s.sites = SiteSelection::kHalf;
  s.convention = VarianceConvention::kStandard;
  nlohmann::json j = s;
  const auto back = j.get<SykModelSpec>();
  EXPECT_EQ(back.n_majorana, 8);
  EXPECT_EQ(back.seed, 17u);
  EXPECT_EQ(back.sites, SiteSelection::kHalf);
  EXPECT_EQ(back.convention, VarianceConvention::kStandard);
  EXPECT_EQ(max_abs_diff(back.build().hamiltonian(), s.build().hamiltonian()), 0.0);
  j["bogus"] = 1;
  EXPECT_THROW(j.get<SykModelSpec>(), InvalidArgument);
}

TEST(Serialization, EnumStrings) {
  EXPECT_EQ(site_selection_from_string(to_string(SiteSelection::kAll)), SiteSelection::kAll);
  EXPECT_EQ(variance_convention_from_string("standard"), VarianceConvention::kStandard);
  EXPECT_THROW(site_selection_from_string("some"), InvalidArgument);
}

}  // namespace
}  // namespace openecho
