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
#include <vector>

#include <gtest/gtest.h>

#include "openecho/spectrum.hpp"
#include "test_util.hpp"

namespace openecho {
namespace {

using testing::pauli;

TEST(Spectrum, SortedByDecayRate) {
  const auto model = random_qubit_model(2, 1.0, 0.4, JumpKind::kRandomGeneral, 3);
  const auto eig = lindblad_spectrum(DoubledHamiltonian(model));
  ASSERT_EQ(eig.size(), 16u);
  for (std::size_t k = 1; k < eig.size(); ++k) EXPECT_GE(eig[k - 1].imag(), eig[k].imag());
  EXPECT_LT(std::abs(eig[0]), 1e-10);
  for (const auto& l : eig) EXPECT_LE(l.imag(), 1e-10);
}

TEST(Spectrum, TraceEqualsSumOfEigenvalues) {
  const auto model = random_qubit_model(2, 1.0, 0.4, JumpKind::kRandomHermitian, 9);
  const DoubledHamiltonian hd(model);
  Complex sum = 0.0;
  for (const auto& l : lindblad_spectrum(hd)) sum += l;
  EXPECT_LT(std::abs(sum - hd.hD().trace()), 1e-10);
}

TEST(Segmentation, SyntheticBands) {
  const double gamma = 10.0;
  const std::vector<Complex> eig = {Complex(0.0, 0.0), Complex(1.0, -20.0), Complex(-1.0, -20.5),
                                    Complex(0.5, -40.0), Complex(0.0, -39.0)};
  const auto s = segment_spectrum(eig, gamma);
  ASSERT_EQ(s.segments.size(), 3u);
  EXPECT_TRUE(s.segmented);
  EXPECT_EQ(s.segments[0].count, 1);
  EXPECT_EQ(s.segments[1].count, 2);
  EXPECT_NEAR(s.segments[1].center_imag, -20.25, 1e-14);
  EXPECT_NEAR(s.segments[1].width_imag, 0.5, 1e-14);
  EXPECT_NEAR(s.segments[2].width_imag, 1.0, 1e-14);
  // Smallest inter-band gap 18.5 (between -20.5 and -39), widest band 1.
  EXPECT_NEAR(s.gap_ratio, 18.5, 1e-12);
}

TEST(Segmentation, SingleBand) {
  const std::vector<Complex> eig = {Complex(0.0, -1.0), Complex(0.0, -1.5), Complex(0.0, -3.0)};
  const auto s = segment_spectrum(eig, 10.0);
  EXPECT_FALSE(s.segmented);
  ASSERT_EQ(s.segments.size(), 1u);
  EXPECT_NEAR(s.gap_ratio, 1.5 / 2.0, 1e-14);
}

TEST(Symmetry, ConjugationDefect) {
  EXPECT_NEAR(conjugation_symmetry_defect({Complex(1.0, -1.0), Complex(-1.0, -1.0)}), 0.0, 1e-15);
  EXPECT_NEAR(conjugation_symmetry_defect({Complex(1.0, -1.0), Complex(0.0, -2.0)}), std::sqrt(2.0), 1e-15);
}

TEST(Symmetry, LindbladSpectrumIsSymmetricForHermitianAndGeneralJumps) {
  for (auto kind : {JumpKind::kRandomHermitian, JumpKind::kRandomGeneral}) {
    const auto model = random_qubit_model(2, 1.0, 0.6, kind, 4);
    EXPECT_LT(conjugation_symmetry_defect(lindblad_spectrum(DoubledHamiltonian(model))), 1e-8);
  }
}

TEST(ZeroModes, Counting) {
  EXPECT_EQ(count_zero_modes({Complex(0.0, 0.0), Complex(1e-12, 0.0), Complex(0.0, -1.0)}), 2);
  EXPECT_EQ(count_zero_modes(lindblad_spectrum(DoubledHamiltonian(LindbladModel(Operator::Zero(2, 2), {pauli(3)}, 1.0)))), 2);
}

TEST(HdDegeneracy, AllAndHalfSiteSyk) {
  const auto e = SykEnsemble::draw(6, 1.0, 1);
  const Operator p = fermion_parity(6);
  const DoubledHamiltonian all(dissipative_syk(e, 100.0, SiteSelection::kAll));
  const DoubledHamiltonian half(dissipative_syk(e, 100.0, SiteSelection::kHalf));
  EXPECT_EQ(hd_ground_degeneracy(all, kTolerances.degeneracy, &p), 1);
  EXPECT_EQ(hd_ground_degeneracy(all), 1);  // parity anticommutes with every jump
  EXPECT_EQ(hd_ground_degeneracy(half, kTolerances.degeneracy, &p), 4);
  EXPECT_EQ(hd_ground_degeneracy(half), 8);
}

TEST(HdDegeneracy, KernelIsEvenPairingsOfUndissipatedMajoranas) {
  // The operators I, chi_3 chi_4, chi_3 chi_5, chi_4 chi_5 commute with chi_0, chi_1, chi_2.
  const auto chi = majorana_ops(6);
  const DoubledHamiltonian half(dissipative_syk(SykEnsemble::draw(6, 1.0, 2), 1.0, SiteSelection::kHalf));
  for (const Operator& x : {identity(8), Operator(chi[3] * chi[4]), Operator(chi[3] * chi[5]), Operator(chi[4] * chi[5])}) {
    const CVector r = half.hd() * vec(x).entries();
    EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(HdDegeneracy, RejectsNonHermitianDissipator) {
  const DoubledHamiltonian hd(random_qubit_model(1, 1.0, 0.5, JumpKind::kRandomGeneral, 1));
  EXPECT_THROW(hd_ground_degeneracy(hd), InvalidArgument);
}

TEST(Report, StrongAllSiteSyk) {
  const auto model = dissipative_syk(SykEnsemble::draw(6, 1.0, 1), 100.0, SiteSelection::kAll);
  const Operator p = fermion_parity(6);
  const SpectrumReport r = spectrum_report(model, &p);
  EXPECT_EQ(r.eigenvalues.size(), 64u);
  EXPECT_TRUE(r.segmentation.segmented);
  EXPECT_GE(r.segmentation.gap_ratio, 10.0);
  EXPECT_EQ(r.zero_modes, 1);
  EXPECT_EQ(r.hd_zero_degeneracy, 1);
  EXPECT_LT(r.symmetry_defect, 1e-8);
  EXPECT_LE(r.max_imag, 1e-8);
  // Bands sit near -2 gamma k: each Majorana string of weight k decays at 2 gamma k.
  for (std::size_t s = 0; s < r.segmentation.segments.size(); ++s)
    EXPECT_NEAR(r.segmentation.segments[s].center_imag, -200.0 * static_cast<double>(s), 1.0);
  const nlohmann::json j = r;
  EXPECT_EQ(j["zero_modes"], 1);
}

}  // namespace
}  // namespace openecho
