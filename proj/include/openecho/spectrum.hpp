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

#include <optional>
#include <vector>

#include <json.hpp>

#include "openecho/doubled_space.hpp"

namespace openecho {

/// All eigenvalues of H^D, sorted by decreasing imaginary part (steady state first).
std::vector<Complex> lindblad_spectrum(const DoubledHamiltonian& hd);

struct SpectrumSegment {
  double center_imag = 0.0;
  double width_imag = 0.0;
  int count = 0;
};

struct Segmentation {
  std::vector<SpectrumSegment> segments;  // ordered from Im = 0 downwards
  double gap_ratio = 0.0;  // min inter-segment gap / max segment width
  bool segmented = false;  // more than one segment
};

/// Splits the imaginary parts wherever consecutive sorted values are more
/// than gamma/2 apart. With a single segment, gap_ratio is the largest
/// internal gap over the total width (<= 1).
Segmentation segment_spectrum(const std::vector<Complex>& eigenvalues, double gamma);

/// Number of eigenvalues of h_d below tol * gamma. When `parity` is given
/// the count is restricted to operators X with P X P = X (the even sector of
/// the symmetry P). Throws InvalidArgument for a non-Hermitian h_d.
int hd_ground_degeneracy(const DoubledHamiltonian& hd, double tol = kTolerances.degeneracy,
                         const Operator* parity = nullptr);

/// max over lambda of the distance from -conj(lambda) to the nearest eigenvalue.
double conjugation_symmetry_defect(const std::vector<Complex>& eigenvalues);

int count_zero_modes(const std::vector<Complex>& eigenvalues, double tol = kTolerances.zero_mode);

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  Segmentation segmentation;
  int hd_zero_degeneracy = 0;       // sector count when a parity was supplied, else full space
  int hd_zero_degeneracy_full = 0;  // full doubled space
  int zero_modes = 0;
  double symmetry_defect = 0.0;
  double max_imag = 0.0;
};

SpectrumReport spectrum_report(const LindbladModel& model, const Operator* parity = nullptr,
                               const Tolerances& tol = kTolerances);

void to_json(nlohmann::json& j, const SpectrumReport& r);

}  // namespace openecho
