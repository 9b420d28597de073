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

#include "openecho/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace openecho {

std::vector<Complex> lindblad_spectrum(const DoubledHamiltonian& hd) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(hd.hD()), false);
  if (solver.info() != Eigen::Success) throw NumericalError("lindblad_spectrum: eigensolver failed");
  std::vector<Complex> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::stable_sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.imag() != b.imag()) return a.imag() > b.imag();
    return a.real() < b.real();
  });
  return out;
}

Segmentation segment_spectrum(const std::vector<Complex>& eigenvalues, double gamma) {
  Segmentation s;
  if (eigenvalues.empty()) return s;
  if (!(gamma > 0.0)) throw InvalidArgument("segment_spectrum: gamma must be positive");
  std::vector<double> im;
  im.reserve(eigenvalues.size());
  for (const auto& z : eigenvalues) im.push_back(z.imag());
  std::sort(im.begin(), im.end(), std::greater<>());

  const double threshold = 0.5 * gamma;
  std::size_t start = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  double max_internal_gap = 0.0;
  auto close = [&](std::size_t end) {
    SpectrumSegment seg;
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) sum += im[k];
    seg.count = static_cast<int>(end - start);
    seg.center_imag = sum / static_cast<double>(seg.count);
    seg.width_imag = im[start] - im[end - 1];
    s.segments.push_back(seg);
  };
  for (std::size_t k = 1; k < im.size(); ++k) {
    const double gap = im[k - 1] - im[k];
    if (gap > threshold) {
      close(k);
      start = k;
      min_gap = std::min(min_gap, gap);
    } else {
      max_internal_gap = std::max(max_internal_gap, gap);
    }
  }
  close(im.size());

  s.segmented = s.segments.size() > 1;
  double max_width = 0.0;
  for (const auto& seg : s.segments) max_width = std::max(max_width, seg.width_imag);
  if (s.segmented) {
    s.gap_ratio = max_width > 0.0 ? min_gap / max_width : std::numeric_limits<double>::infinity();
  } else {
    s.gap_ratio = max_width > 0.0 ? max_internal_gap / max_width : 0.0;
  }
  return s;
}

int hd_ground_degeneracy(const DoubledHamiltonian& hd, double tol, const Operator* parity) {
  if (!is_hermitian(hd.hd(), kTolerances.structural * std::max(1.0, hd.gamma())))
    throw InvalidArgument("hd_ground_degeneracy: h_d is not Hermitian (non-Hermitian jumps)");
  Eigen::MatrixXcd h = 0.5 * (hd.hd() + hd.hd().adjoint());
  if (parity != nullptr) {
    if (static_cast<std::size_t>(parity->rows()) != hd.dim() || !is_square(*parity))
      throw DimensionError("hd_ground_degeneracy: parity dimension differs from the model");
    // X -> P X P acts on vec(X) as P (x) P^T; keep its +1 eigenspace.
    const Operator sym = kron(*parity, parity->transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ps{Eigen::MatrixXcd(0.5 * (sym + sym.adjoint()))};
    std::vector<Eigen::Index> cols;
    for (Eigen::Index k = 0; k < ps.eigenvalues().size(); ++k)
      if (std::abs(ps.eigenvalues()(k) - 1.0) < 1e-6) cols.push_back(k);
    Eigen::MatrixXcd q(h.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = ps.eigenvectors().col(cols[c]);
    h = q.adjoint() * h * q;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hd_ground_degeneracy: eigensolver failed");
  const double cut = tol * std::max(hd.gamma(), std::numeric_limits<double>::min());
  int n = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) < cut) ++n;
  return n;
}

double conjugation_symmetry_defect(const std::vector<Complex>& eigenvalues) {
  double worst = 0.0;
  for (const auto& z : eigenvalues) {
    const Complex mirror = -std::conj(z);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : eigenvalues) best = std::min(best, std::abs(w - mirror));
    worst = std::max(worst, best);
  }
  return worst;
}

int count_zero_modes(const std::vector<Complex>& eigenvalues, double tol) {
  return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                        [tol](Complex z) { return std::abs(z) < tol; }));
}

SpectrumReport spectrum_report(const LindbladModel& model, const Operator* parity, const Tolerances& tol) {
  const DoubledHamiltonian hd(model, tol);
  SpectrumReport r;
  r.eigenvalues = lindblad_spectrum(hd);
  r.segmentation = segment_spectrum(r.eigenvalues, std::max(model.gamma(), std::numeric_limits<double>::min()));
  if (hd.hermitian_jumps() && model.gamma() > 0.0) {
    r.hd_zero_degeneracy_full = hd_ground_degeneracy(hd, tol.degeneracy);
    r.hd_zero_degeneracy = parity ? hd_ground_degeneracy(hd, tol.degeneracy, parity) : r.hd_zero_degeneracy_full;
  }
  r.zero_modes = count_zero_modes(r.eigenvalues, tol.zero_mode);
  r.symmetry_defect = conjugation_symmetry_defect(r.eigenvalues);
  r.max_imag = r.eigenvalues.empty() ? 0.0 : r.eigenvalues.front().imag();
  return r;
}

void to_json(nlohmann::json& j, const SpectrumReport& r) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : r.segmentation.segments)
    segs.push_back({{"center_imag", s.center_imag}, {"width_imag", s.width_imag}, {"count", s.count}});
  j = nlohmann::json{{"n_eigenvalues", r.eigenvalues.size()},
                     {"segments", segs},
                     {"gap_ratio", std::isfinite(r.segmentation.gap_ratio) ? nlohmann::json(r.segmentation.gap_ratio)
                                                                           : nlohmann::json("inf")},
                     {"segmented", r.segmentation.segmented},
                     {"hd_zero_degeneracy", r.hd_zero_degeneracy},
                     {"hd_zero_degeneracy_full", r.hd_zero_degeneracy_full},
                     {"zero_modes", r.zero_modes},
                     {"symmetry_defect", r.symmetry_defect},
                     {"max_imag", r.max_imag}};
}

}  // namespace openecho
