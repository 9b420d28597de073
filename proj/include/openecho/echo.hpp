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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "openecho/doubled_space.hpp"

namespace openecho {

/// Sampled real-valued curve; times strictly increasing, same length as values.
class TimeSeries {
 public:
  TimeSeries() = default;
  TimeSeries(std::vector<double> times, std::vector<double> values);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// `n` points on [t_min, t_max], logarithmic or linear.
std::vector<double> log_grid(double t_min, double t_max, std::size_t n);
std::vector<double> linear_grid(double t_min, double t_max, std::size_t n);

// ---------------------------------------------------------------------------
// Scalar measures
// ---------------------------------------------------------------------------

/// Tr[rho1 rho2] / sqrt(Tr rho1^2 Tr rho2^2), evaluated as a doubled-space overlap.
double generalized_le(const Operator& rho1, const Operator& rho2);
double generalized_le(const VectorizedState& psi1, const VectorizedState& psi2);

/// |<psi0| e^{iH2 t} e^{-iH1 t} |psi0>|^2.
double closed_le(const Operator& h1, const Operator& h2, const CVector& psi0, double t);

/// -log Tr rho^2.
double renyi2(const Operator& rho, double trace_tol = kTolerances.invariant);

/// Tr(rho1 rho2) / Tr(rho1^2).
double relative_purity(const Operator& rho1, const Operator& rho2);

// ---------------------------------------------------------------------------
// Echo dynamics
// ---------------------------------------------------------------------------

struct EchoRun {
  TimeSeries le;
  TimeSeries renyi2_first;   // gamma_1 evolution
  TimeSeries renyi2_second;  // gamma_2 evolution
  StateInvariants invariants_first;
  StateInvariants invariants_second;
};

/// Generalized LE between rho1(t) = e^{L1 t}[rho0] and rho2(t) = e^{L2 t}[rho0]
/// together with both purities' Rényi entropies and trajectory invariants.
EchoRun le_time_series(const LindbladModel& first, const LindbladModel& second, const Operator& rho0,
                       std::span<const double> times, Exec exec = Exec::kParallel);

// ---------------------------------------------------------------------------
// Feature extraction
// ---------------------------------------------------------------------------

struct Extremum {
  double time = 0.0;
  double value = 0.0;
  double prominence = 0.0;
};

enum class Regime { kWeak, kStrong };
std::string to_string(Regime r);

struct EchoFeatures {
  std::vector<Extremum> minima;        // chronological
  std::vector<Extremum> maxima;        // one between each pair of consecutive minima
  std::optional<double> t_plateau;     // earliest time after which |value - 1| <= band
  Regime regime = Regime::kWeak;
};

struct FeatureOptions {
  double plateau_band = 0.01;
  double min_prominence = 0.005;
  Regime regime = Regime::kWeak;  // copied into the result
};

/// Local minima of the 3-point moving average with topographic prominence
/// >= min_prominence, the maxima between them, and the plateau onset.
EchoFeatures extract_features(const TimeSeries& ts, const FeatureOptions& options = {});

/// Earliest time at which `s` has covered `fraction` of its rise from s(0)
/// to `final_value`; nullopt if never reached.
std::optional<double> saturation_time(const TimeSeries& s, double final_value, double fraction = 0.95);

struct ScalingRatio {
  std::string name;   // e.g. "t_min1*gamma2"
  double value = 0.0;
  bool pass = false;  // value in [0.2, 5]
};

struct ScalingReport {
  Regime regime = Regime::kWeak;
  bool degenerate = false;
  std::vector<ScalingRatio> ratios;
  bool ordering_ok = true;  // t_min1 < t_max < t_min2 < t_p (degenerate case)

  bool pass() const;
  const ScalingRatio* find(const std::string& name) const;
};

inline constexpr double kScalingBandLow = 0.2;
inline constexpr double kScalingBandHigh = 5.0;

/// Order-of-magnitude comparison of extracted timescales with the expected
/// scalings. `hd_zero_degeneracy` > 1 in the strong regime selects the
/// two-minima case. Throws InvalidArgument when the features the regime
/// requires are missing.
ScalingReport check_scalings(const EchoFeatures& features, double gamma1, double gamma2, double coupling_j,
                             int hd_zero_degeneracy = 1);

void to_json(nlohmann::json& j, const EchoFeatures& f);
void to_json(nlohmann::json& j, const ScalingReport& r);

}  // namespace openecho
