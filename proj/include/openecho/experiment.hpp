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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "openecho/echo.hpp"
#include "openecho/models.hpp"
#include "openecho/spectrum.hpp"

namespace openecho {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

enum class ExperimentKind {
  kFig2Weak,
  kFig4aStrongAll,
  kFig4bStrongHalf,
  kSpectrum,
  kOtocRenyi,
  kOtocLeDemo,
  kProtocol,
};

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

enum class GridSpacing { kLog, kLinear };

struct TimeGrid {
  double t_min = 0.0;
  double t_max = 1.0;
  std::size_t n_points = 400;
  GridSpacing spacing = GridSpacing::kLog;

  std::vector<double> build() const;
};

struct ExperimentTolerances {
  double plateau_band = 0.01;
  double min_prominence = 0.005;
  double degeneracy = kTolerances.degeneracy;
  double identity = kTolerances.invariant;  // identity-suite pass threshold
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kFig2Weak;
  int n_majorana = 6;
  double coupling_j = 1.0;
  double gamma1 = 0.02;
  double gamma2 = 0.1;
  std::uint64_t seed = 1;
  int n_realizations = 1;
  SiteSelection sites = SiteSelection::kAll;
  VarianceConvention convention = VarianceConvention::kPaper;
  double noise_strength = 0.1;   // otoc_le_demo
  std::size_t noise_samples = 64;
  TimeGrid time_grid;
  ExperimentTolerances tolerances;
  std::string output_dir = "out";

  /// Default parameters of one experiment.
  static ExperimentConfig defaults(ExperimentKind kind);
};

/// Parses a versioned config: missing keys take the experiment defaults,
/// unknown keys and invalid values throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& c);
nlohmann::json to_json(const ExperimentConfig& c);

// ---------------------------------------------------------------------------
// Runs
// ---------------------------------------------------------------------------

struct ArtifactSet {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;  // also written as the experiment's main JSON file
  bool pass = true;        // identity suites: all deviations within tolerance
};

/// Dissipative SYK echo run with everything derived from it.
struct LeExperiment {
  EchoRun run;
  EchoFeatures features;
  ScalingReport scalings;
  int hd_zero_degeneracy = 0;       // parity-even sector
  int hd_zero_degeneracy_full = 0;
  std::optional<double> saturation_first;   // 95% Rényi saturation, gamma_1 evolution
  std::optional<double> saturation_second;  // gamma_2 evolution
  bool scalings_available = true;
  std::string scalings_error;
};

LeExperiment run_le(const ExperimentConfig& c, std::uint64_t seed, Exec exec = Exec::kParallel);

Regime regime_of(const ExperimentConfig& c);

/// Runs the experiment, writing every artifact under c.output_dir.
ArtifactSet run_experiment(const ExperimentConfig& c);

struct DisorderAverage {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::size_t n = 0;
};

/// Pointwise mean and standard error; throws InvalidArgument on fewer than
/// two series and DimensionError on a grid mismatch.
DisorderAverage disorder_average(const std::vector<TimeSeries>& series);

/// le series of `n_realizations` seeds (seed, seed+1, ...), realizations in parallel.
DisorderAverage disorder_average_le(const ExperimentConfig& c);

// ---------------------------------------------------------------------------
// Identity suites
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string suite;
  bool pass = false;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::size_t n_cases = 0;
  nlohmann::json details;
};

/// Suites: reductions, otoc-renyi, protocol, duality.
CheckResult run_check(const std::string& suite, std::uint64_t seed = 1);
std::vector<std::string> check_suites();

CheckResult check_reductions(std::uint64_t seed);
CheckResult check_otoc_renyi(std::uint64_t seed, int n_models = 20);
CheckResult check_protocol(std::uint64_t seed, int n_models = 20);
CheckResult check_duality(std::uint64_t seed, int n_models = 10);

void to_json(nlohmann::json& j, const CheckResult& r);

// ---------------------------------------------------------------------------
// Output helpers
// ---------------------------------------------------------------------------

/// Locale-independent formatting with 12 significant digits.
std::string format_number(double x);

/// CSV with `.` decimals and `\n` line endings.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json run_manifest(const ExperimentConfig& c);

}  // namespace openecho
