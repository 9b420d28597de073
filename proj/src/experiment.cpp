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

#include "openecho/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "openecho/rng.hpp"
#include "openecho/scrambling.hpp"

namespace openecho {

namespace {

using nlohmann::json;

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::kFig2Weak, "fig2_weak"},
    {ExperimentKind::kFig4aStrongAll, "fig4a_strong_all"},
    {ExperimentKind::kFig4bStrongHalf, "fig4b_strong_half"},
    {ExperimentKind::kSpectrum, "spectrum"},
    {ExperimentKind::kOtocRenyi, "otoc_renyi"},
    {ExperimentKind::kOtocLeDemo, "otoc_le_demo"},
    {ExperimentKind::kProtocol, "protocol"},
};

bool is_le_kind(ExperimentKind k) {
  return k == ExperimentKind::kFig2Weak || k == ExperimentKind::kFig4aStrongAll ||
         k == ExperimentKind::kFig4bStrongHalf;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

Operator ginibre(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(d);
  Operator g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im) / std::sqrt(2.0 * static_cast<double>(d));
    }
  return g;
}

JumpKind cycle_kind(int k) {
  switch (k % 3) {
    case 0:
      return JumpKind::kRandomGeneral;
    case 1:
      return JumpKind::kRandomHermitian;
    default:
      return JumpKind::kPauliZ;
  }
}

json invariants_json(const StateInvariants& inv) {
  return {{"max_trace_deviation", inv.max_trace_deviation},
          {"max_hermiticity_deviation", inv.max_hermiticity_deviation},
          {"min_eigenvalue", inv.min_eigenvalue},
          {"ok", inv.ok()}};
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& kn : kKindNames)
    if (kn.kind == k) return kn.name;
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (const auto& kn : kKindNames)
    if (s == kn.name) return kn.kind;
  throw ConfigError("unknown experiment '" + s + "'");
}

std::vector<double> TimeGrid::build() const {
  return spacing == GridSpacing::kLog ? log_grid(t_min, t_max, n_points) : linear_grid(t_min, t_max, n_points);
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  switch (kind) {
    case ExperimentKind::kFig2Weak:
      c.gamma1 = 0.02;
      c.gamma2 = 0.1;
      c.time_grid = {1e-2 / c.gamma2, 1e2 / c.gamma1, 400, GridSpacing::kLog};
      break;
    case ExperimentKind::kFig4aStrongAll:
    case ExperimentKind::kFig4bStrongHalf:
      c.gamma1 = 10.0;
      c.gamma2 = 100.0;
      c.sites = kind == ExperimentKind::kFig4aStrongAll ? SiteSelection::kAll : SiteSelection::kHalf;
      c.time_grid = {1e-2 / c.gamma2, 1e3 * c.gamma2, 600, GridSpacing::kLog};
      break;
    case ExperimentKind::kSpectrum:
      c.gamma1 = 10.0;
      c.gamma2 = 100.0;
      c.time_grid = {0.0, 1.0, 10, GridSpacing::kLinear};
      break;
    case ExperimentKind::kOtocRenyi:
    case ExperimentKind::kProtocol:
      c.gamma1 = 0.3;
      c.gamma2 = 1.0;
      c.n_realizations = 20;
      c.time_grid = {0.0, 1.0, 11, GridSpacing::kLinear};
      break;
    case ExperimentKind::kOtocLeDemo:
      c.gamma1 = 0.1;
      c.gamma2 = 1.0;
      c.noise_strength = 0.1;
      c.time_grid = {0.0, 5.0, 51, GridSpacing::kLinear};
      break;
  }
  c.output_dir = "out/" + to_string(kind);
  return c;
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(c.n_majorana >= 2 && c.n_majorana <= 12 && c.n_majorana % 2 == 0, "N must be even in [2, 12]");
  require(std::isfinite(c.coupling_j) && c.coupling_j > 0.0, "J must be positive");
  require(std::isfinite(c.gamma1) && c.gamma1 >= 0.0, "gamma1 must be finite and >= 0");
  require(std::isfinite(c.gamma2) && c.gamma2 >= 0.0, "gamma2 must be finite and >= 0");
  if (is_le_kind(c.experiment)) require(c.gamma1 < c.gamma2, "gamma1 must be smaller than gamma2");
  if (c.experiment == ExperimentKind::kSpectrum) require(c.gamma2 > 0.0, "spectrum needs gamma2 > 0");
  require(c.n_realizations >= 1, "n_realizations must be >= 1");
  require(c.noise_samples >= 2, "noise_samples must be >= 2");
  require(std::isfinite(c.noise_strength) && c.noise_strength >= 0.0, "noise_strength must be >= 0");
  require(c.time_grid.n_points >= 10, "time_grid.n_points must be >= 10");
  require(std::isfinite(c.time_grid.t_max) && c.time_grid.t_max > c.time_grid.t_min, "time_grid needs t_min < t_max");
  if (c.time_grid.spacing == GridSpacing::kLog) require(c.time_grid.t_min > 0.0, "log time grid needs t_min > 0");
  require(c.time_grid.t_min >= 0.0, "time_grid.t_min must be >= 0");
  require(c.tolerances.plateau_band > 0.0 && c.tolerances.min_prominence > 0.0 && c.tolerances.degeneracy > 0.0 &&
              c.tolerances.identity > 0.0,
          "tolerances must be positive");
  require(!c.output_dir.empty(), "output_dir must not be empty");
}

ExperimentConfig parse_config(const json& j) {
  try {
    reject_unknown(j,
                   {"schema_version", "experiment", "N", "J", "gamma1", "gamma2", "seed", "n_realizations", "sites",
                    "variance_convention", "noise_strength", "noise_samples", "time_grid", "tolerances", "output_dir"},
                   "config");
    if (!j.contains("schema_version")) throw ConfigError("missing schema_version");
    if (j.at("schema_version").get<int>() != kConfigSchemaVersion)
      throw ConfigError("unsupported schema_version (expected " + std::to_string(kConfigSchemaVersion) + ")");
    if (!j.contains("experiment")) throw ConfigError("missing experiment");
    ExperimentConfig c = ExperimentConfig::defaults(experiment_kind_from_string(j.at("experiment").get<std::string>()));
    if (j.contains("N")) c.n_majorana = j.at("N").get<int>();
    if (j.contains("J")) c.coupling_j = j.at("J").get<double>();
    if (j.contains("gamma1")) c.gamma1 = j.at("gamma1").get<double>();
    if (j.contains("gamma2")) c.gamma2 = j.at("gamma2").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("n_realizations")) c.n_realizations = j.at("n_realizations").get<int>();
    if (j.contains("sites")) c.sites = site_selection_from_string(j.at("sites").get<std::string>());
    if (j.contains("variance_convention"))
      c.convention = variance_convention_from_string(j.at("variance_convention").get<std::string>());
    if (j.contains("noise_strength")) c.noise_strength = j.at("noise_strength").get<double>();
    if (j.contains("noise_samples")) c.noise_samples = j.at("noise_samples").get<std::size_t>();
    if (j.contains("time_grid")) {
      const auto& g = j.at("time_grid");
      reject_unknown(g, {"t_min", "t_max", "n_points", "spacing"}, "time_grid");
      if (g.contains("t_min")) c.time_grid.t_min = g.at("t_min").get<double>();
      if (g.contains("t_max")) c.time_grid.t_max = g.at("t_max").get<double>();
      if (g.contains("n_points")) c.time_grid.n_points = g.at("n_points").get<std::size_t>();
      if (g.contains("spacing")) {
        const auto s = g.at("spacing").get<std::string>();
        if (s == "log") {
          c.time_grid.spacing = GridSpacing::kLog;
        } else if (s == "linear") {
          c.time_grid.spacing = GridSpacing::kLinear;
        } else {
          throw ConfigError("time_grid.spacing must be log or linear");
        }
      }
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      reject_unknown(t, {"plateau_band", "min_prominence", "degeneracy", "identity"}, "tolerances");
      if (t.contains("plateau_band")) c.tolerances.plateau_band = t.at("plateau_band").get<double>();
      if (t.contains("min_prominence")) c.tolerances.min_prominence = t.at("min_prominence").get<double>();
      if (t.contains("degeneracy")) c.tolerances.degeneracy = t.at("degeneracy").get<double>();
      if (t.contains("identity")) c.tolerances.identity = t.at("identity").get<double>();
    }
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    validate(c);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  return {{"schema_version", kConfigSchemaVersion},
          {"experiment", to_string(c.experiment)},
          {"N", c.n_majorana},
          {"J", c.coupling_j},
          {"gamma1", c.gamma1},
          {"gamma2", c.gamma2},
          {"seed", c.seed},
          {"n_realizations", c.n_realizations},
          {"sites", to_string(c.sites)},
          {"variance_convention", to_string(c.convention)},
          {"noise_strength", c.noise_strength},
          {"noise_samples", c.noise_samples},
          {"time_grid",
           {{"t_min", c.time_grid.t_min},
            {"t_max", c.time_grid.t_max},
            {"n_points", c.time_grid.n_points},
            {"spacing", c.time_grid.spacing == GridSpacing::kLog ? "log" : "linear"}}},
          {"tolerances",
           {{"plateau_band", c.tolerances.plateau_band},
            {"min_prominence", c.tolerances.min_prominence},
            {"degeneracy", c.tolerances.degeneracy},
            {"identity", c.tolerances.identity}}},
          {"output_dir", c.output_dir}};
}

// ---------------------------------------------------------------------------

Regime regime_of(const ExperimentConfig& c) {
  if (c.experiment == ExperimentKind::kFig2Weak) return Regime::kWeak;
  if (c.experiment == ExperimentKind::kFig4aStrongAll || c.experiment == ExperimentKind::kFig4bStrongHalf)
    return Regime::kStrong;
  return c.gamma1 / c.coupling_j >= 1.0 ? Regime::kStrong : Regime::kWeak;
}

LeExperiment run_le(const ExperimentConfig& c, std::uint64_t seed, Exec exec) {
  const SykModelSpec spec{c.n_majorana, c.coupling_j, seed, c.gamma1, c.sites, c.convention};
  const LindbladModel first = spec.build();
  const LindbladModel second = first.with_gamma(c.gamma2);
  const Operator parity = fermion_parity(c.n_majorana);
  const GroundState g = ground_state_in_sector(first.hamiltonian(), parity);
  const auto times = c.time_grid.build();

  LeExperiment out;
  out.run = le_time_series(first, second, g.rho, times, exec);
  out.features = extract_features(out.run.le, {c.tolerances.plateau_band, c.tolerances.min_prominence, regime_of(c)});

  const DoubledHamiltonian hd(second);
  out.hd_zero_degeneracy_full = hd_ground_degeneracy(hd, c.tolerances.degeneracy);
  out.hd_zero_degeneracy = hd_ground_degeneracy(hd, c.tolerances.degeneracy, &parity);

  const double s_max = std::log(static_cast<double>(first.dim()));
  out.saturation_first = saturation_time(out.run.renyi2_first, s_max);
  out.saturation_second = saturation_time(out.run.renyi2_second, s_max);
  try {
    out.scalings = check_scalings(out.features, c.gamma1, c.gamma2, c.coupling_j, out.hd_zero_degeneracy);
  } catch (const InvalidArgument& e) {
    out.scalings_available = false;
    out.scalings_error = e.what();
  }
  return out;
}

DisorderAverage disorder_average(const std::vector<TimeSeries>& series) {
  if (series.size() < 2) throw InvalidArgument("disorder_average: need at least two series");
  const auto& t0 = series.front().times();
  for (const auto& s : series)
    if (s.times() != t0) throw DimensionError("disorder_average: time grids differ");
  DisorderAverage a;
  a.times = t0;
  a.n = series.size();
  const double n = static_cast<double>(a.n);
  a.mean.assign(t0.size(), 0.0);
  a.stderr_.assign(t0.size(), 0.0);
  for (const auto& s : series)
    for (std::size_t k = 0; k < t0.size(); ++k) a.mean[k] += s.values()[k] / n;
  for (std::size_t k = 0; k < t0.size(); ++k) {
    double var = 0.0;
    for (const auto& s : series) var += (s.values()[k] - a.mean[k]) * (s.values()[k] - a.mean[k]);
    a.stderr_[k] = std::sqrt(var / (n - 1.0) / n);
  }
  return a;
}

DisorderAverage disorder_average_le(const ExperimentConfig& c) {
  const auto n = static_cast<std::size_t>(c.n_realizations);
  auto series = kernels::map(Exec::kParallel, n, [&](std::size_t k) {
    return run_le(c, c.seed + k, Exec::kSerial).run.le;
  });
  return disorder_average(series);
}

// ---------------------------------------------------------------------------

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw InvalidArgument("write_csv: header and column counts differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& col : columns)
    if (col.size() != rows) throw InvalidArgument("write_csv: columns differ in length");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << format_number(columns[i][r]);
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

json run_manifest(const ExperimentConfig& c) {
  return {{"schema_version", kConfigSchemaVersion},
          {"library_version", kLibraryVersion},
          {"experiment", to_string(c.experiment)},
          {"seed", c.seed},
          {"threads", kernels::max_threads()},
          {"config", to_json(c)}};
}

namespace {

ArtifactSet run_le_experiment(const ExperimentConfig& c, const std::filesystem::path& dir) {
  ArtifactSet a;
  const LeExperiment le = run_le(c, c.seed);
  const auto& r = le.run;
  write_csv(dir / "series.csv", {"t", "le", "renyi2_g1", "renyi2_g2"},
            {r.le.times(), r.le.values(), r.renyi2_first.values(), r.renyi2_second.values()});
  a.files.push_back(dir / "series.csv");

  json scal = nullptr;
  if (le.scalings_available) scal = le.scalings;
  a.summary = {{"features", le.features},
               {"scalings", scal},
               {"scalings_error", le.scalings_error},
               {"hd_zero_degeneracy", le.hd_zero_degeneracy},
               {"hd_zero_degeneracy_full", le.hd_zero_degeneracy_full},
               {"renyi2_saturation", {{"gamma1", optional_json(le.saturation_first)},
                                      {"gamma2", optional_json(le.saturation_second)}}},
               {"invariants", {{"gamma1", invariants_json(r.invariants_first)},
                               {"gamma2", invariants_json(r.invariants_second)}}}};
  a.pass = r.invariants_first.ok() && r.invariants_second.ok();

  if (c.n_realizations > 1) {
    const auto avg = disorder_average_le(c);
    write_csv(dir / "le_mean.csv", {"t", "le_mean", "le_stderr"}, {avg.times, avg.mean, avg.stderr_});
    a.files.push_back(dir / "le_mean.csv");
    const TimeSeries mean_series(avg.times, avg.mean);
    a.summary["disorder_average"] = {
        {"n_realizations", avg.n},
        {"features", extract_features(mean_series, {c.tolerances.plateau_band, c.tolerances.min_prominence,
                                                    regime_of(c)})}};
  }
  write_json(dir / "features.json", a.summary);
  a.files.push_back(dir / "features.json");
  return a;
}

ArtifactSet run_spectrum_experiment(const ExperimentConfig& c, const std::filesystem::path& dir) {
  ArtifactSet a;
  const SykModelSpec spec{c.n_majorana, c.coupling_j, c.seed, c.gamma2, c.sites, c.convention};
  const Operator parity = fermion_parity(c.n_majorana);
  Tolerances tol;
  tol.degeneracy = c.tolerances.degeneracy;
  const SpectrumReport rep = spectrum_report(spec.build(), &parity, tol);
  std::vector<double> re, im;
  for (const auto& z : rep.eigenvalues) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  write_csv(dir / "eigenvalues.csv", {"re", "im"}, {re, im});
  a.files.push_back(dir / "eigenvalues.csv");
  a.summary = rep;
  a.summary["gamma"] = c.gamma2;
  a.summary["J"] = c.coupling_j;
  write_json(dir / "spectrum.json", a.summary);
  a.files.push_back(dir / "spectrum.json");
  a.pass = rep.symmetry_defect <= c.tolerances.identity;
  return a;
}

json otoc_renyi_records(const ExperimentConfig& c, std::span<const double> times, double& worst) {
  const BipartiteSplit split(4, 4);
  const auto per_model = kernels::map(Exec::kParallel, static_cast<std::size_t>(c.n_realizations), [&](std::size_t k) {
    const auto model = random_qubit_model(4, c.coupling_j, c.gamma1,
                                          k % 2 ? JumpKind::kPauliZ : JumpKind::kRandomHermitian,
                                          derive_seed(c.seed, k));
    const Operator o = ginibre(16, derive_seed(c.seed, 1000 + k));
    return otoc_renyi_check(model, o, split, times);
  });
  json records = json::array();
  worst = 0.0;
  for (std::size_t k = 0; k < per_model.size(); ++k) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto& r = per_model[k][i];
      const double dev = std::abs(r.lhs - r.rhs);
      worst = std::max(worst, dev);
      records.push_back({{"model", k}, {"t", times[i]}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"deviation", dev}});
    }
  }
  return records;
}

json protocol_records(const ExperimentConfig& c, std::span<const double> times, double& worst) {
  json records = json::array();
  worst = 0.0;
  const BipartiteSplit split(2, 4);
  for (int k = 0; k < c.n_realizations; ++k) {
    const auto seed = derive_seed(c.seed, static_cast<std::uint64_t>(k));
    const auto model = random_qubit_model(3, c.coupling_j, c.gamma1, cycle_kind(k), seed);
    const Operator w = kron(haar_unitary(2, derive_seed(seed, 1)), identity(4));
    const Operator m = kron(identity(2), random_hermitian(4, 1.0, derive_seed(seed, 2)));
    const OpenOtoc otoc(model, split);
    const auto rows = kernels::map(Exec::kParallel, times.size(), [&](std::size_t i) {
      const double protocol = protocol_simulate(model, w, m, split, times[i]);
      const Complex f = otoc.value(w, m, times[i]);
      return std::pair{protocol, f};
    });
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double d = static_cast<double>(split.dim());
      const double dev = std::abs(Complex(rows[i].first) - d * rows[i].second);
      worst = std::max(worst, dev);
      records.push_back({{"model", k}, {"t", times[i]}, {"protocol", rows[i].first},
                         {"d_times_otoc_re", d * rows[i].second.real()}, {"d_times_otoc_im", d * rows[i].second.imag()},
                         {"deviation", dev}});
    }
  }
  return records;
}

ArtifactSet run_otoc_le_demo(const ExperimentConfig& c, const std::filesystem::path& dir) {
  ArtifactSet a;
  const auto times = c.time_grid.build();
  const LindbladModel chain = chain_model_1p2(c.coupling_j, c.noise_strength, c.gamma1);
  const LindbladModel bath = chain_bath_model(c.coupling_j, c.gamma1);
  const OpenOtoc otoc(chain, BipartiteSplit(2, 4));
  const NoiseEnsemble noise{c.noise_samples, c.noise_strength, c.seed};
  std::vector<double> f(times.size()), le(times.size()), le_err(times.size()), le_norm(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    f[i] = otoc.average_ab(times[i]);
    const auto n = noise_averaged_le(bath, noise, times[i]);
    le[i] = n.value;
    le_err[i] = n.stderr_;
    le_norm[i] = n.normalized;
  }
  write_csv(dir / "otoc_le.csv", {"t", "otoc_avg", "le_noise", "le_noise_stderr", "le_noise_normalized"},
            {times, f, le, le_err, le_norm});
  a.files.push_back(dir / "otoc_le.csv");
  const double rho = spearman_correlation(f, le);
  a.summary = {{"spearman", rho}, {"threshold", 0.8}, {"n_points", times.size()}, {"noise_samples", c.noise_samples}};
  a.pass = rho > 0.8;
  write_json(dir / "otoc_le.json", a.summary);
  a.files.push_back(dir / "otoc_le.json");
  return a;
}

}  // namespace

ArtifactSet run_experiment(const ExperimentConfig& c) {
  validate(c);
  const std::filesystem::path dir(c.output_dir);
  std::filesystem::create_directories(dir);
  ArtifactSet a;
  switch (c.experiment) {
    case ExperimentKind::kFig2Weak:
    case ExperimentKind::kFig4aStrongAll:
    case ExperimentKind::kFig4bStrongHalf:
      a = run_le_experiment(c, dir);
      break;
    case ExperimentKind::kSpectrum:
      a = run_spectrum_experiment(c, dir);
      break;
    case ExperimentKind::kOtocRenyi:
    case ExperimentKind::kProtocol: {
      const auto times = c.time_grid.build();
      double worst = 0.0;
      const bool renyi = c.experiment == ExperimentKind::kOtocRenyi;
      json records = renyi ? otoc_renyi_records(c, times, worst) : protocol_records(c, times, worst);
      a.pass = worst <= c.tolerances.identity;
      a.summary = {{"max_deviation", worst}, {"tolerance", c.tolerances.identity}, {"pass", a.pass},
                   {"records", records}};
      const auto file = dir / (renyi ? "otoc_renyi.json" : "protocol.json");
      write_json(file, a.summary);
      a.files.push_back(file);
      break;
    }
    case ExperimentKind::kOtocLeDemo:
      a = run_otoc_le_demo(c, dir);
      break;
  }
  a.output_dir = dir;
  write_json(dir / "manifest.json", run_manifest(c));
  a.files.push_back(dir / "manifest.json");
  return a;
}

// ---------------------------------------------------------------------------

CheckResult check_reductions(std::uint64_t seed) {
  CheckResult r;
  r.suite = "reductions";
  r.tolerance = kTolerances.invariant;
  const int n = 6;
  const Operator h1 = syk_hamiltonian(SykEnsemble::draw(n, 1.0, seed));
  const Operator h2 = h1 + 0.2 * syk_hamiltonian(SykEnsemble::draw(n, 1.0, derive_seed(seed, 1)));
  const auto jumps = majorana_ops(n);
  const LindbladModel m1(h1, jumps, 0.0), m2(h2, jumps, 0.0);
  const GroundState g = ground_state_in_sector(h1, fermion_parity(n));
  const auto times = log_grid(1e-2, 1e2, 50);
  const EchoRun run = le_time_series(m1, m2, g.rho, times);
  json cases = json::array();
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double closed = closed_le(h1, h2, g.vector, times[k]);
    const double dev = std::abs(closed - run.le.values()[k]);
    r.max_deviation = std::max(r.max_deviation, dev);
    cases.push_back({{"t", times[k]}, {"generalized", run.le.values()[k]}, {"closed", closed}, {"deviation", dev}});
  }
  r.n_cases = times.size();
  r.pass = r.max_deviation <= r.tolerance;
  r.details = {{"cases", cases}};
  return r;
}

CheckResult check_otoc_renyi(std::uint64_t seed, int n_models) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::kOtocRenyi);
  c.seed = seed;
  c.n_realizations = n_models;
  const std::vector<double> times{0.0, 0.5, 1.0};
  CheckResult r;
  r.suite = "otoc-renyi";
  r.tolerance = kTolerances.invariant;
  r.details = {{"cases", otoc_renyi_records(c, times, r.max_deviation)}};
  r.n_cases = static_cast<std::size_t>(n_models) * times.size();
  r.pass = r.max_deviation <= r.tolerance;
  return r;
}

CheckResult check_protocol(std::uint64_t seed, int n_models) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::kProtocol);
  c.seed = seed;
  c.n_realizations = n_models;
  const std::vector<double> times{0.0, 0.5, 1.0};
  CheckResult r;
  r.suite = "protocol";
  r.tolerance = kTolerances.invariant;
  r.details = {{"cases", protocol_records(c, times, r.max_deviation)}};
  r.n_cases = static_cast<std::size_t>(n_models) * times.size();
  r.pass = r.max_deviation <= r.tolerance;
  return r;
}

CheckResult check_duality(std::uint64_t seed, int n_models) {
  CheckResult r;
  r.suite = "duality";
  r.tolerance = kTolerances.invariant;
  json cases = json::array();
  const double t = 1.0;
  for (int k = 0; k < n_models; ++k) {
    const auto s = derive_seed(seed, static_cast<std::uint64_t>(k));
    const auto kind = cycle_kind(k);
    const auto model = random_qubit_model(2, 1.0, 0.4, kind, s);
    const Operator w = ginibre(4, derive_seed(s, 1));
    const Operator rr = ginibre(4, derive_seed(s, 2));
    const Complex lhs = (rr * op_evolve_forward(model, w, t)).trace();
    const Complex rhs = (op_evolve_adjoint(model, rr, t) * w).trace();
    const double dual_dev = std::abs(lhs - rhs);
    double herm_dev = 0.0;
    if (model.hermitian_jumps())
      herm_dev = (op_evolve_adjoint_dagger(model, rr, t) - op_evolve_forward(model, rr, t)).cwiseAbs().maxCoeff();
    r.max_deviation = std::max({r.max_deviation, dual_dev, herm_dev});
    cases.push_back({{"model", k}, {"hermitian_jumps", model.hermitian_jumps()}, {"duality_deviation", dual_dev},
                     {"adjoint_dagger_vs_forward", herm_dev}});
  }
  r.n_cases = static_cast<std::size_t>(n_models);
  r.pass = r.max_deviation <= r.tolerance;
  r.details = {{"t", t}, {"cases", cases}};
  return r;
}

std::vector<std::string> check_suites() { return {"reductions", "otoc-renyi", "protocol", "duality"}; }

CheckResult run_check(const std::string& suite, std::uint64_t seed) {
  if (suite == "reductions") return check_reductions(seed);
  if (suite == "otoc-renyi") return check_otoc_renyi(seed);
  if (suite == "protocol") return check_protocol(seed);
  if (suite == "duality") return check_duality(seed);
  throw ConfigError("unknown check suite '" + suite + "'");
}

void to_json(json& j, const CheckResult& r) {
  j = json{{"suite", r.suite},         {"pass", r.pass},       {"max_deviation", r.max_deviation},
           {"tolerance", r.tolerance}, {"n_cases", r.n_cases}, {"details", r.details}};
}

}  // namespace openecho
