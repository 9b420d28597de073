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

#include "openecho/echo.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace openecho {

TimeSeries::TimeSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size()) throw DimensionError("TimeSeries: times and values differ in length");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw InvalidArgument("TimeSeries: times must be strictly increasing");
}

std::vector<double> log_grid(double t_min, double t_max, std::size_t n) {
  if (!(t_min > 0.0) || !(t_max > t_min)) throw InvalidArgument("log_grid: need 0 < t_min < t_max");
  if (n < 2) throw InvalidArgument("log_grid: need at least two points");
  std::vector<double> out(n);
  const double a = std::log(t_min), b = std::log(t_max);
  for (std::size_t k = 0; k < n; ++k) out[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

std::vector<double> linear_grid(double t_min, double t_max, std::size_t n) {
  if (!(t_max > t_min)) throw InvalidArgument("linear_grid: need t_min < t_max");
  if (n < 2) throw InvalidArgument("linear_grid: need at least two points");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = t_min + (t_max - t_min) * static_cast<double>(k) / static_cast<double>(n - 1);
  return out;
}

// ---------------------------------------------------------------------------

double generalized_le(const VectorizedState& psi1, const VectorizedState& psi2) {
  if (psi1.dim2() != psi2.dim2()) throw DimensionError("generalized_le: states differ in dimension");
  const double n1 = psi1.entries().squaredNorm();
  const double n2 = psi2.entries().squaredNorm();
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw InvalidArgument("generalized_le: zero-purity input");
  return psi1.entries().dot(psi2.entries()).real() / std::sqrt(n1 * n2);
}

double generalized_le(const Operator& rho1, const Operator& rho2) {
  if (rho1.rows() != rho2.rows() || !is_square(rho1) || !is_square(rho2))
    throw DimensionError("generalized_le: states differ in dimension");
  return generalized_le(vec(rho1), vec(rho2));
}

double closed_le(const Operator& h1, const Operator& h2, const CVector& psi0, double t) {
  if (h1.rows() != h2.rows() || h1.rows() != psi0.size()) throw DimensionError("closed_le: dimension mismatch");
  auto evolve = [&](const Operator& h) -> CVector {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(0.5 * (h + h.adjoint()))};
    if (es.info() != Eigen::Success) throw NumericalError("closed_le: eigensolver failed");
    const CVector phases = (-kI * t * es.eigenvalues().cast<Complex>().array()).exp().matrix();
    return es.eigenvectors() * phases.cwiseProduct(es.eigenvectors().adjoint() * psi0);
  };
  return std::norm(evolve(h2).dot(evolve(h1)));
}

double renyi2(const Operator& rho, double trace_tol) {
  if (!is_square(rho)) throw DimensionError("renyi2: not square");
  if (std::abs(rho.trace() - Complex(1.0)) > trace_tol) throw InvalidArgument("renyi2: trace differs from 1");
  const double purity = rho.cwiseAbs2().sum();
  return -std::log(purity);
}

double relative_purity(const Operator& rho1, const Operator& rho2) {
  if (rho1.rows() != rho2.rows() || !is_square(rho1) || !is_square(rho2))
    throw DimensionError("relative_purity: dimension mismatch");
  const double p1 = rho1.cwiseAbs2().sum();
  if (!(p1 > 0.0)) throw InvalidArgument("relative_purity: zero purity");
  return hs_inner(rho1, rho2).real() / p1;
}

// ---------------------------------------------------------------------------

EchoRun le_time_series(const LindbladModel& first, const LindbladModel& second, const Operator& rho0,
                       std::span<const double> times, Exec exec) {
  if (first.dim() != second.dim() || static_cast<std::size_t>(rho0.rows()) != first.dim() || !is_square(rho0))
    throw DimensionError("le_time_series: model and state dimensions differ");
  const DoubledHamiltonian hd1(first), hd2(second);
  const VectorizedState psi0 = vec(rho0);
  const auto traj1 = propagate(hd1, psi0, times, exec);
  const auto traj2 = propagate(hd2, psi0, times, exec);

  const Complex trace0 = rho0.trace();
  std::vector<double> t(times.begin(), times.end());
  std::vector<double> le(t.size()), s1(t.size()), s2(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    le[k] = generalized_le(traj1[k], traj2[k]);
    // Tr rho^2 = <psi|psi> for Hermitian rho; the trace is fixed by the dynamics.
    s1[k] = -std::log(traj1[k].entries().squaredNorm() / std::norm(trace0));
    s2[k] = -std::log(traj2[k].entries().squaredNorm() / std::norm(trace0));
  }
  EchoRun run;
  run.le = TimeSeries(t, std::move(le));
  run.renyi2_first = TimeSeries(t, std::move(s1));
  run.renyi2_second = TimeSeries(t, std::move(s2));
  run.invariants_first = check_state_invariants(traj1, trace0, exec);
  run.invariants_second = check_state_invariants(traj2, trace0, exec);
  return run;
}

// ---------------------------------------------------------------------------

std::string to_string(Regime r) { return r == Regime::kWeak ? "weak" : "strong"; }

namespace {

std::vector<double> smooth3(const std::vector<double>& v) {
  std::vector<double> out = v;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) out[i] = (v[i - 1] + v[i] + v[i + 1]) / 3.0;
  return out;
}

// Depth of the dip at i: the lower of the two highest points reachable on
// each side before the curve drops below v[i].
double minimum_prominence(const std::vector<double>& v, std::size_t i) {
  double left = v[i];
  for (std::size_t j = i; j-- > 0;) {
    if (v[j] < v[i]) break;
    left = std::max(left, v[j]);
  }
  double right = v[i];
  for (std::size_t j = i + 1; j < v.size(); ++j) {
    if (v[j] < v[i]) break;
    right = std::max(right, v[j]);
  }
  return std::min(left, right) - v[i];
}

}  // namespace

EchoFeatures extract_features(const TimeSeries& ts, const FeatureOptions& options) {
  if (ts.size() < 10) throw InvalidArgument("extract_features: series too short (need >= 10 samples)");
  const auto& t = ts.times();
  const auto& raw = ts.values();
  const auto s = smooth3(raw);

  EchoFeatures f;
  f.regime = options.regime;
  std::vector<std::size_t> min_idx;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!(s[i] < s[i - 1] && s[i] <= s[i + 1])) continue;
    const double prom = minimum_prominence(s, i);
    if (prom < options.min_prominence) continue;
    min_idx.push_back(i);
    f.minima.push_back({t[i], raw[i], prom});
  }
  for (std::size_t m = 0; m + 1 < min_idx.size(); ++m) {
    std::size_t best = min_idx[m] + 1;
    for (std::size_t i = best; i < min_idx[m + 1]; ++i)
      if (s[i] > s[best]) best = i;
    f.maxima.push_back({t[best], raw[best], s[best] - std::max(s[min_idx[m]], s[min_idx[m + 1]])});
  }

  std::size_t k = raw.size();
  while (k > 0 && std::abs(raw[k - 1] - 1.0) <= options.plateau_band) --k;
  if (!min_idx.empty()) k = std::max(k, min_idx.back() + 1);
  if (k < raw.size()) f.t_plateau = t[k];
  return f;
}

std::optional<double> saturation_time(const TimeSeries& s, double final_value, double fraction) {
  if (s.size() == 0) return std::nullopt;
  const auto& v = s.values();
  const double target = v.front() + fraction * (final_value - v.front());
  const bool rising = final_value >= v.front();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (rising ? v[k] >= target : v[k] <= target) return s.times()[k];
  return std::nullopt;
}

// ---------------------------------------------------------------------------

bool ScalingReport::pass() const {
  if (!ordering_ok) return false;
  return std::all_of(ratios.begin(), ratios.end(), [](const ScalingRatio& r) { return r.pass; });
}

const ScalingRatio* ScalingReport::find(const std::string& name) const {
  for (const auto& r : ratios)
    if (r.name == name) return &r;
  return nullptr;
}

ScalingReport check_scalings(const EchoFeatures& features, double gamma1, double gamma2, double coupling_j,
                             int hd_zero_degeneracy) {
  if (!(gamma1 > 0.0) || !(gamma2 > 0.0) || !(coupling_j > 0.0))
    throw InvalidArgument("check_scalings: rates and coupling must be positive");
  ScalingReport r;
  r.regime = features.regime;
  r.degenerate = features.regime == Regime::kStrong && hd_zero_degeneracy > 1;
  auto add = [&](std::string name, double value) {
    r.ratios.push_back({std::move(name), value, value >= kScalingBandLow && value <= kScalingBandHigh});
  };
  const double j2 = coupling_j * coupling_j;
  if (features.minima.empty()) throw InvalidArgument("check_scalings: no minimum found");
  if (!features.t_plateau) throw InvalidArgument("check_scalings: no plateau found");
  const double tp = *features.t_plateau;

  if (!r.degenerate) {
    add("t_min*gamma2", features.minima.front().time * gamma2);
    add("t_p*gamma1", tp * gamma1);
    return r;
  }
  if (features.minima.size() < 2 || features.maxima.empty())
    throw InvalidArgument("check_scalings: degenerate strong regime needs two minima and a maximum");
  const double t1 = features.minima[0].time;
  const double tmax = features.maxima[0].time;
  const double t2 = features.minima[1].time;
  add("t_min1*gamma2", t1 * gamma2);
  add("t_min2*J^2/gamma1", t2 * j2 / gamma1);
  add("t_p*J^2/gamma2", tp * j2 / gamma2);
  r.ordering_ok = t1 < tmax && tmax < t2 && t2 < tp;
  return r;
}

void to_json(nlohmann::json& j, const EchoFeatures& f) {
  auto list = [](const std::vector<Extremum>& xs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : xs) a.push_back({{"t", x.time}, {"value", x.value}, {"prominence", x.prominence}});
    return a;
  };
  j = nlohmann::json{{"t_min_list", list(f.minima)},
                     {"t_max_list", list(f.maxima)},
                     {"t_plateau", f.t_plateau ? nlohmann::json(*f.t_plateau) : nlohmann::json(nullptr)},
                     {"regime_label", to_string(f.regime)}};
}

void to_json(nlohmann::json& j, const ScalingReport& r) {
  nlohmann::json ratios = nlohmann::json::array();
  for (const auto& x : r.ratios) ratios.push_back({{"name", x.name}, {"value", x.value}, {"pass", x.pass}});
  j = nlohmann::json{{"regime", to_string(r.regime)},
                     {"degenerate", r.degenerate},
                     {"ratios", ratios},
                     {"ordering_ok", r.ordering_ok},
                     {"band", {kScalingBandLow, kScalingBandHigh}},
                     {"pass", r.pass()}};
}

}  // namespace openecho
