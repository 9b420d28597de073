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

#include "openecho/scrambling.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <utility>

#include <Eigen/Eigenvalues>

#include "openecho/rng.hpp"

namespace openecho {

BipartiteSplit::BipartiteSplit(std::size_t da, std::size_t db) : dim_a(da), dim_b(db) {
  if (da == 0 || db == 0) throw InvalidArgument("BipartiteSplit: factor dimensions must be positive");
}

namespace {

void require_split(const LindbladModel& model, const BipartiteSplit& split) {
  if (split.dim() != model.dim())
    throw DimensionError("split dimensions " + std::to_string(split.dim_a) + "x" + std::to_string(split.dim_b) +
                         " do not match model dimension " + std::to_string(model.dim()));
}

struct FlowSigns {
  double commutator;  // coefficient of i[H, R]
  bool sandwich_dag_first;  // L^dag R L (true) or L R L^dag (false)
};

FlowSigns flow_signs(OperatorFlow flow) {
  switch (flow) {
    case OperatorFlow::kForward:
      return {+1.0, true};
    case OperatorFlow::kBackward:
      return {-1.0, true};
    case OperatorFlow::kAdjoint:
      return {-1.0, false};
    case OperatorFlow::kAdjointDagger:
      return {+1.0, false};
  }
  throw InvalidArgument("unknown operator flow");
}

}  // namespace

std::string to_string(OperatorFlow f) {
  switch (f) {
    case OperatorFlow::kForward:
      return "forward";
    case OperatorFlow::kBackward:
      return "backward";
    case OperatorFlow::kAdjoint:
      return "adjoint";
    case OperatorFlow::kAdjointDagger:
      return "adjoint_dagger";
  }
  return "?";
}

Operator flow_generator(const LindbladModel& model, OperatorFlow flow, bool fermionic_sign) {
  const FlowSigns s = flow_signs(flow);
  const std::size_t d = model.dim();
  const Operator id = identity(d);
  const Operator& h = model.hamiltonian();
  // vec(A X B) = (A (x) B^T) vec(X) for row stacking.
  Operator g = (s.commutator * kI) * (kron(h, id) - kron(id, h.transpose()));
  const double g2 = 2.0 * model.gamma() * ((fermionic_sign && flow == OperatorFlow::kForward) ? -1.0 : 1.0);
  for (const auto& l : model.jumps()) {
    const Operator k = l.adjoint() * l;
    if (s.sandwich_dag_first) {
      g += g2 * kron(l.adjoint(), l.transpose());
    } else {
      g += g2 * kron(l, l.conjugate());
    }
    g -= model.gamma() * (kron(k, id) + kron(id, k.transpose()));
  }
  return g;
}

MatrixRhs flow_rhs(const LindbladModel& model, OperatorFlow flow, bool fermionic_sign) {
  const FlowSigns s = flow_signs(flow);
  const double g2 = 2.0 * model.gamma() * ((fermionic_sign && flow == OperatorFlow::kForward) ? -1.0 : 1.0);
  const double gamma = model.gamma();
  const Operator ih = (s.commutator * kI) * model.hamiltonian();
  std::vector<Operator> left, right;
  Operator k = Operator::Zero(ih.rows(), ih.cols());
  for (const auto& l : model.jumps()) {
    left.push_back(s.sandwich_dag_first ? Operator(l.adjoint()) : l);
    right.push_back(s.sandwich_dag_first ? l : Operator(l.adjoint()));
    k += l.adjoint() * l;
  }
  return [=](const Operator& r) -> Operator {
    Operator out = ih * r - r * ih;
    out -= gamma * (k * r + r * k);
    for (std::size_t m = 0; m < left.size(); ++m) out += g2 * (left[m] * r * right[m]);
    return out;
  };
}

OperatorEvolution::OperatorEvolution(const LindbladModel& model, OperatorFlow flow, bool fermionic_sign)
    : propagator_(Operator(kI * flow_generator(model, flow, fermionic_sign))), dim_(model.dim()), flow_(flow) {}

Operator OperatorEvolution::apply(const Operator& r, double t) const {
  if (static_cast<std::size_t>(r.rows()) != dim_ || !is_square(r))
    throw DimensionError("OperatorEvolution: operator dimension differs from the model");
  return unvec(VectorizedState(propagator_.apply(vec(r).entries(), t)));
}

Operator op_evolve_forward(const LindbladModel& model, const Operator& r, double t, bool fermionic_sign) {
  return OperatorEvolution(model, OperatorFlow::kForward, fermionic_sign).apply(r, t);
}
Operator op_evolve_backward(const LindbladModel& model, const Operator& r, double t) {
  return OperatorEvolution(model, OperatorFlow::kBackward).apply(r, t);
}
Operator op_evolve_adjoint(const LindbladModel& model, const Operator& r, double t) {
  return OperatorEvolution(model, OperatorFlow::kAdjoint).apply(r, t);
}
Operator op_evolve_adjoint_dagger(const LindbladModel& model, const Operator& r, double t) {
  return OperatorEvolution(model, OperatorFlow::kAdjointDagger).apply(r, t);
}

// ---------------------------------------------------------------------------

Operator require_support_a(const Operator& w, const BipartiteSplit& split, double tol) {
  if (static_cast<std::size_t>(w.rows()) != split.dim() || !is_square(w))
    throw DimensionError("require_support_a: operator dimension differs from the split");
  const Operator wa = partial_trace(w, split.dim_a, split.dim_b, Keep::kA) / static_cast<double>(split.dim_b);
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  if ((kron(wa, identity(split.dim_b)) - w).cwiseAbs().maxCoeff() > tol * scale)
    throw SupportError("operator is not of the form W_A (x) I_B");
  return wa;
}

Operator require_support_b(const Operator& r, const BipartiteSplit& split, double tol) {
  if (static_cast<std::size_t>(r.rows()) != split.dim() || !is_square(r))
    throw DimensionError("require_support_b: operator dimension differs from the split");
  const Operator rb = partial_trace(r, split.dim_a, split.dim_b, Keep::kB) / static_cast<double>(split.dim_a);
  const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
  if ((kron(identity(split.dim_a), rb) - r).cwiseAbs().maxCoeff() > tol * scale)
    throw SupportError("operator is not of the form I_A (x) R_B");
  return rb;
}

std::string to_string(TwirlMethod m) {
  switch (m) {
    case TwirlMethod::kExact:
      return "exact";
    case TwirlMethod::kPauli:
      return "pauli";
    case TwirlMethod::kMonteCarlo:
      return "montecarlo";
  }
  return "?";
}

TwirlMethod twirl_method_from_string(const std::string& s) {
  if (s == "exact") return TwirlMethod::kExact;
  if (s == "pauli") return TwirlMethod::kPauli;
  if (s == "montecarlo") return TwirlMethod::kMonteCarlo;
  throw InvalidArgument("unknown twirl method '" + s + "'");
}

OpenOtoc::OpenOtoc(const LindbladModel& model, BipartiteSplit split, bool fermionic_sign)
    : split_(split),
      forward_(model, OperatorFlow::kForward, fermionic_sign),
      backward_(model, OperatorFlow::kBackward),
      adjoint_dagger_(model, OperatorFlow::kAdjointDagger) {
  require_split(model, split_);
}

Complex OpenOtoc::value(const Operator& w, const Operator& r, double t) const {
  require_support_a(w, split_);
  require_support_b(r, split_);
  const Operator inner = w.adjoint() * forward_.apply(r, t) * w;
  return hs_inner(r, backward_.apply(inner, t)) / static_cast<double>(split_.dim());
}

Complex OpenOtoc::exact_w_average(const Operator& r, const Operator& r_dag, double t) const {
  const Operator x = partial_trace(forward_.apply(r, t), split_.dim_a, split_.dim_b, Keep::kB);
  const Operator y = partial_trace(adjoint_dagger_.apply(r_dag, t), split_.dim_a, split_.dim_b, Keep::kB);
  return (y * x).trace() / static_cast<double>(split_.dim() * split_.dim_a);
}

TwirlEstimate OpenOtoc::average_w(const Operator& r, double t, TwirlMethod method, std::size_t n_samples,
                                  std::uint64_t seed, Exec exec) const {
  require_support_b(r, split_);
  TwirlEstimate e;
  e.method = method;
  const double d = static_cast<double>(split_.dim());
  const Operator id_b = identity(split_.dim_b);
  switch (method) {
    case TwirlMethod::kExact:
      e.value = exact_w_average(r, r.adjoint(), t).real();
      e.n_samples = 1;
      return e;
    case TwirlMethod::kPauli: {
      const int n_a = qubit_count(split_.dim_a);
      if (n_a < 0) throw InvalidArgument("pauli twirl needs d_A to be a power of two");
      const auto paulis = pauli_basis(n_a);
      const Operator x = forward_.apply(r, t);
      const Complex total = kernels::sum(exec, paulis.size(), Complex(0.0), [&](std::size_t k) {
        const Operator w = kron(paulis[k], id_b);
        return hs_inner(r, backward_.apply(w.adjoint() * x * w, t));
      });
      e.value = (total / (d * static_cast<double>(paulis.size()))).real();
      e.n_samples = paulis.size();
      return e;
    }
    case TwirlMethod::kMonteCarlo: {
      if (n_samples < 2) throw InvalidArgument("montecarlo twirl needs at least two samples");
      const Operator x = forward_.apply(r, t);
      const auto values = kernels::map(exec, n_samples, [&](std::size_t k) {
        const Operator w = kron(haar_unitary(split_.dim_a, derive_seed(seed, k)), id_b);
        return (hs_inner(r, backward_.apply(w.adjoint() * x * w, t)) / d).real();
      });
      const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n_samples);
      double var = 0.0;
      for (double v : values) var += (v - mean) * (v - mean);
      var /= static_cast<double>(n_samples - 1);
      e.value = mean;
      e.stderr_ = std::sqrt(var / static_cast<double>(n_samples));
      e.n_samples = n_samples;
      return e;
    }
  }
  throw InvalidArgument("unknown twirl method");
}

double OpenOtoc::average_ab(double t, Exec exec) const {
  // (1/d_B^2) sum_P f(P, P^dag) = (1/d_B) sum_ab f(E_ab, E_ba) for any f
  // linear in both slots, since sum_P P_ab (P^dag)_cd = d_B delta_ad delta_bc.
  const std::size_t db = split_.dim_b;
  const Operator id_a = identity(split_.dim_a);
  auto unit = [&](std::size_t a, std::size_t b) {
    Operator e = Operator::Zero(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db));
    e(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0;
    return kron(id_a, e);
  };
  const Complex total = kernels::sum(exec, db * db, Complex(0.0), [&](std::size_t k) {
    const std::size_t a = k / db, b = k % db;
    return exact_w_average(unit(a, b), unit(b, a), t);
  });
  return (total / static_cast<double>(db)).real();
}

Complex otoc_open(const LindbladModel& model, const Operator& w, const Operator& r, const BipartiteSplit& split,
                  double t, bool fermionic_sign) {
  return OpenOtoc(model, split, fermionic_sign).value(w, r, t);
}

TwirlEstimate haar_average_w(const LindbladModel& model, const Operator& r, const BipartiteSplit& split, double t,
                             TwirlMethod method, std::size_t n_samples, std::uint64_t seed) {
  return OpenOtoc(model, split).average_w(r, t, method, n_samples, seed);
}

double average_otoc_ab(const LindbladModel& model, const BipartiteSplit& split, double t) {
  return OpenOtoc(model, split).average_ab(t);
}

Complex closed_otoc(const Operator& h, const Operator& w, const Operator& r, double t) {
  if (h.rows() != w.rows() || h.rows() != r.rows()) throw DimensionError("closed_otoc: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(0.5 * (h + h.adjoint()))};
  const CVector phases = (-kI * t * es.eigenvalues().cast<Complex>().array()).exp().matrix();
  const Operator u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  const Operator rt = u.adjoint() * r * u;
  return (rt.adjoint() * w.adjoint() * rt * w).trace() / static_cast<double>(h.rows());
}

// ---------------------------------------------------------------------------

Operator NoiseEnsemble::draw(std::size_t d, std::uint64_t index) const {
  if (!(strength >= 0.0)) throw InvalidArgument("NoiseEnsemble: strength must be >= 0");
  return random_hermitian(d, strength, derive_seed(seed, index));
}

NoiseAveragedLe noise_averaged_le(const LindbladModel& model_b, const NoiseEnsemble& noise, double t, Exec exec) {
  if (noise.n_samples < 2) throw InvalidArgument("noise_averaged_le: need at least two samples");
  if (!(noise.strength >= 0.0)) throw InvalidArgument("noise_averaged_le: strength must be >= 0");
  const std::size_t d = model_b.dim();
  const DoubledHamiltonian base(model_b);
  const Operator id = identity(d);
  auto propagator = [&](std::uint64_t index) {
    const Operator v = noise.draw(d, index);
    const Operator vd = kron(v, id) - kron(id, v.transpose());
    return SpectralPropagator(Operator(base.hD() + vd)).matrix(t);
  };
  struct Pair {
    double raw, normalized;
  };
  const auto pairs = kernels::map(exec, noise.n_samples, [&](std::size_t k) {
    const Operator a = propagator(2 * k);
    const Operator b = propagator(2 * k + 1);
    const double overlap = a.conjugate().cwiseProduct(b).sum().real();
    return Pair{overlap / static_cast<double>(d * d), overlap / (a.norm() * b.norm())};
  });
  auto stats = [&](auto field) {
    double mean = 0.0;
    for (const auto& p : pairs) mean += field(p);
    mean /= static_cast<double>(pairs.size());
    double var = 0.0;
    for (const auto& p : pairs) var += (field(p) - mean) * (field(p) - mean);
    var /= static_cast<double>(pairs.size() - 1);
    return std::pair{mean, std::sqrt(var / static_cast<double>(pairs.size()))};
  };
  NoiseAveragedLe out;
  std::tie(out.value, out.stderr_) = stats([](const Pair& p) { return p.raw; });
  std::tie(out.normalized, out.normalized_stderr) = stats([](const Pair& p) { return p.normalized; });
  out.n_samples = noise.n_samples;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// e^{Gt} as dense matrices, memoized per time. A time that doubles an
// earlier one is obtained by squaring.
class DenseFlowPropagator {
 public:
  explicit DenseFlowPropagator(Operator generator) : generator_(std::move(generator)) {}

  Operator apply(const Operator& r, double t) {
    const Operator& e = at(t);
    return unvec(VectorizedState(CVector(e * vec(r).entries())));
  }

 private:
  const Operator& at(double t) {
    for (const auto& [s, e] : cache_)
      if (s == t) return e;
    for (const auto& [s, e] : cache_)
      if (s != 0.0 && 2.0 * s == t) {
        Operator squared = e * e;
        cache_.emplace_back(t, std::move(squared));
        return cache_.back().second;
      }
    cache_.emplace_back(t, expm_pade(Operator(t * generator_)));
    return cache_.back().second;
  }

  Operator generator_;
  std::deque<std::pair<double, Operator>> cache_;
};

}  // namespace

std::vector<OtocRenyi> otoc_renyi_check(const LindbladModel& model, const Operator& o, const BipartiteSplit& split,
                                        std::span<const double> times) {
  require_split(model, split);
  if (!model.hermitian_jumps()) throw InvalidArgument("otoc_renyi_check: jump operators must be Hermitian");
  const int n_b = qubit_count(split.dim_b);
  if (n_b < 0) throw InvalidArgument("otoc_renyi_check: d_B must be a power of two");
  if (static_cast<std::size_t>(o.rows()) != model.dim() || !is_square(o))
    throw DimensionError("otoc_renyi_check: operator dimension differs from the model");
  Operator v = o * o.adjoint();
  const double tr = v.trace().real();
  if (!(tr > 0.0)) throw InvalidArgument("otoc_renyi_check: O O^dag has zero trace");
  v /= tr;

  // A few sample times only: dense propagators are cheaper than a full
  // eigendecomposition of each d^2 x d^2 generator.
  DenseFlowPropagator forward(flow_generator(model, OperatorFlow::kForward));
  DenseFlowPropagator backward(flow_generator(model, OperatorFlow::kBackward));
  const auto paulis = pauli_basis(n_b);
  const Operator id_a = identity(split.dim_a);

  std::vector<OtocRenyi> out;
  out.reserve(times.size());
  for (double t : times) {
    const Operator vt = forward.apply(v, t);
    OtocRenyi r;
    const Operator rho_a = partial_trace(vt, split.dim_a, split.dim_b, Keep::kA);
    r.lhs = (rho_a * rho_a).trace().real();
    Complex total = 0.0;
    for (const auto& p : paulis) {
      const Operator rb = kron(id_a, p);
      total += hs_inner(v, backward.apply(rb.adjoint() * vt * rb, t));
    }
    r.rhs = (total / static_cast<double>(split.dim_b)).real();
    out.push_back(r);
  }
  return out;
}

OtocRenyi otoc_renyi_check(const LindbladModel& model, const Operator& o, const BipartiteSplit& split, double t) {
  const double at[] = {t};
  return otoc_renyi_check(model, o, split, at).front();
}

// ---------------------------------------------------------------------------

double protocol_simulate(const LindbladModel& model, const Operator& w, const Operator& m,
                         const BipartiteSplit& split, double t, double dt) {
  require_split(model, split);
  require_support_a(w, split);
  require_support_b(m, split);
  if (!is_hermitian(m)) throw InvalidArgument("protocol_simulate: M_B must be Hermitian");
  if (dt <= 0.0) dt = suggested_rk4_step(model, 0.005);
  const std::vector<double> at{t};
  const Operator rho1 = integrate_rk4(flow_rhs(model, OperatorFlow::kForward), m, at, dt).back();
  const Operator kicked = w.adjoint() * rho1 * w;
  const Operator rho2 = integrate_rk4(flow_rhs(model, OperatorFlow::kBackward), kicked, at, dt).back();
  return (rho2 * m).trace().real();
}

// ---------------------------------------------------------------------------

namespace {

Operator chain_bath_hamiltonian(double coupling_j) {
  const auto& p = single_qubit_paulis();
  return coupling_j * (kron(p[1], p[1]) + kron(p[3], p[0]) + 0.7 * kron(p[0], p[3]) + 0.4 * kron(p[0], p[1]));
}

}  // namespace

LindbladModel chain_model_1p2(double coupling_j, double coupling, double gamma) {
  const auto& p = single_qubit_paulis();
  const Operator id4 = identity(4);
  Operator h = coupling_j * kron(p[1], id4) + coupling * kron(kron(p[3], p[1]), p[0]) +
               kron(p[0], chain_bath_hamiltonian(coupling_j));
  std::vector<Operator> jumps{embed_qubit_operator(p[3], 1, 3), embed_qubit_operator(p[3], 2, 3)};
  return LindbladModel(std::move(h), std::move(jumps), gamma);
}

LindbladModel chain_bath_model(double coupling_j, double gamma) {
  const auto& p = single_qubit_paulis();
  std::vector<Operator> jumps{embed_qubit_operator(p[3], 0, 2), embed_qubit_operator(p[3], 1, 2)};
  return LindbladModel(chain_bath_hamiltonian(coupling_j), std::move(jumps), gamma);
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman_correlation: need two equal series");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j);
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

void to_json(nlohmann::json& j, const TwirlEstimate& e) {
  j = nlohmann::json{
      {"value", e.value}, {"stderr", e.stderr_}, {"n_samples", e.n_samples}, {"method", to_string(e.method)}};
}

}  // namespace openecho
