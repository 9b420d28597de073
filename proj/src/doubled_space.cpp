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

#include "openecho/doubled_space.hpp"

#include <limits>
#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace openecho {

namespace {

void require_sorted_nonnegative(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw InvalidArgument("times must be finite and >= 0");
    if (i > 0 && times[i] < times[i - 1]) throw InvalidArgument("times must be sorted");
  }
}

}  // namespace

SpectralPropagator::SpectralPropagator(Operator generator, double condition_threshold)
    : generator_(std::move(generator)) {
  if (!is_square(generator_)) throw DimensionError("SpectralPropagator: generator is not square");
  if (!generator_.allFinite()) throw InvalidArgument("SpectralPropagator: non-finite generator");
  Eigensystem es = eigensystem(generator_);
  condition_ = es.condition;
  // Eigenvalues below the solver's resolution are exact stationary modes;
  // left unsnapped, their roundoff grows as e^{|Im lambda| t} at long times.
  const double resolution =
      static_cast<double>(generator_.rows()) * std::numeric_limits<double>::epsilon() * generator_.cwiseAbs().colwise().sum().maxCoeff();
  for (auto& lambda : es.eigenvalues)
    if (std::abs(lambda) <= resolution) lambda = Complex(0.0, 0.0);
  if (es.condition <= condition_threshold) cache_ = std::move(es);
}

CVector SpectralPropagator::apply(const CVector& psi0, double t) const {
  if (psi0.size() != generator_.rows()) throw DimensionError("SpectralPropagator: state dimension mismatch");
  if (t == 0.0) return psi0;
  if (!cache_) return propagator_pade(generator_, t) * psi0;
  const CVector coeff = cache_->inverse * psi0;
  const CVector phases = (-kI * t * cache_->eigenvalues.array()).exp().matrix();
  return cache_->vectors * phases.cwiseProduct(coeff);
}

Operator SpectralPropagator::matrix(double t) const {
  if (t == 0.0) return identity(static_cast<std::size_t>(generator_.rows()));
  if (!cache_) return propagator_pade(generator_, t);
  const CVector phases = (-kI * t * cache_->eigenvalues.array()).exp().matrix();
  return cache_->vectors * phases.asDiagonal() * cache_->inverse;
}

std::vector<CVector> SpectralPropagator::apply_on_grid(const CVector& psi0, std::span<const double> times,
                                                       Exec exec) const {
  if (psi0.size() != generator_.rows()) throw DimensionError("SpectralPropagator: state dimension mismatch");
  require_sorted_nonnegative(times);
  if (!cache_) {
    return kernels::map(exec, times.size(), [&](std::size_t k) -> CVector {
      return times[k] == 0.0 ? psi0 : CVector(propagator_pade(generator_, times[k]) * psi0);
    });
  }
  const CVector coeff = cache_->inverse * psi0;
  return kernels::map(exec, times.size(), [&](std::size_t k) -> CVector {
    if (times[k] == 0.0) return psi0;
    const CVector phases = (-kI * times[k] * cache_->eigenvalues.array()).exp().matrix();
    return cache_->vectors * phases.cwiseProduct(coeff);
  });
}

// ---------------------------------------------------------------------------

namespace {

Operator assemble_hs(const Operator& h) {
  const auto d = static_cast<std::size_t>(h.rows());
  return kron(h, identity(d)) - kron(identity(d), h.transpose());
}

Operator assemble_hd(const LindbladModel& model) {
  const std::size_t d = model.dim();
  const Operator id = identity(d);
  Operator hd = Operator::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
  for (const auto& l : model.jumps()) {
    const Operator ldl = l.adjoint() * l;
    hd += -2.0 * kron(l, l.conjugate()) + kron(ldl, id) + kron(id, ldl.conjugate());
  }
  return model.gamma() * hd;
}

}  // namespace

DoubledHamiltonian::DoubledHamiltonian(const LindbladModel& model, const Tolerances& tol)
    : hs_(assemble_hs(model.hamiltonian())),
      hd_(assemble_hd(model)),
      propagator_(Operator(hs_ - kI * hd_), tol.condition_threshold),
      dim_(model.dim()),
      gamma_(model.gamma()),
      hermitian_jumps_(model.hermitian_jumps(tol.structural)) {}

DoubledHamiltonian build_doubled(const LindbladModel& model) { return DoubledHamiltonian(model); }

std::vector<VectorizedState> propagate(const DoubledHamiltonian& hd, const VectorizedState& psi0,
                                       std::span<const double> times, Exec exec) {
  if (psi0.dim2() != hd.dim2()) throw DimensionError("propagate: state and generator dimensions differ");
  auto raw = hd.propagator().apply_on_grid(psi0.entries(), times, exec);
  std::vector<VectorizedState> out;
  out.reserve(raw.size());
  for (auto& v : raw) out.emplace_back(std::move(v));
  return out;
}

StateInvariants check_state_invariants(std::span<const VectorizedState> states, Complex trace0, Exec exec) {
  struct Sample {
    double trace_dev = 0.0, herm_dev = 0.0, min_eig = 0.0;
  };
  const auto samples = kernels::map(exec, states.size(), [&](std::size_t k) {
    const Operator rho = unvec(states[k]);
    Sample s;
    s.trace_dev = std::abs(rho.trace() - trace0);
    s.herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    s.min_eig = hermitian_eigenvalues(rho).minCoeff();
    return s;
  });
  StateInvariants inv;
  inv.min_eigenvalue = samples.empty() ? 0.0 : samples.front().min_eig;
  for (const auto& s : samples) {
    inv.max_trace_deviation = std::max(inv.max_trace_deviation, s.trace_dev);
    inv.max_hermiticity_deviation = std::max(inv.max_hermiticity_deviation, s.herm_dev);
    inv.min_eigenvalue = std::min(inv.min_eigenvalue, s.min_eig);
  }
  return inv;
}

// ---------------------------------------------------------------------------

MasterEquationRhs::MasterEquationRhs(const LindbladModel& model) : gamma_(model.gamma()) {
  const std::size_t d = model.dim();
  effective_ = -kI * model.hamiltonian();
  Operator decay = Operator::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  if (gamma_ != 0.0) {
    for (const auto& l : model.jumps()) {
      decay += l.adjoint() * l;
      jumps_.push_back(l);
      jumps_dag_.push_back(l.adjoint());
    }
  }
  effective_ -= gamma_ * decay;
}

Operator MasterEquationRhs::operator()(const Operator& rho) const {
  // -i[H, rho] - gamma {sum L^dag L, rho} = A rho + rho A^dag with A = -iH - gamma sum L^dag L.
  Operator out = effective_ * rho;
  out += rho * effective_.adjoint();
  for (std::size_t m = 0; m < jumps_.size(); ++m) out += (2.0 * gamma_) * (jumps_[m] * rho * jumps_dag_[m]);
  return out;
}

Operator lindblad_rhs(const LindbladModel& model, const Operator& rho) { return MasterEquationRhs(model)(rho); }

std::vector<Operator> integrate_rk4(const MatrixRhs& rhs, const Operator& x0, std::span<const double> times,
                                    double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("integrate_rk4: dt must be positive");
  require_sorted_nonnegative(times);
  std::vector<Operator> out;
  out.reserve(times.size());
  Operator x = x0;
  double now = 0.0;
  for (double target : times) {
    const double span = target - now;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / dt - 1e-12));
      const double h = span / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) {
        const Operator k1 = rhs(x);
        const Operator k2 = rhs(x + 0.5 * h * k1);
        const Operator k3 = rhs(x + 0.5 * h * k2);
        const Operator k4 = rhs(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      now = target;
    }
    out.push_back(x);
  }
  return out;
}

std::vector<Operator> rk4_oracle(const LindbladModel& model, const Operator& rho0, std::span<const double> times,
                                 double dt, StepCheck check) {
  if (static_cast<std::size_t>(rho0.rows()) != model.dim() || !is_square(rho0))
    throw DimensionError("rk4_oracle: initial state dimension differs from the model");
  const MasterEquationRhs eval(model);
  const MatrixRhs rhs = [&eval](const Operator& rho) { return eval(rho); };
  auto coarse = integrate_rk4(rhs, rho0, times, dt);
  if (check == StepCheck::kValidate) {
    const auto fine = integrate_rk4(rhs, rho0, times, 0.5 * dt);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
      worst = std::max(worst, (coarse[k] - fine[k]).cwiseAbs().maxCoeff());
    if (worst > kTolerances.invariant)
      throw NumericalError("rk4_oracle: step-size validation failed, halving dt moved the result by " +
                           std::to_string(worst));
  }
  return coarse;
}

double suggested_rk4_step(const LindbladModel& model, double fraction) {
  auto spectral_norm = [](const Operator& a) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd{Eigen::MatrixXcd(a)};
    return svd.singularValues()(0);
  };
  double bound = 2.0 * spectral_norm(model.hamiltonian());
  for (const auto& l : model.jumps()) {
    const double n = spectral_norm(l);
    bound += model.gamma() * 4.0 * n * n;
  }
  if (bound == 0.0) return 1.0;
  return fraction / bound;
}

}  // namespace openecho
