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

#include "openecho/operator_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "openecho/rng.hpp"

namespace openecho {

namespace {

std::size_t exact_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

double one_norm(const Operator& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

VectorizedState::VectorizedState(CVector entries) : entries_(std::move(entries)) {
  const auto n = static_cast<std::size_t>(entries_.size());
  dim_ = exact_sqrt(n);
  if (n == 0 || dim_ * dim_ != n)
    throw DimensionError("vectorized state length " + std::to_string(n) + " is not a perfect square");
}

Operator identity(std::size_t d) { return Operator::Identity(d, d); }

Operator kron(const Operator& a, const Operator& b) {
  const auto ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  Operator out(ra * rb, ca * cb);
  for (Eigen::Index m = 0; m < ra; ++m)
    for (Eigen::Index i = 0; i < ca; ++i)
      out.block(m * rb, i * cb, rb, cb) = a(m, i) * b;
  return out;
}

Operator kron_all(const std::vector<Operator>& factors) {
  Operator out = identity(1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

bool is_square(const Operator& a) { return a.rows() == a.cols() && a.rows() > 0; }

bool is_hermitian(const Operator& a, double tol) {
  if (!is_square(a)) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Operator& a, double tol) {
  if (!is_square(a)) return false;
  const Operator prod = a.adjoint() * a;
  return (prod - identity(static_cast<std::size_t>(a.rows()))).cwiseAbs().maxCoeff() <= tol;
}

RVector hermitian_eigenvalues(const Operator& a) {
  if (!is_square(a)) throw DimensionError("hermitian_eigenvalues: matrix is not square");
  const Eigen::MatrixXcd sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  return solver.eigenvalues();
}

bool is_psd(const Operator& a, double tol) {
  if (!is_hermitian(a, tol)) return false;
  return hermitian_eigenvalues(a).minCoeff() >= -tol;
}

Complex hs_inner(const Operator& a, const Operator& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shape mismatch");
  return (a.conjugate().cwiseProduct(b)).sum();
}

VectorizedState vec(const Operator& rho) {
  if (!is_square(rho)) throw DimensionError("vec: operator is not square");
  // Row-major storage is already the m*d + n ordering.
  return VectorizedState(Eigen::Map<const CVector>(rho.data(), rho.size()));
}

Operator unvec(const VectorizedState& psi) {
  const auto d = static_cast<Eigen::Index>(psi.dim());
  return Eigen::Map<const Operator>(psi.entries().data(), d, d);
}

VectorizedState vec_identity(std::size_t d) { return vec(identity(d)); }

// ---------------------------------------------------------------------------

Eigensystem eigensystem(const Operator& a) {
  if (!is_square(a)) throw DimensionError("eigensystem: matrix is not square");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(a), true);
  if (solver.info() != Eigen::Success) throw NumericalError("complex eigensolver failed");
  Eigensystem es;
  es.eigenvalues = solver.eigenvalues();
  es.vectors = solver.eigenvectors();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(es.vectors);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  es.condition = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
  if (std::isfinite(es.condition)) es.inverse = Eigen::PartialPivLU<Eigen::MatrixXcd>(es.vectors).inverse();
  return es;
}

Operator expm_pade(const Operator& a) {
  if (!is_square(a)) throw DimensionError("expm_pade: matrix is not square");
  if (!a.allFinite()) throw InvalidArgument("expm_pade: non-finite entries");
  // Higham (2005) degree-13 coefficients and scaling threshold.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const auto n = a.rows();
  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
  const Eigen::MatrixXcd as = Eigen::MatrixXcd(a) / std::ldexp(1.0, squarings);

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd a2 = as * as;
  const Eigen::MatrixXcd a4 = a2 * a2;
  const Eigen::MatrixXcd a6 = a4 * a2;
  const Eigen::MatrixXcd u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const Eigen::MatrixXcd u = as * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const Eigen::MatrixXcd v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const Eigen::MatrixXcd v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Eigen::MatrixXcd r = Eigen::PartialPivLU<Eigen::MatrixXcd>(v - u).solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

Operator propagator_eigen(const Operator& a, double t) {
  const Eigensystem es = eigensystem(a);
  if (!std::isfinite(es.condition)) throw NumericalError("propagator_eigen: singular eigenvector matrix");
  const CVector phases = (-kI * t * es.eigenvalues.array()).exp().matrix();
  return es.vectors * phases.asDiagonal() * es.inverse;
}

Operator propagator_pade(const Operator& a, double t) { return expm_pade(Operator(-kI * t * a)); }

Propagator mat_func_propagator(const Operator& a, double t, double condition_threshold) {
  if (!a.allFinite()) throw InvalidArgument("mat_func_propagator: non-finite entries");
  Propagator p;
  if (t == 0.0) {
    p.value = identity(static_cast<std::size_t>(a.rows()));
    return p;
  }
  const Eigensystem es = eigensystem(a);
  p.condition = es.condition;
  if (!(es.condition <= condition_threshold)) {
    p.ill_conditioned = true;
    p.path = PropagatorPath::kPade;
    p.value = propagator_pade(a, t);
    return p;
  }
  const CVector phases = (-kI * t * es.eigenvalues.array()).exp().matrix();
  p.value = es.vectors * phases.asDiagonal() * es.inverse;
  return p;
}

// ---------------------------------------------------------------------------

Operator partial_trace(const Operator& o, std::size_t dim_a, std::size_t dim_b, Keep keep) {
  if (!is_square(o) || static_cast<std::size_t>(o.rows()) != dim_a * dim_b)
    throw DimensionError("partial_trace: operator dimension " + std::to_string(o.rows()) +
                         " != " + std::to_string(dim_a) + "*" + std::to_string(dim_b));
  const auto da = static_cast<Eigen::Index>(dim_a), db = static_cast<Eigen::Index>(dim_b);
  if (keep == Keep::kA) {
    Operator out = Operator::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j) out(i, j) = o.block(i * db, j * db, db, db).trace();
    return out;
  }
  Operator out = Operator::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) out += o.block(i * db, i * db, db, db);
  return out;
}

// ---------------------------------------------------------------------------

Operator haar_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw InvalidArgument("haar_unitary: dimension must be positive");
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= mag > 0.0 ? rjj / mag : Complex(1.0);
  }
  return q;
}

Operator haar_unitary(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(d, rng);
}

const std::vector<Operator>& single_qubit_paulis() {
  static const std::vector<Operator> paulis = [] {
    Operator i2 = identity(2);
    Operator x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, -kI, kI, 0;
    z << 1, 0, 0, -1;
    return std::vector<Operator>{i2, x, y, z};
  }();
  return paulis;
}

std::vector<Operator> pauli_basis(int n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("pauli_basis: need at least one qubit");
  const auto& p = single_qubit_paulis();
  std::vector<Operator> out{identity(1)};
  for (int q = 0; q < n_qubits; ++q) {
    std::vector<Operator> next;
    next.reserve(out.size() * 4);
    for (const auto& s : out)
      for (const auto& single : p) next.push_back(kron(s, single));
    out = std::move(next);
  }
  return out;
}

std::string pauli_label(std::size_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = n_qubits - 1; q >= 0; --q) {
    s[static_cast<std::size_t>(q)] = "IXYZ"[index % 4];
    index /= 4;
  }
  return s;
}

int qubit_count(std::size_t d) {
  if (d == 0 || (d & (d - 1)) != 0) return -1;
  int n = 0;
  while ((std::size_t{1} << n) < d) ++n;
  return n;
}

}  // namespace openecho
