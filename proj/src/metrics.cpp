// Copyright 2026 The qrep Authors
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

#include "qrep/metrics.hpp"

#include <cmath>

namespace qrep {

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix kron2(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& op) {
  return (rho.matrix() * op).trace().real();
}

void require_normalized_2q(const DensityMatrix& rho, const char* who) {
  if (rho.dims() != std::vector<int>{2, 2})
    throw std::invalid_argument(std::string(who) + ": state must have dims (2,2)");
  if (std::abs(rho.trace() - 1.0) > kTraceTol)
    throw std::invalid_argument(std::string(who) + ": state must be normalized");
}

// Projectors of sigma_z or sigma_x, outcome a in {0,1} (+1 eigenstate first).
ComplexMatrix basis_projector(PauliBasis b, int a) {
  ComplexMatrix m(2, 2);
  if (b == PauliBasis::Z) {
    m << (a == 0 ? 1 : 0), 0, 0, (a == 0 ? 0 : 1);
  } else {
    const double s = a == 0 ? 0.5 : -0.5;
    m << 0.5, s, s, 0.5;
  }
  return m;
}

}  // namespace

double negativity(const DensityMatrix& rho, int split) {
  if (rho.dims().size() != 2)
    throw std::invalid_argument("negativity: state must be bipartite");
  if (std::abs(rho.trace() - 1.0) > kTraceTol)
    throw std::invalid_argument("negativity: state must be normalized");
  const DensityMatrix pt = partial_transpose(rho, split);
  double neg = 0.0;
  for (double ev : hermitian_eigenvalues(pt.matrix()))
    if (ev < 0.0) neg -= ev;
  return neg;
}

double chsh_value(const DensityMatrix& rho) {
  require_normalized_2q(rho, "chsh_value");
  const double sxx = expectation(rho, kron2(pauli_x(), pauli_x()));
  const double szz = expectation(rho, kron2(pauli_z(), pauli_z()));
  return std::sqrt(2.0) * (sxx + szz);
}

double qber(const DensityMatrix& rho) {
  require_normalized_2q(rho, "qber");
  return (1.0 - expectation(rho, kron2(pauli_x(), pauli_x()))) / 2.0;
}

double mutual_information(const MeasurementRecord& rec) {
  const auto& P = rec.joint_probs;
  if (P.rows() < 1 || P.cols() < 1 || P.minCoeff() < -1e-12 ||
      std::abs(P.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("mutual_information: invalid probability table");
  const Eigen::VectorXd pa = P.rowwise().sum();
  const Eigen::VectorXd pb = P.colwise().sum();
  double info = 0.0;
  for (int a = 0; a < P.rows(); ++a)
    for (int b = 0; b < P.cols(); ++b)
      if (P(a, b) > 0.0) info += P(a, b) * std::log2(P(a, b) / (pa(a) * pb(b)));
  return info;
}

double holevo_bound(const DensityMatrix& rho_AB, PauliBasis alice_basis) {
  require_normalized_2q(rho_AB, "holevo_bound");
  const double s_ab = von_neumann_entropy(rho_AB);
  double cond = 0.0;
  for (int a = 0; a < 2; ++a) {
    const ComplexMatrix proj = kron2(basis_projector(alice_basis, a),
                                     ComplexMatrix::Identity(2, 2));
    const ComplexMatrix branch = proj * rho_AB.matrix() * proj;
    const double pa = branch.trace().real();
    if (pa <= 1e-14) continue;  // zero-probability branch carries no weight
    ComplexMatrix cm = branch / pa;
    // Bob's conditional state: trace out Alice.
    DensityMatrix rho_b = partial_trace(DensityMatrix(std::move(cm), {2, 2}, true), {1});
    cond += pa * von_neumann_entropy(rho_b);
  }
  const double chi = s_ab - cond;
  if (chi < -1e-8)
    throw std::runtime_error("holevo_bound: chi significantly negative (broken state?)");
  return chi > 0.0 ? chi : 0.0;  // clamp numerical noise in [-1e-10, 0)
}

namespace {

double basis_mutual_information(const DensityMatrix& rho, PauliBasis basis,
                                const char* label) {
  Eigen::MatrixXd P(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const ComplexMatrix proj =
          kron2(basis_projector(basis, a), basis_projector(basis, b));
      P(a, b) = std::max(expectation(rho, proj), 0.0);
    }
  P /= P.sum();
  return mutual_information(MeasurementRecord{P, label});
}

}  // namespace

KeyRateResult devetak_winter_key(const DensityMatrix& rho) {
  require_normalized_2q(rho, "devetak_winter_key");
  KeyRateResult out;
  out.mi_z = basis_mutual_information(rho, PauliBasis::Z, "zz");
  out.mi_x = basis_mutual_information(rho, PauliBasis::X, "xx");
  out.holevo_z = holevo_bound(rho, PauliBasis::Z);
  out.holevo_x = holevo_bound(rho, PauliBasis::X);
  out.key_z = out.reconciliation_beta * out.mi_z - out.holevo_z;
  out.key_x = out.reconciliation_beta * out.mi_x - out.holevo_x;
  out.mutual_info_bits = 0.5 * (out.mi_z + out.mi_x);
  out.holevo_bits = 0.5 * (out.holevo_z + out.holevo_x);
  out.key_bits_per_success = 0.5 * (out.key_z + out.key_x);
  return out;
}

BellTestResult bell_test(const DensityMatrix& rho) {
  return BellTestResult{chsh_value(rho), qber(rho)};
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double di_key_rate(double Q, double S) {
  if (S <= 2.0) return 0.0;
  const double arg = (1.0 + std::sqrt((S / 2.0) * (S / 2.0) - 1.0)) / 2.0;
  const double r = 1.0 - binary_entropy(Q) - binary_entropy(arg);
  return std::clamp(r, 0.0, 1.0);
}

double plob_bound(double eta_total) {
  if (eta_total <= 0.0 || eta_total >= 1.0)
    throw std::invalid_argument("plob_bound: eta_total must lie in (0, 1)");
  return -std::log2(1.0 - eta_total);
}

}  // namespace qrep
