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

#include "qrep/fock.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/SparseCore>

namespace qrep {

namespace {

using SparseOp = Eigen::SparseMatrix<Complex>;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

long product(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

std::vector<long> strides_of(const std::vector<int>& dims) {
  std::vector<long> s(dims.size());
  long acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    s[static_cast<size_t>(k)] = acc;
    acc *= dims[static_cast<size_t>(k)];
  }
  return s;
}

void check_mode(const FockSystem& sys, int mode, const char* who) {
  if (mode < 0 || mode >= sys.mode_count())
    throw std::invalid_argument(std::string(who) + ": invalid mode index");
}

// Full-space sparse operator acting as `op` on one mode.
SparseOp sparse_mode_op(const std::vector<int>& dims, int mode, const ComplexMatrix& op) {
  const auto stride = strides_of(dims);
  const long st = stride[static_cast<size_t>(mode)];
  const int dm = dims[static_cast<size_t>(mode)];
  const long n = product(dims);
  const long outer = n / (st * dm);  // index blocks left of the mode

  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<size_t>(op.cwiseAbs().count()) * static_cast<size_t>(n / dm));
  for (long lo = 0; lo < outer; ++lo)
    for (int a = 0; a < dm; ++a)
      for (int b = 0; b < dm; ++b) {
        if (op(a, b) == Complex{0.0, 0.0}) continue;
        for (long hi = 0; hi < st; ++hi) {
          const long row = lo * st * dm + a * st + hi;
          const long col = lo * st * dm + b * st + hi;
          trip.emplace_back(row, col, op(a, b));
        }
      }
  SparseOp out(n, n);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Full-space sparse operator acting as `op` on an ordered mode pair (a, b);
// op is indexed by the pair basis na*db + nb.
SparseOp sparse_pair_op(const std::vector<int>& dims, int ma, int mb,
                        const ComplexMatrix& op) {
  const auto stride = strides_of(dims);
  const long sa = stride[static_cast<size_t>(ma)];
  const long sb = stride[static_cast<size_t>(mb)];
  const int da = dims[static_cast<size_t>(ma)];
  const int db = dims[static_cast<size_t>(mb)];
  const long n = product(dims);

  // Enumerate the flat indices with both modes at level 0, then offset.
  std::vector<long> rest;
  rest.reserve(static_cast<size_t>(n / (da * db)));
  std::vector<int> idx(dims.size(), 0);
  for (long flat = 0; flat < n; ++flat) {
    long x = flat;
    bool zero_pair = true;
    for (size_t k = 0; k < dims.size(); ++k) {
      const int v = static_cast<int>(x / stride[k]);
      x %= stride[k];
      if ((static_cast<int>(k) == ma || static_cast<int>(k) == mb) && v != 0)
        zero_pair = false;
    }
    if (zero_pair) rest.push_back(flat);
  }

  std::vector<Eigen::Triplet<Complex>> trip;
  for (int arow = 0; arow < da; ++arow)
    for (int brow = 0; brow < db; ++brow)
      for (int acol = 0; acol < da; ++acol)
        for (int bcol = 0; bcol < db; ++bcol) {
          const Complex v = op(arow * db + brow, acol * db + bcol);
          if (v == Complex{0.0, 0.0}) continue;
          for (long base : rest)
            trip.emplace_back(base + arow * sa + brow * sb,
                              base + acol * sa + bcol * sb, v);
        }
  SparseOp out(n, n);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

// Pair-space beamsplitter matrix: expand (t A+ - r B+)^a (r A+ + t B+)^b |00>.
ComplexMatrix beamsplitter_pair_matrix(int da, int db, double t) {
  const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
  ComplexMatrix U = ComplexMatrix::Zero(da * db, da * db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) {
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) {
          const int A = i + j;
          const int B = (a - i) + (b - j);
          if (A >= da || B >= db) continue;  // cannot happen once modes are grown
          double amp = binomial(a, i) * binomial(b, j) * std::pow(t, i) *
                       std::pow(-r, a - i) * std::pow(r, j) * std::pow(t, b - j);
          amp *= std::sqrt(factorial(A) * factorial(B)) /
                 std::sqrt(factorial(a) * factorial(b));
          U(A * db + B, a * db + b) += amp;
        }
    }
  return U;
}

FockSystem embed_modes(const FockSystem& sys, std::vector<int> new_dims) {
  const auto& dims = sys.dims();
  if (new_dims == dims) return sys;
  const long n_new = product(new_dims);
  if (n_new > FockSystem::kMaxTotalDim)
    throw std::runtime_error("fock: system dimension would exceed the supported size");
  const auto s_old = strides_of(dims);
  const auto s_new = strides_of(new_dims);
  const long n_old = product(dims);

  std::vector<long> map(static_cast<size_t>(n_old));
  for (long flat = 0; flat < n_old; ++flat) {
    long x = flat, y = 0;
    for (size_t k = 0; k < dims.size(); ++k) {
      const long v = x / s_old[k];
      x %= s_old[k];
      y += v * s_new[k];
    }
    map[static_cast<size_t>(flat)] = y;
  }
  ComplexMatrix out = ComplexMatrix::Zero(n_new, n_new);
  for (long i = 0; i < n_old; ++i)
    for (long j = 0; j < n_old; ++j)
      out(map[static_cast<size_t>(i)], map[static_cast<size_t>(j)]) = sys.rho()(i, j);
  return FockSystem(std::move(new_dims), sys.labels(), std::move(out));
}

// Registered-count distribution P(t | tau) for a PNR detector with loss and
// at most one dark count per window.
Eigen::MatrixXd pnr_outcome_table(int levels, double eta_det, double p_dark) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(levels + 1, levels);
  for (int tau = 0; tau < levels; ++tau)
    for (int k = 0; k <= tau; ++k) {
      const double pk = binomial(tau, k) * std::pow(eta_det, k) *
                        std::pow(1.0 - eta_det, tau - k);
      P(k, tau) += pk * (1.0 - p_dark);
      P(k + 1, tau) += pk * p_dark;
    }
  return P;
}

}  // namespace

void ErrorModelParams::validate() const {
  for (double v : {eta_chL, eta_chR, eta_coupling, eta_detector, p_dark})
    if (v < 0.0 || v > 1.0)
      throw std::invalid_argument("ErrorModelParams: all parameters must lie in [0, 1]");
}

FockSystem::FockSystem(std::vector<int> dims, std::vector<std::string> labels,
                       ComplexMatrix rho)
    : dims_(std::move(dims)), labels_(std::move(labels)), rho_(std::move(rho)) {
  if (labels_.size() != dims_.size())
    throw std::invalid_argument("FockSystem: one label per mode required");
  for (int d : dims_)
    if (d < 1 || d > kMaxModeDim)
      throw std::invalid_argument("FockSystem: mode dimension out of range");
  if (product(dims_) != rho_.rows() || rho_.rows() != rho_.cols())
    throw std::invalid_argument("FockSystem: state dimension mismatch");
}

DensityMatrix FockSystem::to_density_matrix() const {
  return DensityMatrix(rho_, dims_, false);
}

FockSystem prepare_tmsv(const TmsvParams& p, int cutoff) {
  p.validate();
  if (cutoff < 0) throw std::invalid_argument("prepare_tmsv: cutoff must be >= 0");
  const int d = cutoff + 1;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<long>(d) * d);
  for (int n = 0; n <= cutoff; ++n) v(static_cast<long>(n) * d + n) = tmsv_amplitude(n, p);
  ComplexMatrix rho = v * v.adjoint();
  return FockSystem({d, d}, {"tmsv_L", "tmsv_R"}, std::move(rho));
}

FockSystem prepare_qubit_emitter(double theta) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = std::cos(theta);
  v(3) = std::sin(theta);
  ComplexMatrix rho = v * v.adjoint();
  return FockSystem({2, 2}, {"qubit", "fiber"}, std::move(rho));
}

FockSystem tensor(const FockSystem& a, const FockSystem& b) {
  const long na = a.dim(), nb = b.dim();
  if (na * nb > FockSystem::kMaxTotalDim)
    throw std::runtime_error("fock tensor: system dimension would exceed the supported size");
  ComplexMatrix out(na * nb, na * nb);
  for (long i = 0; i < na; ++i)
    for (long j = 0; j < na; ++j)
      out.block(i * nb, j * nb, nb, nb) = a.rho()(i, j) * b.rho();
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return FockSystem(std::move(dims), std::move(labels), std::move(out));
}

void apply_beamsplitter(FockSystem& sys, int mode_a, int mode_b, double transmission_amp) {
  check_mode(sys, mode_a, "apply_beamsplitter");
  check_mode(sys, mode_b, "apply_beamsplitter");
  if (mode_a == mode_b)
    throw std::invalid_argument("apply_beamsplitter: modes must be distinct");
  if (transmission_amp < 0.0 || transmission_amp > 1.0)
    throw std::invalid_argument("apply_beamsplitter: transmission amplitude in [0, 1]");

  // Grow both modes to hold the full reachable photon total.
  const int total = (sys.dims()[static_cast<size_t>(mode_a)] - 1) +
                    (sys.dims()[static_cast<size_t>(mode_b)] - 1);
  if (total + 1 > FockSystem::kMaxModeDim)
    throw std::runtime_error(
        "apply_beamsplitter: photon total exceeds the mode capacity (cutoff too large)");
  std::vector<int> grown = sys.dims();
  grown[static_cast<size_t>(mode_a)] = total + 1;
  grown[static_cast<size_t>(mode_b)] = total + 1;
  sys = embed_modes(sys, std::move(grown));

  const int da = sys.dims()[static_cast<size_t>(mode_a)];
  const int db = sys.dims()[static_cast<size_t>(mode_b)];
  const ComplexMatrix U = beamsplitter_pair_matrix(da, db, transmission_amp);
  const SparseOp S = sparse_pair_op(sys.dims(), mode_a, mode_b, U);

  const double tr_before = sys.trace();
  ComplexMatrix tmp = S * sys.rho();
  sys.rho() = ComplexMatrix();  // release before the second product
  ComplexMatrix out = tmp * S.adjoint();
  tmp.resize(0, 0);
  sys.rho() = std::move(out);
  if (std::abs(sys.trace() - tr_before) > 1e-9)
    throw std::runtime_error("apply_beamsplitter: norm drift exceeds tolerance");
}

void apply_loss(FockSystem& sys, int mode, double eta) {
  check_mode(sys, mode, "apply_loss");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("apply_loss: eta in [0, 1]");
  if (eta == 1.0) return;
  const int dm = sys.dims()[static_cast<size_t>(mode)];

  ComplexMatrix acc = ComplexMatrix::Zero(sys.dim(), sys.dim());
  for (int k = 0; k < dm; ++k) {
    ComplexMatrix kraus = ComplexMatrix::Zero(dm, dm);
    for (int n = k; n < dm; ++n)
      kraus(n - k, n) =
          std::sqrt(binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
    const SparseOp S = sparse_mode_op(sys.dims(), mode, kraus);
    acc += S * sys.rho() * S.adjoint();
  }
  sys.rho() = std::move(acc);
}

FockSystem measure_pnr(const FockSystem& sys, int mode, int outcome,
                       const ErrorModelParams& err) {
  check_mode(sys, mode, "measure_pnr");
  err.validate();
  const int dm = sys.dims()[static_cast<size_t>(mode)];
  if (outcome < 0 || outcome > dm)
    throw std::invalid_argument("measure_pnr: outcome exceeds the mode cutoff");

  const Eigen::MatrixXd P = pnr_outcome_table(dm, err.eta_detector, err.p_dark);
  const auto stride = strides_of(sys.dims());
  const long st = stride[static_cast<size_t>(mode)];
  const long n = sys.dim();
  const long outer = n / (st * dm);

  // The detector record decoheres the measured mode: keep only tau-diagonal
  // blocks, each weighted by P(outcome | tau).
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int tau = 0; tau < dm; ++tau) {
    const double w = P(outcome, tau);
    if (w == 0.0) continue;
    for (long lo = 0; lo < outer; ++lo)
      for (long hi = 0; hi < st; ++hi) {
        const long row = lo * st * dm + tau * st + hi;
        for (long lo2 = 0; lo2 < outer; ++lo2)
          for (long hi2 = 0; hi2 < st; ++hi2) {
            const long col = lo2 * st * dm + tau * st + hi2;
            out(row, col) = w * sys.rho()(row, col);
          }
      }
  }
  return FockSystem(sys.dims(), sys.labels(), std::move(out));
}

void trace_out_mode(FockSystem& sys, int mode) {
  check_mode(sys, mode, "trace_out_mode");
  const auto stride = strides_of(sys.dims());
  const long st = stride[static_cast<size_t>(mode)];
  const int dm = sys.dims()[static_cast<size_t>(mode)];
  const long n = sys.dim();
  const long n_out = n / dm;

  auto out_to_in = [&](long o) {
    const long hi = o % st;
    const long lo = o / st;
    return lo * st * dm + hi;
  };

  ComplexMatrix out = ComplexMatrix::Zero(n_out, n_out);
  for (long r = 0; r < n_out; ++r) {
    const long rb = out_to_in(r);
    for (long c = 0; c < n_out; ++c) {
      const long cb = out_to_in(c);
      Complex acc{0.0, 0.0};
      for (int tau = 0; tau < dm; ++tau) acc += sys.rho()(rb + tau * st, cb + tau * st);
      out(r, c) = acc;
    }
  }
  std::vector<int> dims = sys.dims();
  dims.erase(dims.begin() + mode);
  std::vector<std::string> labels = sys.labels();
  labels.erase(labels.begin() + mode);
  sys = FockSystem(std::move(dims), std::move(labels), std::move(out));
}

void apply_qubit_phase_flip(FockSystem& sys, int mode) {
  check_mode(sys, mode, "apply_qubit_phase_flip");
  if (sys.dims()[static_cast<size_t>(mode)] != 2)
    throw std::invalid_argument("apply_qubit_phase_flip: mode must be 2-level");
  ComplexMatrix z(2, 2);
  z << 1, 0, 0, -1;
  const SparseOp S = sparse_mode_op(sys.dims(), mode, z);
  sys.rho() = S * sys.rho() * S.adjoint();
}

DensityMatrix simulate_segment(const RegisterScenario& sc, const ErrorModelParams& err,
                               int cutoff) {
  sc.validate();
  err.validate();
  if (sc.qubits_per_register != 1)
    throw std::invalid_argument("simulate_segment: explicit optics path covers N = 1 only");
  if (cutoff < 1) throw std::invalid_argument("simulate_segment: cutoff must be >= 1");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  FockSystem light = prepare_tmsv(sc.tmsv, cutoff);  // tmsv_L, tmsv_R
  apply_loss(light, 0, sc.eta_L * err.eta_chL);
  apply_loss(light, 1, sc.eta_R * err.eta_chR);

  FockSystem left = prepare_qubit_emitter(sc.theta_L);  // qubit, fiber
  apply_loss(left, 1, err.eta_coupling);

  FockSystem sys = tensor(left, light);  // 0:qL 1:fL 2:L 3:R
  apply_beamsplitter(sys, 1, 2, inv_sqrt2);  // fL -> detector T, L -> detector B

  ComplexMatrix total = ComplexMatrix::Zero(4, 4);
  for (const auto& [t_left, b_left] : {std::pair{1, 0}, std::pair{0, 1}}) {
    FockSystem s1 = measure_pnr(sys, 1, t_left, err);
    s1 = measure_pnr(s1, 2, b_left, err);
    trace_out_mode(s1, 2);
    trace_out_mode(s1, 1);  // -> 0:qL 1:R
    if (b_left == 1) apply_qubit_phase_flip(s1, 0);  // bottom click: corrected pi shift

    FockSystem right = prepare_qubit_emitter(sc.theta_R);  // qR, fR
    apply_loss(right, 1, err.eta_coupling);
    FockSystem s2 = tensor(s1, right);  // 0:qL 1:R 2:qR 3:fR
    apply_beamsplitter(s2, 3, 1, inv_sqrt2);  // fR -> T, R -> B

    for (const auto& [t_right, b_right] : {std::pair{1, 0}, std::pair{0, 1}}) {
      FockSystem s3 = measure_pnr(s2, 3, t_right, err);
      s3 = measure_pnr(s3, 1, b_right, err);
      trace_out_mode(s3, 3);
      trace_out_mode(s3, 1);  // -> 0:qL 1:qR
      if (b_right == 1) apply_qubit_phase_flip(s3, 1);
      total += s3.rho();
    }
  }
  // Discard sub-tolerance Hermiticity noise accumulated over the pipeline.
  total = 0.5 * (total + total.adjoint().eval());
  return DensityMatrix(std::move(total), {2, 2}, false);
}

double lossy_tmsv_negativity(const TmsvParams& p, double eta, int cutoff) {
  FockSystem sys = prepare_tmsv(p, cutoff);
  apply_loss(sys, 1, eta);
  DensityMatrix rho = sys.to_density_matrix();
  const double tr = rho.trace();
  DensityMatrix unit(rho.matrix() / tr, rho.dims(), true);
  const DensityMatrix pt = partial_transpose(unit, 0);
  double neg = 0.0;
  for (double ev : hermitian_eigenvalues(pt.matrix()))
    if (ev < 0.0) neg -= ev;
  return neg;
}

}  // namespace qrep
