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

#include "qrep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrep {

namespace {

long long dims_product(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("subsystem dimension must be positive");
    p *= d;
  }
  return p;
}

double max_antihermitian_part(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix matrix, std::vector<int> dims, bool normalized)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), normalized_(normalized) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("density matrix must be square");
  if (dims_product(dims_) != matrix_.rows())
    throw std::invalid_argument("product of dims must equal matrix dimension");
  if (matrix_.size() > 0 && max_antihermitian_part(matrix_) > kHermTol)
    throw std::invalid_argument("density matrix is not Hermitian within 1e-12");
  const double tr = trace();
  if (normalized_) {
    if (std::abs(tr - 1.0) > kTraceTol)
      throw std::invalid_argument("normalized density matrix must have unit trace");
  } else {
    // Unnormalized states carry a success probability as their trace.
    // trace 0 is admitted (impossible-event branch).
    if (tr < -kTraceTol || tr > 1.0 + kTraceTol)
      throw std::invalid_argument("unnormalized density matrix trace must lie in [0, 1]");
  }
}

DensityMatrix DensityMatrix::normalized_copy() const {
  const double tr = trace();
  if (tr < 1e-300) throw std::runtime_error("cannot normalize a (near) zero-trace state");
  return DensityMatrix(matrix_ / tr, dims_, true);
}

void DensityMatrix::validate_psd() const {
  const auto evs = hermitian_eigenvalues(matrix_);
  if (!evs.empty() && evs.front() < -kPsdTol)
    throw std::runtime_error("density matrix has an eigenvalue below -1e-10");
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const int ra = a.dim(), rb = b.dim();
  ComplexMatrix out(static_cast<long>(ra) * rb, static_cast<long>(ra) * rb);
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < ra; ++j)
      out.block(static_cast<long>(i) * rb, static_cast<long>(j) * rb, rb, rb) =
          a.matrix()(i, j) * b.matrix();
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix(std::move(out), std::move(dims),
                       a.normalized() && b.normalized());
}

namespace {

// Mixed-radix index helpers for subsystem bookkeeping.
struct IndexSplit {
  std::vector<long> stride;  // stride of each subsystem in the flat index
  explicit IndexSplit(const std::vector<int>& dims) : stride(dims.size()) {
    long s = 1;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      stride[static_cast<size_t>(k)] = s;
      s *= dims[static_cast<size_t>(k)];
    }
  }
};

}  // namespace

DensityMatrix partial_transpose(const DensityMatrix& rho, int subsystem) {
  const auto& dims = rho.dims();
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
    throw std::invalid_argument("partial_transpose: invalid subsystem index");
  const IndexSplit ix(dims);
  const long stride = ix.stride[static_cast<size_t>(subsystem)];
  const int dsub = dims[static_cast<size_t>(subsystem)];
  const long n = rho.dim();

  ComplexMatrix out(n, n);
  for (long r = 0; r < n; ++r) {
    const long rsub = (r / stride) % dsub;
    const long rbase = r - rsub * stride;
    for (long c = 0; c < n; ++c) {
      const long csub = (c / stride) % dsub;
      const long cbase = c - csub * stride;
      out(r, c) = rho.matrix()(rbase + csub * stride, cbase + rsub * stride);
    }
  }
  return DensityMatrix(std::move(out), dims, rho.normalized());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const auto& dims = rho.dims();
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  keep_sorted.erase(std::unique(keep_sorted.begin(), keep_sorted.end()), keep_sorted.end());
  for (int k : keep_sorted)
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw std::invalid_argument("partial_trace: invalid subsystem index in keep set");

  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), k)) traced.push_back(k);

  const IndexSplit ix(dims);
  std::vector<int> out_dims;
  long out_dim = 1;
  for (int k : keep_sorted) {
    out_dims.push_back(dims[static_cast<size_t>(k)]);
    out_dim *= dims[static_cast<size_t>(k)];
  }
  long traced_dim = 1;
  for (int k : traced) traced_dim *= dims[static_cast<size_t>(k)];

  // Flat output index -> base flat input index over the kept subsystems.
  auto kept_to_flat = [&](long kept_index) {
    long flat = 0;
    for (int k = static_cast<int>(keep_sorted.size()) - 1; k >= 0; --k) {
      const int sub = keep_sorted[static_cast<size_t>(k)];
      const int d = dims[static_cast<size_t>(sub)];
      flat += (kept_index % d) * ix.stride[static_cast<size_t>(sub)];
      kept_index /= d;
    }
    return flat;
  };
  auto traced_to_flat = [&](long t) {
    long flat = 0;
    for (int k = static_cast<int>(traced.size()) - 1; k >= 0; --k) {
      const int sub = traced[static_cast<size_t>(k)];
      const int d = dims[static_cast<size_t>(sub)];
      flat += (t % d) * ix.stride[static_cast<size_t>(sub)];
      t /= d;
    }
    return flat;
  };

  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (long r = 0; r < out_dim; ++r) {
    const long rb = kept_to_flat(r);
    for (long c = 0; c < out_dim; ++c) {
      const long cb = kept_to_flat(c);
      Complex acc{0.0, 0.0};
      for (long t = 0; t < traced_dim; ++t) {
        const long tf = traced_to_flat(t);
        acc += rho.matrix()(rb + tf, cb + tf);
      }
      out(r, c) = acc;
    }
  }
  return DensityMatrix(std::move(out), std::move(out_dims), rho.normalized());
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
  if (m.size() > 0 && (m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eigenvalues: eigensolver failed");
  std::vector<double> evs(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(evs.begin(), evs.end());
  return evs;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  if (!rho.normalized() && std::abs(rho.trace() - 1.0) > kTraceTol)
    throw std::invalid_argument("von_neumann_entropy: state must be normalized");
  double s = 0.0;
  for (double ev : hermitian_eigenvalues(rho.matrix())) {
    if (ev < 0.0) ev = 0.0;  // PSD noise in [-1e-10, 0)
    if (ev > 0.0) s -= ev * std::log2(ev);
  }
  return std::max(s, 0.0);
}

}  // namespace qrep
