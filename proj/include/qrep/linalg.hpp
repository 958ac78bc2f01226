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

#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qrep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

// Tolerances shared by the state checks below.
inline constexpr double kHermTol = 1e-12;   // max |rho - rho^dagger| elementwise
inline constexpr double kPsdTol = 1e-10;    // eigenvalues >= -kPsdTol
inline constexpr double kTraceTol = 1e-10;

/// Square complex matrix tagged with the tensor factorization of its index
/// space. dims() lists the subsystem dimensions, slowest-varying first, and
/// their product equals the matrix dimension. Construction checks
/// Hermiticity and the trace bound; positivity is checked separately
/// (validate_psd) since it costs a full eigendecomposition.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix matrix, std::vector<int> dims, bool normalized = false);

  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<int>& dims() const { return dims_; }
  bool normalized() const { return normalized_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  double trace() const { return matrix_.trace().real(); }

  /// Trace-1 copy. Throws if the trace is too small to divide by.
  DensityMatrix normalized_copy() const;

  /// Full PSD check: smallest eigenvalue >= -kPsdTol. Throws on failure.
  void validate_psd() const;

 private:
  ComplexMatrix matrix_;
  std::vector<int> dims_;
  bool normalized_;
};

/// Kronecker product; dims are concatenated. Tr(a (x) b) = Tr a * Tr b.
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Partial transpose on one subsystem:
/// <i_A j_B| rho^T_A |k_A l_B> = <k_A j_B| rho |i_A l_B>.
/// Preserves trace and Hermiticity; applying twice is the identity.
DensityMatrix partial_transpose(const DensityMatrix& rho, int subsystem);

/// Trace out every subsystem not in `keep`. `keep` is a set of subsystem
/// indices (any order); the result keeps them in their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Ascending eigenvalues of a Hermitian matrix. Throws if the input is not
/// Hermitian within 1e-10.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// S(rho) = -sum lambda log2 lambda in bits, with 0 log 0 := 0.
/// Eigenvalues in [-1e-10, 0) are clamped to 0 first. Requires a normalized
/// state.
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace qrep
