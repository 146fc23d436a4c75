// Copyright 2026 The chanmix Authors
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

// Dense operator and state algebra. Everything is stored as a dense complex
// matrix; multi-register spaces are ordered with register 0 as the most
// significant tensor factor (kron order).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chanmix {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Plain operators (observables, Kraus operators, unitaries) are bare
/// matrices; invariants are checked by the operations that need them.
using Operator = Matrix;

/// Largest total Hilbert dimension handled by the dense kernel (12 qubits).
inline constexpr Index kMaxDimension = Index{1} << 12;

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kEigenFloor = -1e-9;
inline constexpr double kUnitary = 1e-10;
}  // namespace tol

/// Throws DimensionError when `dim` exceeds kMaxDimension.
void check_dimension_cap(Index dim);

/// Positive unit-trace operator over an ordered list of subsystems.
///
/// Construction checks shape, Hermiticity and unit trace (both 1e-10).
/// Positivity costs an eigendecomposition and is checked on demand with
/// min_eigenvalue() / is_physical().
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> dims, Matrix entries);

  static DensityMatrix pure(std::vector<int> dims, const Vector& psi);
  /// |index><index| in the computational basis.
  static DensityMatrix basis_state(std::vector<int> dims, Index index);
  static DensityMatrix maximally_mixed(std::vector<int> dims);
  /// `n` qubits, all dims 2.
  static std::vector<int> qubit_dims(int n);

  const std::vector<int>& dims() const noexcept { return dims_; }
  const Matrix& matrix() const noexcept { return entries_; }
  Index dim() const noexcept { return entries_.rows(); }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }

  double min_eigenvalue() const;
  double purity() const;
  bool is_physical(double eigen_floor = tol::kEigenFloor) const;

  /// Same entries, different subsystem split (product must agree).
  DensityMatrix with_dims(std::vector<int> dims) const;

 private:
  std::vector<int> dims_;
  Matrix entries_;
};

Matrix kron(const Matrix& a, const Matrix& b);

/// Kronecker product; dims are concatenated for density matrices.
Operator tensor_product(const Operator& a, const Operator& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced operator on the subsystems listed in `keep` (any order; the
/// result keeps the original subsystem order).
Matrix partial_trace(const Matrix& op, std::span<const int> dims,
                     std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// Tr[rho A] for Hermitian A. Rejects non-Hermitian observables and leftover
/// imaginary parts above 1e-10.
double expectation(const DensityMatrix& rho, const Operator& observable);

/// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Index rows);

double hermiticity_residual(const Matrix& m);
/// Largest entry of |U^dagger U - I|.
double unitarity_residual(const Matrix& u);
/// Spectral norm.
double operator_norm(const Matrix& m);

/// Completes a (near-)isometry W (n x k, k <= n) to an n x n unitary whose
/// first k columns are W verbatim. The remaining columns come from the
/// Householder QR of W and are orthonormal to its range.
Matrix complete_isometry(const Matrix& w);

/// Pauli matrices by letter (I, X, Y, Z) and tensor strings such as "XZ".
Matrix pauli(char label);
Matrix pauli_string(std::string_view labels);
/// All 4^n Pauli strings of length n, identity first, lexicographic in IXYZ.
std::vector<std::string> pauli_labels(int n_qubits);

/// Smallest q with 2^q >= n (0 for n <= 1).
int ceil_log2(std::size_t n);

}  // namespace chanmix
