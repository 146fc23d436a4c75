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

#include "chanmix/qops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chanmix/error.hpp"

namespace chanmix {

namespace {

Index dims_product(std::span<const int> dims) {
  Index p = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("subsystem dimensions must be positive");
    p *= d;
    check_dimension_cap(p);
  }
  return p;
}

}  // namespace

void check_dimension_cap(Index dim) {
  if (dim > kMaxDimension) {
    std::ostringstream os;
    os << "total dimension " << dim << " exceeds the dense cap of " << kMaxDimension
       << " (12 qubits)";
    throw DimensionError(os.str());
  }
}

DensityMatrix::DensityMatrix(std::vector<int> dims, Matrix entries)
    : dims_(std::move(dims)), entries_(std::move(entries)) {
  if (dims_.empty()) throw DimensionError("density matrix needs at least one subsystem");
  const Index d = dims_product(dims_);
  if (entries_.rows() != d || entries_.cols() != d) {
    std::ostringstream os;
    os << "density matrix is " << entries_.rows() << "x" << entries_.cols()
       << " but dims multiply to " << d;
    throw DimensionError(os.str());
  }
  if (hermiticity_residual(entries_) > tol::kHermitian) {
    throw DomainError("density matrix is not Hermitian within 1e-10");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol::kTrace) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << " (expected 1 within 1e-10)";
    throw DomainError(os.str());
  }
}

DensityMatrix DensityMatrix::pure(std::vector<int> dims, const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw DomainError("zero state vector");
  const Vector v = psi / n;
  return DensityMatrix(std::move(dims), v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(std::vector<int> dims, Index index) {
  const Index d = dims_product(dims);
  if (index < 0 || index >= d) throw DimensionError("basis index out of range");
  Matrix m = Matrix::Zero(d, d);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(dims), std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<int> dims) {
  const Index d = dims_product(dims);
  return DensityMatrix(std::move(dims), Matrix::Identity(d, d) / static_cast<double>(d));
}

std::vector<int> DensityMatrix::qubit_dims(int n) {
  if (n < 0) throw DimensionError("negative qubit count");
  return std::vector<int>(static_cast<std::size_t>(n), 2);
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const {
  return (entries_ * entries_).trace().real();
}

bool DensityMatrix::is_physical(double eigen_floor) const {
  return min_eigenvalue() >= eigen_floor;
}

DensityMatrix DensityMatrix::with_dims(std::vector<int> dims) const {
  return DensityMatrix(std::move(dims), entries_);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Operator tensor_product(const Operator& a, const Operator& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw DimensionError("tensor_product expects square operators");
  }
  check_dimension_cap(a.rows() * b.rows());
  return kron(a, b);
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  check_dimension_cap(a.dim() * b.dim());
  return DensityMatrix(std::move(dims), kron(a.matrix(), b.matrix()));
}

Matrix partial_trace(const Matrix& op, std::span<const int> dims, std::span<const int> keep) {
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: subsystem index out of range");
    if (kept[static_cast<std::size_t>(k)]) {
      throw DimensionError("partial_trace: duplicate subsystem in keep set");
    }
    kept[static_cast<std::size_t>(k)] = true;
  }
  const Index total = dims_product(dims);
  if (op.rows() != total || op.cols() != total) {
    throw DimensionError("partial_trace: operator size does not match dims");
  }

  Index keep_dim = 1;
  Index trace_dim = 1;
  for (int s = 0; s < n; ++s) {
    (kept[static_cast<std::size_t>(s)] ? keep_dim : trace_dim) *= dims[static_cast<std::size_t>(s)];
  }

  // Split every full index into (kept multi-index, traced multi-index), both
  // in row-major order over their own subsystems.
  std::vector<Index> kept_of(static_cast<std::size_t>(total));
  std::vector<Index> traced_of(static_cast<std::size_t>(total));
  for (Index full = 0; full < total; ++full) {
    Index rem = full;
    Index k_idx = 0, t_idx = 0, k_stride = 1, t_stride = 1;
    for (int s = n - 1; s >= 0; --s) {
      const int d = dims[static_cast<std::size_t>(s)];
      const Index digit = rem % d;
      rem /= d;
      if (kept[static_cast<std::size_t>(s)]) {
        k_idx += digit * k_stride;
        k_stride *= d;
      } else {
        t_idx += digit * t_stride;
        t_stride *= d;
      }
    }
    kept_of[static_cast<std::size_t>(full)] = k_idx;
    traced_of[static_cast<std::size_t>(full)] = t_idx;
  }
  std::vector<std::vector<Index>> groups(static_cast<std::size_t>(trace_dim));
  for (Index full = 0; full < total; ++full) {
    groups[static_cast<std::size_t>(traced_of[static_cast<std::size_t>(full)])].push_back(full);
  }

  Matrix out = Matrix::Zero(keep_dim, keep_dim);
  for (const auto& g : groups) {
    for (Index r : g) {
      const Index kr = kept_of[static_cast<std::size_t>(r)];
      for (Index c : g) {
        out(kr, kept_of[static_cast<std::size_t>(c)]) += op(r, c);
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  Matrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> dims;
  dims.reserve(sorted.size());
  for (int k : sorted) dims.push_back(rho.dims()[static_cast<std::size_t>(k)]);
  return DensityMatrix(std::move(dims), std::move(reduced));
}

double expectation(const DensityMatrix& rho, const Operator& observable) {
  if (observable.rows() != rho.dim() || observable.cols() != rho.dim()) {
    throw DimensionError("expectation: observable dimension does not match state");
  }
  if (hermiticity_residual(observable) > tol::kHermitian) {
    throw DomainError("expectation: observable is not Hermitian within 1e-10");
  }
  const Complex value = rho.matrix().cwiseProduct(observable.transpose()).sum();
  if (std::abs(value.imag()) > 1e-10) {
    throw DomainError("expectation: imaginary residue above 1e-10");
  }
  return value.real();
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Index rows) {
  if (rows <= 0 || v.size() % rows != 0) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

double hermiticity_residual(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_residual(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix complete_isometry(const Matrix& w) {
  const Index n = w.rows();
  const Index k = w.cols();
  if (k > n) throw DimensionError("complete_isometry: more columns than rows");
  if (k == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(w);
  Matrix u = qr.householderQ();
  u.leftCols(k) = w;
  return u;
}

Matrix pauli(char label) {
  Matrix m(2, 2);
  switch (label) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw DomainError(std::string("unknown Pauli label '") + label + "'");
  }
  return m;
}

Matrix pauli_string(std::string_view labels) {
  Matrix out = Matrix::Identity(1, 1);
  for (char c : labels) out = kron(out, pauli(c));
  return out;
}

std::vector<std::string> pauli_labels(int n_qubits) {
  std::vector<std::string> out{""};
  for (int q = 0; q < n_qubits; ++q) {
    std::vector<std::string> next;
    next.reserve(out.size() * 4);
    for (const auto& s : out) {
      for (char c : {'I', 'X', 'Y', 'Z'}) next.push_back(s + c);
    }
    out = std::move(next);
  }
  return out;
}

int ceil_log2(std::size_t n) {
  int q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  return q;
}

}  // namespace chanmix
