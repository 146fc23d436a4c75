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

#include "chanmix/compile.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "chanmix/error.hpp"

namespace chanmix {

namespace {

constexpr double kZero = 1e-12;

Matrix rz(double a) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -a / 2);
  m(1, 1) = std::polar(1.0, a / 2);
  return m;
}

Matrix ry(double a) {
  Matrix m(2, 2);
  m << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
  return m;
}

Matrix hadamard() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::numbers::sqrt2;
}

bool is_phase_identity(const Matrix& u) {
  const Complex ph = u(0, 0);
  if (std::abs(std::abs(ph) - 1.0) > kZero) return false;
  return (u - ph * Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= kZero;
}

bool is_diagonal(const Matrix& u) {
  Matrix off = u;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff() <= kZero;
}

/// If `u` (on m qubits) is I on local qubit j, returns the reduced operator.
bool strip_qubit(const Matrix& u, int m, int j, Matrix& reduced) {
  const Index b = Index{1} << (m - 1 - j);
  const Index dim = u.rows();
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      if ((r ^ c) & b) {
        if (std::abs(u(r, c)) > kZero) return false;
      } else if (!(r & b) && std::abs(u(r, c) - u(r | b, c | b)) > kZero) {
        return false;
      }
    }
  }
  auto squeeze = [b](Index x) { return ((x >> 1) & ~(b - 1)) | (x & (b - 1)); };
  reduced = Matrix(dim / 2, dim / 2);
  for (Index r = 0; r < dim; ++r) {
    if (r & b) continue;
    for (Index c = 0; c < dim; ++c) {
      if (c & b) continue;
      reduced(squeeze(r), squeeze(c)) = u(r, c);
    }
  }
  return true;
}

Matrix nearest_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

class Emitter {
 public:
  explicit Emitter(Circuit& out) : out_(out) {}

  void u(int q, const Matrix& m) {
    if (is_phase_identity(m)) return;
    out_.add_unitary("u", m, {q});
  }

  void cx(int c, int t) { out_.add_cx(c, t); }

  void unitary(const Matrix& m, const std::vector<int>& qs) {
    const int n = static_cast<int>(qs.size());
    if (n == 0 || is_phase_identity(m)) return;
    for (int j = 0; j < n; ++j) {
      Matrix reduced;
      if (n > 1 && strip_qubit(m, n, j, reduced)) {
        std::vector<int> rest = qs;
        rest.erase(rest.begin() + j);
        unitary(reduced, rest);
        return;
      }
    }
    if (n == 1) {
      u(qs[0], m);
      return;
    }
    if (is_diagonal(m)) {
      std::vector<double> theta(static_cast<std::size_t>(m.rows()));
      for (Index i = 0; i < m.rows(); ++i) theta[static_cast<std::size_t>(i)] = std::arg(m(i, i));
      diagonal(theta, qs);
      return;
    }
    const Index h = m.rows() / 2;
    if (m.topRightCorner(h, h).cwiseAbs().maxCoeff() <= kZero &&
        m.bottomLeftCorner(h, h).cwiseAbs().maxCoeff() <= kZero) {
      demultiplex(m.topLeftCorner(h, h), m.bottomRightCorner(h, h), qs);
      return;
    }
    cosine_sine(m, qs);
  }

  /// diag(e^{i theta_x}) with x indexed MSB-first over qs.
  void diagonal(const std::vector<double>& theta, const std::vector<int>& qs) {
    const std::size_t n = qs.size();
    if (n == 1) {
      Matrix d = Matrix::Zero(2, 2);
      d(0, 0) = std::polar(1.0, theta[0]);
      d(1, 1) = std::polar(1.0, theta[1]);
      u(qs[0], d);
      return;
    }
    const std::size_t half = theta.size() / 2;
    std::vector<double> phi(half), psi(half);
    for (std::size_t j = 0; j < half; ++j) {
      phi[j] = theta[2 * j + 1] - theta[2 * j];
      psi[j] = 0.5 * (theta[2 * j + 1] + theta[2 * j]);
    }
    const std::vector<int> upper(qs.begin(), qs.end() - 1);
    multiplexed_rotation('z', phi, upper, qs.back());
    diagonal(psi, upper);
  }

  /// Applies R_axis(angles[x]) to `target` when the controls read x.
  void multiplexed_rotation(char axis, std::vector<double> angles, std::vector<int> controls,
                            int target) {
    const std::size_t k = controls.size();
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t bit = std::size_t{1} << b;
      bool independent = true;
      for (std::size_t x = 0; x < angles.size() && independent; ++x) {
        if (std::abs(angles[x] - angles[x ^ bit]) > kZero) independent = false;
      }
      if (!independent) continue;
      std::vector<double> reduced;
      reduced.reserve(angles.size() / 2);
      for (std::size_t x = 0; x < angles.size(); ++x) {
        if (!(x & bit)) reduced.push_back(angles[x]);
      }
      controls.erase(controls.begin() + static_cast<std::ptrdiff_t>(k - 1 - b));
      multiplexed_rotation(axis, std::move(reduced), std::move(controls), target);
      return;
    }
    auto rot = [axis](double a) { return axis == 'z' ? rz(a) : ry(a); };
    if (k == 0) {
      if (std::abs(angles[0]) > kZero) u(target, rot(angles[0]));
      return;
    }
    const std::size_t count = angles.size();
    const double scale = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t g = i ^ (i >> 1);
      double a = 0.0;
      for (std::size_t x = 0; x < count; ++x) {
        a += (std::popcount(x & g) % 2 ? -1.0 : 1.0) * angles[x];
      }
      a *= scale;
      if (std::abs(a) > kZero) u(target, rot(a));
      const std::size_t b = i + 1 < count ? static_cast<std::size_t>(std::countr_zero(i + 1)) : k - 1;
      cx(controls[k - 1 - b], target);
    }
  }

  /// (a (+) b) selected by qs[0], acting on qs[1..].
  void demultiplex(const Matrix& a, const Matrix& b, const std::vector<int>& qs) {
    const std::vector<int> lower(qs.begin() + 1, qs.end());
    Eigen::ComplexSchur<Matrix> schur(a * b.adjoint());
    const Matrix v = schur.matrixU();
    const Index h = a.rows();
    Vector d(h);
    std::vector<double> phi(static_cast<std::size_t>(h));
    for (Index j = 0; j < h; ++j) {
      const Complex d2 = schur.matrixT()(j, j);
      d(j) = std::sqrt(d2 / std::abs(d2));
      phi[static_cast<std::size_t>(j)] = -2.0 * std::arg(d(j));
    }
    const Matrix w = d.asDiagonal() * v.adjoint() * b;
    unitary(nearest_unitary(w), lower);
    multiplexed_rotation('z', phi, lower, qs[0]);
    unitary(v, lower);
  }

  void cosine_sine(const Matrix& m, const std::vector<int>& qs) {
    const Index h = m.rows() / 2;
    const Matrix u00 = m.topLeftCorner(h, h);
    const Matrix u01 = m.topRightCorner(h, h);
    const Matrix u10 = m.bottomLeftCorner(h, h);
    const Matrix u11 = m.bottomRightCorner(h, h);
    Eigen::JacobiSVD<Matrix> svd(u00, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix l1 = svd.matrixU();
    const Matrix r1 = svd.matrixV().adjoint();
    const Matrix z = u10 * svd.matrixV();

    std::vector<double> c(static_cast<std::size_t>(h)), s(static_cast<std::size_t>(h));
    std::vector<Index> order(static_cast<std::size_t>(h));
    for (Index j = 0; j < h; ++j) {
      c[static_cast<std::size_t>(j)] = svd.singularValues()(j);
      s[static_cast<std::size_t>(j)] = z.col(j).norm();
      order[static_cast<std::size_t>(j)] = j;
    }
    std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) {
      return s[static_cast<std::size_t>(x)] > s[static_cast<std::size_t>(y)];
    });
    Matrix l2 = Matrix::Zero(h, h);
    std::vector<Index> filled;
    Index next_basis = 0;
    for (Index j : order) {
      Vector v = s[static_cast<std::size_t>(j)] > 1e-10 ? Vector(z.col(j)) : Vector::Zero(h);
      for (Index f : filled) v -= l2.col(f) * l2.col(f).dot(v);
      while (v.norm() <= 1e-8) {
        v = Vector::Unit(h, next_basis++);
        for (Index f : filled) v -= l2.col(f) * l2.col(f).dot(v);
      }
      l2.col(j) = v / v.norm();
      filled.push_back(j);
    }
    std::vector<double> theta(static_cast<std::size_t>(h));
    Vector cv(h), sv(h);
    for (Index j = 0; j < h; ++j) {
      const auto js = static_cast<std::size_t>(j);
      theta[js] = std::atan2(s[js], c[js]);
      cv(j) = std::cos(theta[js]);
      sv(j) = std::sin(theta[js]);
    }
    const Matrix r2 = nearest_unitary(cv.asDiagonal() * l2.adjoint() * u11 -
                                      sv.asDiagonal() * l1.adjoint() * u01);
    std::vector<double> ry_angles(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) ry_angles[j] = 2.0 * theta[j];

    const std::vector<int> lower(qs.begin() + 1, qs.end());
    demultiplex(r1, r2, qs);
    multiplexed_rotation('y', ry_angles, lower, qs[0]);
    demultiplex(l1, l2, qs);
  }

  void controlled(Matrix m, std::vector<int> targets, const std::vector<int>& controls,
                  std::uint64_t value) {
    if (controls.empty()) {
      unitary(m, targets);
      return;
    }
    const std::size_t k = controls.size();
    std::vector<int> flipped;
    for (std::size_t i = 0; i < k; ++i) {
      if (!((value >> (k - 1 - i)) & 1U)) flipped.push_back(controls[i]);
    }
    for (int q : flipped) u(q, pauli('X'));

    for (bool stripped = true; stripped && targets.size() > 1;) {
      stripped = false;
      const int n = static_cast<int>(targets.size());
      for (int j = 0; j < n; ++j) {
        Matrix reduced;
        if (strip_qubit(m, n, j, reduced)) {
          m = std::move(reduced);
          targets.erase(targets.begin() + j);
          stripped = true;
          break;
        }
      }
    }

    Matrix w;
    Vector lambda;
    if (is_diagonal(m)) {
      w = Matrix::Identity(m.rows(), m.cols());
      lambda = m.diagonal();
    } else {
      Eigen::ComplexSchur<Matrix> schur(m);
      w = schur.matrixU();
      lambda = schur.matrixT().diagonal();
    }
    for (Index j = 0; j < lambda.size(); ++j) lambda(j) /= std::abs(lambda(j));

    if (k == 1 && targets.size() == 1 && std::abs(lambda(1) / lambda(0) + 1.0) <= kZero) {
      // U = l0 (W H) X (H W^dagger): a single CNOT plus local gates.
      Matrix phase = Matrix::Identity(2, 2);
      phase(1, 1) = lambda(0);
      u(controls[0], phase);
      u(targets[0], hadamard() * w.adjoint());
      cx(controls[0], targets[0]);
      u(targets[0], w * hadamard());
    } else {
      std::vector<int> qs = controls;
      qs.insert(qs.end(), targets.begin(), targets.end());
      const std::size_t tdim = static_cast<std::size_t>(lambda.size());
      std::vector<double> theta(tdim << k, 0.0);
      const std::size_t all_ones = (std::size_t{1} << k) - 1;
      for (std::size_t j = 0; j < tdim; ++j) {
        theta[(all_ones * tdim) + j] = std::arg(lambda(static_cast<Index>(j)));
      }
      unitary(w.adjoint(), targets);
      diagonal(theta, qs);
      unitary(w, targets);
    }

    for (int q : flipped) u(q, pauli('X'));
  }

 private:
  Circuit& out_;
};

}  // namespace

Circuit compile_to_basis(const Circuit& circuit) {
  Circuit out(circuit.layout());
  Emitter emit(out);
  for (const auto& item : circuit.items()) {
    switch (item.kind) {
      case ItemKind::kReset:
        out.add(item);
        break;
      case ItemKind::kChannel:
        throw DomainError("compile_to_basis: channel item '" + item.name +
                          "' must be dilated before compilation");
      case ItemKind::kUnitary:
        if (item.is_cx()) {
          out.add(item);
        } else {
          emit.controlled(item.matrix, item.targets, item.controls, item.control_value);
        }
        break;
    }
  }
  return out;
}

ResourceCount count_resources(const Circuit& circuit) {
  ResourceCount rc;
  rc.qubits = circuit.num_qubits();
  std::vector<int> level(static_cast<std::size_t>(rc.qubits), 0);
  for (const auto& item : circuit.items()) {
    if (item.is_cx()) {
      ++rc.two_qubit_gates;
    } else if (item.is_single_qubit_unitary()) {
      ++rc.single_qubit_gates;
    } else if (item.kind == ItemKind::kReset) {
      ++rc.resets;
    } else {
      throw DomainError("count_resources: item '" + item.name +
                        "' is not in the compiled gate set; run compile_to_basis first");
    }
    int layer = 0;
    for (int q : item.targets) layer = std::max(layer, level[static_cast<std::size_t>(q)]);
    for (int q : item.controls) layer = std::max(layer, level[static_cast<std::size_t>(q)]);
    ++layer;
    for (int q : item.targets) level[static_cast<std::size_t>(q)] = layer;
    for (int q : item.controls) level[static_cast<std::size_t>(q)] = layer;
    rc.depth = std::max(rc.depth, layer);
  }
  return rc;
}

double phase_invariant_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("phase_invariant_distance: shapes differ");
  }
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a - phase * b).norm();
}

}  // namespace chanmix
