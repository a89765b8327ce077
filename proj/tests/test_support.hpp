// Copyright 2026 The qcausal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-side generators and brute-force oracles. Nothing here calls into the
// library's linear algebra, so results computed here are independent checks.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace qtest {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  Complex gauss() {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(engine_), n(engine_)};
  }

  Matrix matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = gauss();
    }
    return m;
  }

  Matrix hermitian(int n) {
    const Matrix g = matrix(n, n);
    return (g + g.adjoint()) * 0.5;
  }

  /// Density matrix of the given rank.
  Matrix density(int n, int rank) {
    const Matrix g = matrix(n, rank);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return (rho + rho.adjoint()) * 0.5;
  }

  Vector unit_vector(int n) {
    Vector v = matrix(n, 1).col(0);
    return v / v.norm();
  }

  /// Unitary from a QR of a Gaussian matrix (no phase fix; only unitarity matters here).
  Matrix unitary(int n) {
    Eigen::HouseholderQR<Matrix> qr(matrix(n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
  }

  /// Kraus list of a random CPTP map from an isometry in -> out (x) env.
  std::vector<Matrix> kraus(int din, int dout, int count) {
    const Matrix u = unitary(dout * count);
    std::vector<Matrix> ks(static_cast<std::size_t>(count), Matrix(dout, din));
    for (int k = 0; k < count; ++k) {
      for (int o = 0; o < dout; ++o) ks[static_cast<std::size_t>(k)].row(o) = u.block(o * count + k, 0, 1, din);
    }
    return ks;
  }

 private:
  std::mt19937_64 engine_;
};

/// Plain Kronecker product.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Digits of a row-major composite index.
inline std::vector<int> digits(int index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[static_cast<std::size_t>(k)] = index % dims[static_cast<std::size_t>(k)];
    index /= dims[static_cast<std::size_t>(k)];
  }
  return d;
}

inline int compose(const std::vector<int>& d, const std::vector<int>& dims) {
  int index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + d[k];
  return index;
}

/// Brute-force partial trace: keep[k] says whether factor k survives.
inline Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                            const std::vector<bool>& keep) {
  std::vector<int> kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (keep[k]) kept_dims.push_back(dims[k]);
  }
  int dk = 1;
  for (int d : kept_dims) dk *= d;
  Matrix out = Matrix::Zero(dk, dk);
  const int n = static_cast<int>(m.rows());
  for (int r = 0; r < n; ++r) {
    const auto rd = digits(r, dims);
    for (int c = 0; c < n; ++c) {
      const auto cd = digits(c, dims);
      bool diagonal = true;
      std::vector<int> rk, ck;
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (keep[k]) {
          rk.push_back(rd[k]);
          ck.push_back(cd[k]);
        } else if (rd[k] != cd[k]) {
          diagonal = false;
        }
      }
      if (diagonal) out(compose(rk, kept_dims), compose(ck, kept_dims)) += m(r, c);
    }
  }
  return out;
}

/// Spectrum from Eigen's self-adjoint solver, descending.
inline Eigen::VectorXd eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

inline double von_neumann(const Matrix& rho) {
  double h = 0.0;
  const Eigen::VectorXd ev = eigenvalues(rho);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > 1e-14) h -= ev(i) * std::log2(ev(i));
  }
  return h;
}

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

inline Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline Matrix hadamard() {
  Matrix m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

inline Vector basis(int d, int i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

/// (1/sqrt d) sum_i |ii>.
inline Vector phi_plus(int d) {
  Vector v = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

}  // namespace qtest
