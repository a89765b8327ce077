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

#include "qcausal/channels.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace qcausal {

namespace {

Matrix kraus_sum(const std::vector<Matrix>& kraus, Eigen::Index din) {
  Matrix s = Matrix::Zero(din, din);
  for (const auto& k : kraus) s.noalias() += k.adjoint() * k;
  return s;
}

void check_trace_condition(const Matrix& s, ChannelKind kind, const char* what) {
  const auto n = s.rows();
  const Matrix id = Matrix::Identity(n, n);
  if (kind == ChannelKind::Cptp) {
    const double dev = max_abs_diff(s, id);
    if (dev > tol::kTrace) {
      std::ostringstream msg;
      msg << what << ": not trace preserving (|sum K^dag K - I|_max = " << dev << ")";
      throw Error(msg.str());
    }
  } else {
    const double worst = herm_eigenvalues(id - s).minCoeff();
    if (worst < -tol::kPsd) {
      std::ostringstream msg;
      msg << what << ": trace increasing (min eigenvalue of I - sum K^dag K = " << worst
          << ")";
      throw Error(msg.str());
    }
  }
}

}  // namespace

KrausChannel::KrausChannel(LabeledDims in_dims, LabeledDims out_dims,
                           std::vector<Matrix> kraus, ChannelKind kind)
    : in_dims_(std::move(in_dims)),
      out_dims_(std::move(out_dims)),
      kraus_(std::move(kraus)),
      kind_(kind) {
  if (kraus_.empty()) throw Error("KrausChannel: no Kraus operators");
  const auto din = static_cast<Eigen::Index>(in_dims_.total());
  const auto dout = static_cast<Eigen::Index>(out_dims_.total());
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din) {
      throw Error("KrausChannel: Kraus operator shape does not match " +
                  to_string(in_dims_) + " -> " + to_string(out_dims_));
    }
  }
  check_trace_condition(kraus_sum(kraus_, din), kind_, "KrausChannel");
}

KrausChannel KrausChannel::unitary(LabeledDims in_dims, LabeledDims out_dims, Matrix u) {
  return KrausChannel(std::move(in_dims), std::move(out_dims), {std::move(u)});
}

KrausChannel KrausChannel::identity(LabeledDims in_dims, LabeledDims out_dims) {
  if (in_dims.total() != out_dims.total()) {
    throw Error("KrausChannel::identity: dimension mismatch");
  }
  const auto n = static_cast<Eigen::Index>(in_dims.total());
  return unitary(std::move(in_dims), std::move(out_dims), Matrix::Identity(n, n));
}

LinearMap KrausChannel::as_map() const {
  LinearMap map{in_dims_, out_dims_, {}};
  map.terms.reserve(kraus_.size());
  for (const auto& k : kraus_) map.terms.push_back({k, k});
  return map;
}

LabeledDims choi_input_dims(const LabeledDims& in_dims, const LabeledDims& out_dims) {
  std::vector<Subsystem> systems;
  for (const auto& s : in_dims) {
    Subsystem copy = s;
    if (out_dims.contains(s.label)) copy.label += "_in";
    systems.push_back(copy);
  }
  return LabeledDims(std::move(systems));
}

ChoiOperator::ChoiOperator(LabeledOperator op, LabeledDims in_dims, LabeledDims out_dims,
                           ChannelKind kind)
    : op_(std::move(op)), in_dims_(std::move(in_dims)), out_dims_(std::move(out_dims)) {
  const LabeledDims expected = choi_input_dims(in_dims_, out_dims_).concat(out_dims_);
  if (op_.dims() != expected) {
    throw Error("ChoiOperator: operator dims " + to_string(op_.dims()) + " expected " +
                to_string(expected));
  }
  const Matrix& m = op_.matrix();
  if (!is_hermitian(m, tol::kHerm)) throw Error("ChoiOperator: not Hermitian");
  const double min_eig = herm_eigenvalues(m).minCoeff();
  if (min_eig < -tol::kPsd) {
    std::ostringstream msg;
    msg << "ChoiOperator: not positive semidefinite (min eigenvalue " << min_eig << ")";
    throw Error(msg.str());
  }
  const auto in_labels = choi_input_dims(in_dims_, out_dims_).labels();
  const Matrix marginal = partial_trace(op_, in_labels).matrix();
  check_trace_condition(marginal, kind, "ChoiOperator");
}

Vector cj_vector(const Matrix& t) {
  const auto din = t.cols();
  const auto dout = t.rows();
  Vector v = Vector::Zero(din * dout);
  for (Eigen::Index i = 0; i < din; ++i) v.segment(i * dout, dout) = t.col(i);
  return v;
}

ChoiOperator choi_from_kraus(const KrausChannel& c) {
  const auto n = static_cast<Eigen::Index>(c.in_dims().total() * c.out_dims().total());
  Matrix j = Matrix::Zero(n, n);
  for (const auto& k : c.kraus()) {
    const Vector v = cj_vector(k);
    j.noalias() += v * v.adjoint();
  }
  LabeledDims dims = choi_input_dims(c.in_dims(), c.out_dims()).concat(c.out_dims());
  return ChoiOperator(LabeledOperator(std::move(j), std::move(dims)), c.in_dims(),
                      c.out_dims(), c.kind());
}

LabeledOperator apply_map(const LinearMap& map, const LabeledOperator& x) {
  const auto in_labels = map.in_dims.labels();
  for (const auto& s : map.in_dims) {
    if (!x.dims().contains(s.label) || x.dims().dim(s.label) != s.dim) {
      throw Error("apply_map: input " + to_string(map.in_dims) +
                  " does not match operator dims " + to_string(x.dims()));
    }
  }
  if (map.terms.empty()) throw Error("apply_map: empty map");
  LabeledOperator out = apply_local(x, map.terms[0].left, map.terms[0].right, in_labels,
                                    map.out_dims);
  Matrix acc = out.matrix();
  for (std::size_t k = 1; k < map.terms.size(); ++k) {
    acc += apply_local(x, map.terms[k].left, map.terms[k].right, in_labels, map.out_dims)
               .matrix();
  }
  return LabeledOperator(std::move(acc), out.dims());
}

DensityOperator apply_channel(const KrausChannel& c, const DensityOperator& rho) {
  return DensityOperator::trusted(apply_map(c.as_map(), rho.op()));
}

Dilation stinespring(const KrausChannel& c) {
  if (c.kind() != ChannelKind::Cptp) {
    throw Error("stinespring: channel is not trace preserving");
  }
  const auto r = static_cast<Eigen::Index>(c.kraus().size());
  const auto din = static_cast<Eigen::Index>(c.in_dims().total());
  const auto dout = static_cast<Eigen::Index>(c.out_dims().total());
  Matrix v(dout * r, din);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Matrix& kk = c.kraus()[static_cast<std::size_t>(k)];
    for (Eigen::Index o = 0; o < dout; ++o) v.row(o * r + k) = kk.row(o);
  }
  const double dev = max_abs_diff(v.adjoint() * v, Matrix::Identity(din, din));
  if (dev > tol::kTrace) throw Error("stinespring: dilation is not an isometry");
  return {std::move(v), static_cast<std::size_t>(r)};
}

Matrix complete_to_unitary(const Matrix& isometry, std::size_t ancilla_dim) {
  const auto n = isometry.rows();
  const auto m = isometry.cols();
  const auto s = static_cast<Eigen::Index>(ancilla_dim);
  if (n != m * s) {
    throw Error("complete_to_unitary: rows must equal columns times ancilla dimension");
  }
  const double dev = max_abs_diff(isometry.adjoint() * isometry, Matrix::Identity(m, m));
  if (dev > tol::kTrace) throw Error("complete_to_unitary: input is not an isometry");
  Eigen::HouseholderQR<Matrix> qr(isometry);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix w(n, n);
  Eigen::Index next = m;
  for (Eigen::Index i = 0; i < m; ++i) {
    w.col(i * s) = isometry.col(i);
    for (Eigen::Index t = 1; t < s; ++t) w.col(i * s + t) = q.col(next++);
  }
  return w;
}

Matrix haar_unitary(std::size_t d, Rng& rng) {
  if (d < 1) throw Error("haar_unitary: dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  const Matrix g = rng.ginibre(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex rii = r(i, i);
    const double mag = std::abs(rii);
    q.col(i) *= mag > 0.0 ? rii / mag : Complex(1.0);
  }
  return q;
}

Matrix haar_unitary(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(d, rng);
}

DensityOperator random_density(const LabeledDims& dims, std::size_t rank, Rng& rng) {
  const std::size_t d = dims.total();
  if (rank < 1 || rank > d) {
    throw Error("random_density: rank " + std::to_string(rank) + " outside [1, " +
                std::to_string(d) + "]");
  }
  const Matrix g = rng.ginibre(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(rank));
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()) * 0.5;
  return DensityOperator::trusted(LabeledOperator(std::move(rho), dims));
}

DensityOperator random_density(std::size_t d, std::size_t rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(LabeledDims{{"S", d}}, rank, rng);
}

PureState random_pure(const LabeledDims& dims, Rng& rng) {
  Vector v = rng.ginibre(static_cast<Eigen::Index>(dims.total()), 1).col(0);
  v.normalize();
  return PureState(std::move(v), dims);
}

KrausChannel random_channel(LabeledDims in_dims, LabeledDims out_dims,
                            std::size_t kraus_count, Rng& rng) {
  const auto din = static_cast<Eigen::Index>(in_dims.total());
  const auto dout = static_cast<Eigen::Index>(out_dims.total());
  const auto r = static_cast<Eigen::Index>(kraus_count);
  if (r < 1 || dout * r < din) {
    throw Error("random_channel: need output dim * Kraus count >= input dim");
  }
  const Matrix u = haar_unitary(static_cast<std::size_t>(dout * r), rng);
  std::vector<Matrix> kraus(kraus_count, Matrix(dout, din));
  for (Eigen::Index k = 0; k < r; ++k) {
    for (Eigen::Index o = 0; o < dout; ++o) {
      kraus[static_cast<std::size_t>(k)].row(o) = u.block(o * r + k, 0, 1, din);
    }
  }
  return KrausChannel(std::move(in_dims), std::move(out_dims), std::move(kraus));
}

KrausChannel completely_factorizable(const Matrix& u2, const FactorizationDims& dims,
                                     const std::string& in_label,
                                     const std::string& out_label) {
  if (dims.b1 * dims.q1 != dims.f * dims.q2) {
    throw Error("completely_factorizable: dim(B1) dim(Q1) != dim(F) dim(Q2)");
  }
  const auto n = static_cast<Eigen::Index>(dims.b1 * dims.q1);
  if (u2.rows() != n || u2.cols() != n) {
    throw Error("completely_factorizable: unitary has the wrong shape");
  }
  const auto b1 = static_cast<Eigen::Index>(dims.b1);
  const auto q1 = static_cast<Eigen::Index>(dims.q1);
  const auto f = static_cast<Eigen::Index>(dims.f);
  const auto q2 = static_cast<Eigen::Index>(dims.q2);
  const double weight = 1.0 / std::sqrt(static_cast<double>(dims.b1));
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(b1 * f));
  for (Eigen::Index b = 0; b < b1; ++b) {
    for (Eigen::Index fo = 0; fo < f; ++fo) {
      // <f|_F U |b>_B1, restricted to Q1 -> Q2.
      kraus.push_back(weight * u2.block(fo * q2, b * q1, q2, q1));
    }
  }
  return KrausChannel(LabeledDims{{in_label, dims.q1}}, LabeledDims{{out_label, dims.q2}},
                      std::move(kraus));
}

}  // namespace qcausal
