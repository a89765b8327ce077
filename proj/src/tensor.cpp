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

#include "qcausal/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

namespace qcausal {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiOffTolerance = 1e-14;
constexpr double kPurifyRankFloor = 1e-12;

std::vector<std::size_t> positions_of(const LabeledDims& dims,
                                      std::span<const std::string> labels,
                                      const char* what) {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  std::set<std::string_view> seen;
  for (const auto& l : labels) {
    if (!dims.contains(l)) {
      throw Error(std::string(what) + ": unknown label '" + l + "' in " +
                  to_string(dims));
    }
    if (!seen.insert(l).second) {
      throw Error(std::string(what) + ": label '" + l + "' listed twice");
    }
    out.push_back(dims.index_of(l));
  }
  return out;
}

// Final factor order when the inputs of a local map are replaced by its
// outputs at the position of the first input.
std::vector<std::string> placement_order(const LabeledDims& original,
                                         std::span<const std::string> inputs,
                                         const LabeledDims& outputs) {
  std::set<std::string_view> in_set(inputs.begin(), inputs.end());
  std::vector<std::string> order;
  bool emitted = false;
  for (const auto& s : original) {
    if (in_set.count(s.label)) {
      if (!emitted) {
        for (const auto& o : outputs) order.push_back(o.label);
        emitted = true;
      }
      continue;
    }
    order.push_back(s.label);
  }
  if (!emitted) {
    for (const auto& o : outputs) order.push_back(o.label);
  }
  return order;
}

EigenSystem jacobi(const Matrix& input, bool want_vectors) {
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw Error("herm_eig: matrix is not square");
  const double deviation = n == 0 ? 0.0 : max_abs_diff(input, input.adjoint());
  if (deviation > tol::kHerm) {
    std::ostringstream msg;
    msg << "herm_eig: matrix is not Hermitian (deviation " << deviation << ")";
    throw Error(msg.str());
  }
  Matrix a = (input + input.adjoint()) * 0.5;
  Matrix v;
  if (want_vectors) v = Matrix::Identity(n, n);

  const double scale = std::max(1.0, a.norm());
  const double threshold = kJacobiOffTolerance * scale;
  const double negligible = 1e-17 * scale;

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index q = 0; q < n; ++q) {
      for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
    }
    if (std::sqrt(2.0 * off) < threshold) {
      converged = true;
      break;
    }
    if (sweep == kMaxJacobiSweeps) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= negligible) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex phase = std::conj(apq / mag);
        // Rotation G restricted to the (p, q) plane.
        const Complex gpp = c;
        const Complex gpq = s;
        const Complex gqp = -s * phase;
        const Complex gqq = c * phase;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;

        if (want_vectors) {
          for (Eigen::Index k = 0; k < n; ++k) {
            const Complex vkp = v(k, p);
            const Complex vkq = v(k, q);
            v(k, p) = vkp * gpp + vkq * gqp;
            v(k, q) = vkp * gpq + vkq * gqq;
          }
        }
      }
    }
  }
  if (!converged) throw Error("herm_eig: Jacobi iteration did not converge");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });
  EigenSystem out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    if (want_vectors) out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LabeledDims

LabeledDims::LabeledDims(std::initializer_list<Subsystem> systems)
    : LabeledDims(std::vector<Subsystem>(systems)) {}

LabeledDims::LabeledDims(std::vector<Subsystem> systems)
    : systems_(std::move(systems)) {
  std::set<std::string_view> seen;
  for (const auto& s : systems_) {
    if (s.label.empty()) throw Error("LabeledDims: empty label");
    if (s.dim < 1) throw Error("LabeledDims: dimension of '" + s.label + "' < 1");
    if (!seen.insert(s.label).second) {
      throw Error("LabeledDims: duplicate label '" + s.label + "'");
    }
  }
}

std::size_t LabeledDims::total() const {
  std::size_t t = 1;
  for (const auto& s : systems_) t *= s.dim;
  return t;
}

bool LabeledDims::contains(std::string_view label) const {
  return std::any_of(systems_.begin(), systems_.end(),
                     [&](const Subsystem& s) { return s.label == label; });
}

std::size_t LabeledDims::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    if (systems_[i].label == label) return i;
  }
  throw Error("unknown label '" + std::string(label) + "' in " + to_string(*this));
}

std::size_t LabeledDims::dim(std::string_view label) const {
  return systems_[index_of(label)].dim;
}

std::vector<std::string> LabeledDims::labels() const {
  std::vector<std::string> out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.label);
  return out;
}

std::vector<std::size_t> LabeledDims::dims() const {
  std::vector<std::size_t> out;
  out.reserve(systems_.size());
  for (const auto& s : systems_) out.push_back(s.dim);
  return out;
}

LabeledDims LabeledDims::select(std::span<const std::string> labels) const {
  std::vector<Subsystem> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(systems_[index_of(l)]);
  return LabeledDims(std::move(out));
}

LabeledDims LabeledDims::without(std::span<const std::string> labels) const {
  for (const auto& l : labels) (void)index_of(l);
  std::vector<Subsystem> out;
  for (const auto& s : systems_) {
    if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) {
      out.push_back(s);
    }
  }
  return LabeledDims(std::move(out));
}

LabeledDims LabeledDims::concat(const LabeledDims& other) const {
  std::vector<Subsystem> out = systems_;
  out.insert(out.end(), other.systems_.begin(), other.systems_.end());
  return LabeledDims(std::move(out));
}

LabeledDims LabeledDims::renamed(std::string_view from, std::string_view to) const {
  std::vector<Subsystem> out = systems_;
  out[index_of(from)].label = std::string(to);
  return LabeledDims(std::move(out));
}

std::string to_string(const LabeledDims& dims) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (const auto& s : dims) {
    if (!first) os << ", ";
    os << s.label << ':' << s.dim;
    first = false;
  }
  os << ']';
  return os.str();
}

std::vector<std::size_t> permutation_indices(std::span<const std::size_t> dims,
                                             std::span<const std::size_t> perm) {
  const std::size_t n = dims.size();
  if (perm.size() != n) throw Error("permutation_indices: size mismatch");
  std::vector<std::size_t> old_stride(n, 1);
  for (std::size_t i = n; i-- > 1;) old_stride[i - 1] = old_stride[i] * dims[i];
  std::vector<std::size_t> new_dims(n);
  std::vector<std::size_t> stride(n);
  for (std::size_t k = 0; k < n; ++k) {
    new_dims[k] = dims[perm[k]];
    stride[k] = old_stride[perm[k]];
  }
  std::size_t total = 1;
  for (auto d : dims) total *= d;

  std::vector<std::size_t> out(total);
  std::vector<std::size_t> digit(n, 0);
  std::size_t old_index = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    out[flat] = old_index;
    // Odometer increment on the new digits, last factor fastest.
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < new_dims[k]) {
        old_index += stride[k];
        break;
      }
      old_index -= stride[k] * (new_dims[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// LabeledOperator / DensityOperator / PureState

LabeledOperator::LabeledOperator(Matrix matrix, LabeledDims dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  const auto n = static_cast<Eigen::Index>(dims_.total());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    std::ostringstream msg;
    msg << "LabeledOperator: matrix is " << matrix_.rows() << "x" << matrix_.cols()
        << " but dims " << to_string(dims_) << " need " << n << "x" << n;
    throw Error(msg.str());
  }
}

LabeledOperator LabeledOperator::renamed(std::string_view from,
                                         std::string_view to) const {
  return LabeledOperator(matrix_, dims_.renamed(from, to));
}

LabeledOperator LabeledOperator::identity(const LabeledDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  return LabeledOperator(Matrix::Identity(n, n), dims);
}

DensityOperator::DensityOperator(LabeledOperator op, TrustTag) : op_(std::move(op)) {
  const Matrix& m = op_.matrix();
  const double dev = max_abs_diff(m, m.adjoint());
  if (dev > tol::kHerm) {
    std::ostringstream msg;
    msg << "DensityOperator: not Hermitian (deviation " << dev << ")";
    throw Error(msg.str());
  }
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    std::ostringstream msg;
    msg << "DensityOperator: trace " << tr.real() << " is not 1";
    throw Error(msg.str());
  }
  op_ = LabeledOperator((m + m.adjoint()) * 0.5, op_.dims());
}

DensityOperator::DensityOperator(LabeledOperator op)
    : DensityOperator(std::move(op), TrustTag{}) {
  const RealVector spectrum = herm_eigenvalues(op_.matrix());
  if (spectrum.size() > 0 && spectrum.minCoeff() < -tol::kPsd) {
    std::ostringstream msg;
    msg << "DensityOperator: negative eigenvalue " << spectrum.minCoeff();
    throw Error(msg.str());
  }
}

DensityOperator DensityOperator::trusted(LabeledOperator op) {
  return DensityOperator(std::move(op), TrustTag{});
}

DensityOperator DensityOperator::maximally_mixed(const LabeledDims& dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  return trusted(LabeledOperator(Matrix::Identity(n, n) / static_cast<double>(n), dims));
}

DensityOperator DensityOperator::basis(const LabeledDims& dims, std::size_t index) {
  return PureState::basis(dims, index).density();
}

PureState::PureState(Vector amplitudes, LabeledDims dims)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (amplitudes_.size() != static_cast<Eigen::Index>(dims_.total())) {
    throw Error("PureState: amplitude count does not match dims " + to_string(dims_));
  }
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::kTrace) {
    std::ostringstream msg;
    msg << "PureState: squared norm " << norm2 << " is not 1";
    throw Error(msg.str());
  }
}

LabeledOperator PureState::projector() const {
  return LabeledOperator(amplitudes_ * amplitudes_.adjoint(), dims_);
}

DensityOperator PureState::density() const {
  return DensityOperator::trusted(projector());
}

PureState PureState::basis(const LabeledDims& dims, std::size_t index) {
  if (index >= dims.total()) throw Error("PureState::basis: index out of range");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dims.total()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v), dims);
}

// ---------------------------------------------------------------------------
// Tensor operations

LabeledOperator kron(const LabeledOperator& a, const LabeledOperator& b) {
  LabeledDims dims = a.dims().concat(b.dims());
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return LabeledOperator(std::move(out), std::move(dims));
}

PureState kron(const PureState& a, const PureState& b) {
  LabeledDims dims = a.dims().concat(b.dims());
  const Vector& x = a.amplitudes();
  const Vector& y = b.amplitudes();
  Vector out(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out.segment(i * y.size(), y.size()) = x(i) * y;
  }
  return PureState(std::move(out), std::move(dims));
}

namespace {

std::vector<std::size_t> full_permutation(const LabeledDims& dims,
                                          std::span<const std::string> order,
                                          const char* what) {
  if (order.size() != dims.size()) {
    throw Error(std::string(what) + ": new order has " + std::to_string(order.size()) +
                " labels, operator has " + std::to_string(dims.size()));
  }
  return positions_of(dims, order, what);
}

}  // namespace

LabeledOperator permute(const LabeledOperator& a, std::span<const std::string> new_order) {
  const auto perm = full_permutation(a.dims(), new_order, "permute");
  const auto dims = a.dims().dims();
  const auto idx = permutation_indices(dims, perm);
  const Matrix& m = a.matrix();
  const auto n = m.rows();
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = m(idx[i], idx[j]);
  }
  return LabeledOperator(std::move(out), a.dims().select(new_order));
}

PureState permute(const PureState& a, std::span<const std::string> new_order) {
  const auto perm = full_permutation(a.dims(), new_order, "permute");
  const auto idx = permutation_indices(a.dims().dims(), perm);
  const Vector& v = a.amplitudes();
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(idx[i]);
  return PureState(std::move(out), a.dims().select(new_order));
}

LabeledOperator partial_trace(const LabeledOperator& a, std::span<const std::string> keep) {
  (void)positions_of(a.dims(), keep, "partial_trace");
  std::vector<std::string> kept;
  std::vector<std::string> traced;
  for (const auto& s : a.dims()) {
    if (std::find(keep.begin(), keep.end(), s.label) != keep.end()) {
      kept.push_back(s.label);
    } else {
      traced.push_back(s.label);
    }
  }
  LabeledDims kept_dims = a.dims().select(kept);
  const std::size_t dk = kept_dims.total();
  const std::size_t dt = a.dims().select(traced).total();

  std::vector<std::string> order = kept;
  order.insert(order.end(), traced.begin(), traced.end());
  const auto perm = positions_of(a.dims(), order, "partial_trace");
  const auto idx = permutation_indices(a.dims().dims(), perm);

  const Matrix& m = a.matrix();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t j = 0; j < dk; ++j) {
    for (std::size_t i = 0; i < dk; ++i) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        acc += m(idx[i * dt + t], idx[j * dt + t]);
      }
      out(i, j) = acc;
    }
  }
  return LabeledOperator(std::move(out), std::move(kept_dims));
}

DensityOperator partial_trace(const DensityOperator& a, std::span<const std::string> keep) {
  return DensityOperator::trusted(partial_trace(a.op(), keep));
}

DensityOperator partial_trace(const PureState& a, std::span<const std::string> keep) {
  (void)positions_of(a.dims(), keep, "partial_trace");
  std::vector<std::string> kept;
  std::vector<std::string> traced;
  for (const auto& s : a.dims()) {
    if (std::find(keep.begin(), keep.end(), s.label) != keep.end()) {
      kept.push_back(s.label);
    } else {
      traced.push_back(s.label);
    }
  }
  std::vector<std::string> order = kept;
  order.insert(order.end(), traced.begin(), traced.end());
  const PureState p = permute(a, order);
  const auto dk = static_cast<Eigen::Index>(a.dims().select(kept).total());
  const auto dt = static_cast<Eigen::Index>(a.dims().select(traced).total());
  // Column k of `block` holds the traced-factor amplitudes for kept index k.
  Eigen::Map<const Matrix> block(p.amplitudes().data(), dt, dk);
  Matrix rho = block.transpose() * block.conjugate();
  return DensityOperator::trusted(LabeledOperator(std::move(rho), a.dims().select(kept)));
}

LabeledOperator partial_transpose(const LabeledOperator& a,
                                  std::span<const std::string> subset) {
  const auto pos = positions_of(a.dims(), subset, "partial_transpose");
  const auto dims = a.dims().dims();
  std::vector<std::ptrdiff_t> stride(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    stride[i - 1] = stride[i] * static_cast<std::ptrdiff_t>(dims[i]);
  }
  const Matrix& m = a.matrix();
  const auto n = m.rows();
  Matrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      std::ptrdiff_t nr = r;
      std::ptrdiff_t nc = c;
      for (auto k : pos) {
        const auto s = stride[k];
        const auto d = static_cast<std::ptrdiff_t>(dims[k]);
        const std::ptrdiff_t rd = (r / s) % d;
        const std::ptrdiff_t cd = (c / s) % d;
        nr += (cd - rd) * s;
        nc += (rd - cd) * s;
      }
      out(nr, nc) = m(r, c);
    }
  }
  return LabeledOperator(std::move(out), a.dims());
}

EigenSystem herm_eig(const Matrix& a) { return jacobi(a, true); }

EigenSystem herm_eig(const LabeledOperator& a) { return jacobi(a.matrix(), true); }

RealVector herm_eigenvalues(const Matrix& a) { return jacobi(a, false).values; }

PureState max_entangled(std::size_t d, const std::string& label_a,
                        const std::string& label_b) {
  if (d < 1) throw Error("max_entangled: dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  Vector v = Vector::Zero(n * n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < n; ++i) v(i * n + i) = amp;
  return PureState(std::move(v), LabeledDims{{label_a, d}, {label_b, d}});
}

PureState purify(const DensityOperator& rho, const std::string& purifier) {
  if (rho.dims().contains(purifier)) {
    throw Error("purify: purifier label '" + purifier + "' already in use");
  }
  const EigenSystem eig = herm_eig(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > kPurifyRankFloor) support.push_back(k);
  }
  if (support.empty()) throw Error("purify: state has no support");
  const auto n = rho.matrix().rows();
  const auto r = static_cast<Eigen::Index>(support.size());
  Vector v = Vector::Zero(n * r);
  for (Eigen::Index j = 0; j < r; ++j) {
    const Eigen::Index k = support[static_cast<std::size_t>(j)];
    const double w = std::sqrt(eig.values(k));
    for (Eigen::Index i = 0; i < n; ++i) v(i * r + j) = w * eig.vectors(i, k);
  }
  LabeledDims dims =
      rho.dims().concat(LabeledDims{{purifier, static_cast<std::size_t>(r)}});
  return PureState(std::move(v), std::move(dims));
}

LabeledOperator merge_labels(const LabeledOperator& a, std::span<const std::string> parts,
                             const std::string& merged) {
  if (parts.empty()) throw Error("merge_labels: nothing to merge");
  const auto pos = positions_of(a.dims(), parts, "merge_labels");
  const std::size_t anchor = *std::min_element(pos.begin(), pos.end());
  std::vector<std::string> order;
  for (std::size_t i = 0; i < a.dims().size(); ++i) {
    const auto& l = a.dims()[i].label;
    if (i == anchor) order.insert(order.end(), parts.begin(), parts.end());
    if (std::find(parts.begin(), parts.end(), l) == parts.end()) order.push_back(l);
  }
  const LabeledOperator p = permute(a, order);
  std::vector<Subsystem> systems;
  std::size_t merged_dim = 1;
  for (const auto& l : parts) merged_dim *= a.dims().dim(l);
  for (std::size_t i = 0; i < p.dims().size(); ++i) {
    const auto& s = p.dims()[i];
    if (std::find(parts.begin(), parts.end(), s.label) != parts.end()) {
      if (s.label == parts.front()) systems.push_back({merged, merged_dim});
      continue;
    }
    systems.push_back(s);
  }
  return LabeledOperator(p.matrix(), LabeledDims(std::move(systems)));
}

// ---------------------------------------------------------------------------
// Local maps

Vector apply_local_raw(const Vector& v, const LabeledDims& dims, const Matrix& m,
                       std::span<const std::string> in_labels,
                       const LabeledDims& out_dims, LabeledDims* result_dims) {
  (void)positions_of(dims, in_labels, "apply_local");
  const LabeledDims in = dims.select(in_labels);
  const LabeledDims rest = dims.without(in_labels);
  if (m.cols() != static_cast<Eigen::Index>(in.total()) ||
      m.rows() != static_cast<Eigen::Index>(out_dims.total())) {
    throw Error("apply_local: map shape does not match " + to_string(in) + " -> " +
                to_string(out_dims));
  }
  std::vector<std::string> order = rest.labels();
  order.insert(order.end(), in_labels.begin(), in_labels.end());
  const auto idx = permutation_indices(dims.dims(), positions_of(dims, order, "apply_local"));
  Vector w(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) w(i) = v(idx[i]);

  const auto din = static_cast<Eigen::Index>(in.total());
  const auto r = static_cast<Eigen::Index>(rest.total());
  Eigen::Map<const Matrix> cols(w.data(), din, r);
  Matrix mapped = m * cols;  // dout x r, column s = rest index s

  const LabeledDims staged = rest.concat(out_dims);
  const auto final_order = placement_order(dims, in_labels, out_dims);
  const auto fidx = permutation_indices(
      staged.dims(), positions_of(staged, final_order, "apply_local"));
  Vector out(mapped.size());
  const Complex* data = mapped.data();
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = data[fidx[i]];
  if (result_dims != nullptr) *result_dims = staged.select(final_order);
  return out;
}

PureState apply_local(const PureState& s, const Matrix& m,
                      std::span<const std::string> in_labels, const LabeledDims& out_dims) {
  LabeledDims dims;
  Vector v = apply_local_raw(s.amplitudes(), s.dims(), m, in_labels, out_dims, &dims);
  return PureState(std::move(v), std::move(dims));
}

LabeledOperator apply_local(const LabeledOperator& x, const Matrix& left, const Matrix& right,
                            std::span<const std::string> in_labels,
                            const LabeledDims& out_dims) {
  const LabeledDims& dims = x.dims();
  (void)positions_of(dims, in_labels, "apply_local");
  const LabeledDims in = dims.select(in_labels);
  const LabeledDims rest = dims.without(in_labels);
  const auto din = static_cast<Eigen::Index>(in.total());
  const auto dout = static_cast<Eigen::Index>(out_dims.total());
  if (left.cols() != din || right.cols() != din || left.rows() != dout ||
      right.rows() != dout) {
    throw Error("apply_local: map shape does not match " + to_string(in) + " -> " +
                to_string(out_dims));
  }
  std::vector<std::string> order = rest.labels();
  order.insert(order.end(), in_labels.begin(), in_labels.end());
  const LabeledOperator staged_in = permute(x, order);
  const auto r = static_cast<Eigen::Index>(rest.total());
  const Matrix& m = staged_in.matrix();
  const Matrix right_adj = right.adjoint();
  Matrix staged_out(r * dout, r * dout);
  for (Eigen::Index t = 0; t < r; ++t) {
    for (Eigen::Index s = 0; s < r; ++s) {
      staged_out.block(s * dout, t * dout, dout, dout).noalias() =
          left * m.block(s * din, t * din, din, din) * right_adj;
    }
  }
  LabeledOperator staged(std::move(staged_out), rest.concat(out_dims));
  return permute(staged, placement_order(dims, in_labels, out_dims));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double trace_norm_hermitian(const Matrix& a) {
  return herm_eigenvalues(a).cwiseAbs().sum();
}

bool is_hermitian(const Matrix& a, double tolerance) {
  return a.rows() == a.cols() && max_abs_diff(a, a.adjoint()) <= tolerance;
}

}  // namespace qcausal
