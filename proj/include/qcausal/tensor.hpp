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

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qcausal {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances shared by every module (absolute, entrywise max norm).
namespace tol {
inline constexpr double kPsd = 1e-9;
inline constexpr double kTrace = 1e-8;
inline constexpr double kHerm = 1e-8;
inline constexpr double kRecon = 1e-9;
}  // namespace tol

/// Raised for every contract violation in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Subsystem {
  std::string label;
  std::size_t dim = 1;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered list of named tensor factors. Composite indices are row-major:
/// the first subsystem is the most significant digit.
class LabeledDims {
 public:
  LabeledDims() = default;
  LabeledDims(std::initializer_list<Subsystem> systems);
  explicit LabeledDims(std::vector<Subsystem> systems);

  std::size_t size() const { return systems_.size(); }
  bool empty() const { return systems_.empty(); }
  std::size_t total() const;

  const Subsystem& operator[](std::size_t i) const { return systems_[i]; }
  auto begin() const { return systems_.begin(); }
  auto end() const { return systems_.end(); }

  bool contains(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;  // throws if absent
  std::size_t dim(std::string_view label) const;
  std::vector<std::string> labels() const;
  std::vector<std::size_t> dims() const;

  /// Sub-list in the given label order.
  LabeledDims select(std::span<const std::string> labels) const;
  /// Remaining subsystems (original order) after removing `labels`.
  LabeledDims without(std::span<const std::string> labels) const;
  LabeledDims concat(const LabeledDims& other) const;
  LabeledDims renamed(std::string_view from, std::string_view to) const;

  bool operator==(const LabeledDims&) const = default;

 private:
  std::vector<Subsystem> systems_;
};

std::string to_string(const LabeledDims& dims);

/// Flat-index map for reordering tensor factors: entry `n` is the old flat
/// index of new flat index `n`. `perm[k]` is the old position of new factor k.
std::vector<std::size_t> permutation_indices(std::span<const std::size_t> dims,
                                             std::span<const std::size_t> perm);

/// Square complex matrix tagged with its tensor-factor structure.
class LabeledOperator {
 public:
  LabeledOperator() = default;
  LabeledOperator(Matrix matrix, LabeledDims dims);

  const Matrix& matrix() const { return matrix_; }
  const LabeledDims& dims() const { return dims_; }
  std::size_t total_dim() const { return dims_.total(); }
  Complex trace() const { return matrix_.trace(); }

  LabeledOperator renamed(std::string_view from, std::string_view to) const;

  static LabeledOperator identity(const LabeledDims& dims);

 private:
  Matrix matrix_;
  LabeledDims dims_;
};

/// Unit-trace positive semidefinite operator.
class DensityOperator {
 public:
  /// Full validation: Hermitian, unit trace, spectrum >= -kPsd.
  explicit DensityOperator(LabeledOperator op);

  /// Cheap validation only (Hermiticity and trace); for operators that are
  /// positive by construction.
  static DensityOperator trusted(LabeledOperator op);

  const LabeledOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  const LabeledDims& dims() const { return op_.dims(); }

  static DensityOperator maximally_mixed(const LabeledDims& dims);
  static DensityOperator basis(const LabeledDims& dims, std::size_t index);

 private:
  struct TrustTag {};
  DensityOperator(LabeledOperator op, TrustTag);
  LabeledOperator op_;
};

/// Normalized state vector with labeled factors.
class PureState {
 public:
  PureState(Vector amplitudes, LabeledDims dims);

  const Vector& amplitudes() const { return amplitudes_; }
  const LabeledDims& dims() const { return dims_; }

  LabeledOperator projector() const;
  DensityOperator density() const;

  static PureState basis(const LabeledDims& dims, std::size_t index);

 private:
  Vector amplitudes_;
  LabeledDims dims_;
};

/// Real spectrum (descending) and orthonormal eigenvectors as columns.
struct EigenSystem {
  RealVector values;
  Matrix vectors;
};

LabeledOperator kron(const LabeledOperator& a, const LabeledOperator& b);
PureState kron(const PureState& a, const PureState& b);

LabeledOperator permute(const LabeledOperator& a,
                        std::span<const std::string> new_order);
PureState permute(const PureState& a, std::span<const std::string> new_order);

/// Keeps `keep`, in `a`'s original relative order.
LabeledOperator partial_trace(const LabeledOperator& a,
                              std::span<const std::string> keep);
DensityOperator partial_trace(const DensityOperator& a,
                              std::span<const std::string> keep);
DensityOperator partial_trace(const PureState& a,
                              std::span<const std::string> keep);

LabeledOperator partial_transpose(const LabeledOperator& a,
                                  std::span<const std::string> subset);

/// Cyclic complex Jacobi on a Hermitian matrix. The input is symmetrized
/// first; deviations beyond kHerm are rejected.
EigenSystem herm_eig(const Matrix& a);
EigenSystem herm_eig(const LabeledOperator& a);
/// Same iteration without accumulating eigenvectors.
RealVector herm_eigenvalues(const Matrix& a);

/// (1/sqrt d) sum_i |ii> on [label_a, label_b].
PureState max_entangled(std::size_t d, const std::string& label_a = "X",
                        const std::string& label_b = "Xbar");

/// Purification on rho's labels followed by `purifier` of dimension rank(rho).
PureState purify(const DensityOperator& rho, const std::string& purifier = "R");

/// Merges consecutive labels `parts` (in that order) into one factor named
/// `merged`; the operator is reordered first when needed.
LabeledOperator merge_labels(const LabeledOperator& a,
                             std::span<const std::string> parts,
                             const std::string& merged);

// Local linear maps. `m` / `left` / `right` are out_dims.total() x
// in-total matrices acting on the factors `in_labels` (in that order). The
// output factors take the position of the first input factor; the other
// factors keep their relative order.
PureState apply_local(const PureState& s, const Matrix& m,
                      std::span<const std::string> in_labels,
                      const LabeledDims& out_dims);
/// (L (x) I) X (R (x) I)^dagger.
LabeledOperator apply_local(const LabeledOperator& x, const Matrix& left,
                            const Matrix& right,
                            std::span<const std::string> in_labels,
                            const LabeledDims& out_dims);
/// Same as above, but without renormalization checks; amplitudes may have
/// any norm. Used by tomography where maps are not trace preserving.
Vector apply_local_raw(const Vector& v, const LabeledDims& dims,
                       const Matrix& m, std::span<const std::string> in_labels,
                       const LabeledDims& out_dims, LabeledDims* result_dims);

double max_abs_diff(const Matrix& a, const Matrix& b);
/// Trace norm of a Hermitian difference.
double trace_norm_hermitian(const Matrix& a);
bool is_hermitian(const Matrix& a, double tolerance);

}  // namespace qcausal
