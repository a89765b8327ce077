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

#include <cstdint>
#include <string>
#include <vector>

#include "qcausal/rng.hpp"
#include "qcausal/tensor.hpp"

namespace qcausal {

enum class ChannelKind { Cptp, Cptni };

/// X -> L X R^dagger. A Kraus operator is the term with L == R.
struct MapTerm {
  Matrix left;
  Matrix right;
};

/// Linear map in generalized operator-sum form. Need not be positive; used
/// for operator-basis tomography where the slot inputs are basis maps.
struct LinearMap {
  LabeledDims in_dims;
  LabeledDims out_dims;
  std::vector<MapTerm> terms;
};

class KrausChannel {
 public:
  KrausChannel(LabeledDims in_dims, LabeledDims out_dims, std::vector<Matrix> kraus,
               ChannelKind kind = ChannelKind::Cptp);

  static KrausChannel unitary(LabeledDims in_dims, LabeledDims out_dims, Matrix u);
  /// Wire between equally sized systems.
  static KrausChannel identity(LabeledDims in_dims, LabeledDims out_dims);

  const LabeledDims& in_dims() const { return in_dims_; }
  const LabeledDims& out_dims() const { return out_dims_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  ChannelKind kind() const { return kind_; }

  LinearMap as_map() const;

 private:
  LabeledDims in_dims_;
  LabeledDims out_dims_;
  std::vector<Matrix> kraus_;
  ChannelKind kind_;
};

/// Choi operator on in (x) out. Input labels that clash with output labels
/// carry an "_in" suffix inside `op`.
class ChoiOperator {
 public:
  ChoiOperator(LabeledOperator op, LabeledDims in_dims, LabeledDims out_dims,
               ChannelKind kind = ChannelKind::Cptp);

  const LabeledOperator& op() const { return op_; }
  const LabeledDims& in_dims() const { return in_dims_; }
  const LabeledDims& out_dims() const { return out_dims_; }

 private:
  LabeledOperator op_;
  LabeledDims in_dims_;
  LabeledDims out_dims_;
};

/// Labels used for the input copy inside a Choi operator.
LabeledDims choi_input_dims(const LabeledDims& in_dims, const LabeledDims& out_dims);

/// sum_i |i> (x) t|i>, unnormalized, ordered [in, out].
Vector cj_vector(const Matrix& t);

ChoiOperator choi_from_kraus(const KrausChannel& c);

/// Acts on the subsystems named by c.in_dims(); other factors are untouched.
DensityOperator apply_channel(const KrausChannel& c, const DensityOperator& rho);
LabeledOperator apply_map(const LinearMap& map, const LabeledOperator& x);

struct Dilation {
  Matrix isometry;  // rows indexed (out, env), env least significant
  std::size_t env_dim = 1;
};

Dilation stinespring(const KrausChannel& c);

/// Extends an isometry V (n x m, n = m * ancilla_dim) to a unitary W with
/// W (|i> (x) |0>) = V|i>. The complement comes from a Householder QR of V.
Matrix complete_to_unitary(const Matrix& isometry, std::size_t ancilla_dim);

/// Ginibre matrix orthonormalized by QR with the diagonal phase fix.
Matrix haar_unitary(std::size_t d, Rng& rng);
Matrix haar_unitary(std::size_t d, std::uint64_t seed);

/// Wishart-style G G^dagger / Tr with G of shape d x rank.
DensityOperator random_density(const LabeledDims& dims, std::size_t rank, Rng& rng);
DensityOperator random_density(std::size_t d, std::size_t rank, std::uint64_t seed);
PureState random_pure(const LabeledDims& dims, Rng& rng);

/// Random CPTP channel from a Haar isometry in -> out (x) env.
KrausChannel random_channel(LabeledDims in_dims, LabeledDims out_dims,
                            std::size_t kraus_count, Rng& rng);

struct FactorizationDims {
  std::size_t b1 = 1;
  std::size_t q1 = 1;
  std::size_t f = 1;
  std::size_t q2 = 1;
};

/// rho -> Tr_F U [omega_B1 (x) rho] U^dagger for U : B1 (x) Q1 -> F (x) Q2.
KrausChannel completely_factorizable(const Matrix& u2, const FactorizationDims& dims,
                                     const std::string& in_label = "Q1",
                                     const std::string& out_label = "Q2");

}  // namespace qcausal
