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

#include <functional>
#include <optional>
#include <string>

#include "qcausal/channels.hpp"
#include "qcausal/tensor.hpp"

namespace qcausal {

/// Subsystem names used throughout the process layer.
namespace label {
inline const std::string kA0 = "A0";
inline const std::string kA1 = "A1";
inline const std::string kB0 = "B0";
inline const std::string kB1 = "B1";
inline const std::string kF = "F";
inline const std::string kP = "P";
inline const std::string kE0 = "E0";
inline const std::string kE1 = "E1";
inline const std::string kE2 = "E2";
inline const std::string kQ0 = "Q0";
inline const std::string kQ1 = "Q1";
inline const std::string kQ2 = "Q2";
inline const std::string kA1Bar = "A1bar";
inline const std::string kB1Bar = "B1bar";
inline const std::string kT0 = "T0";
inline const std::string kT1 = "T1";
inline const std::string kC1 = "C1";
}  // namespace label

enum class CausalOrder { AThenB, BThenA };

std::string to_string(CausalOrder order);

/// Slot labels in temporal order: first party's input/output, then second's.
struct SlotOrder {
  std::string first_in, first_out, second_in, second_out;
};
SlotOrder slot_order(CausalOrder order);

/// Fixed-order comb: state on (first_in, E0), then
/// lambda1 : (first_out, E0) -> (second_in, E1) and
/// lambda2 : (second_out, E1) -> (F, E2). Environment factors may be 1-dim
/// but must be present.
class FixedOrderComb {
 public:
  FixedOrderComb(CausalOrder order, DensityOperator rho, KrausChannel lambda1,
                 KrausChannel lambda2);

  CausalOrder order() const { return order_; }
  const DensityOperator& rho() const { return rho_; }
  const KrausChannel& lambda1() const { return lambda1_; }
  const KrausChannel& lambda2() const { return lambda2_; }
  /// Dimension of a slot, future or environment factor.
  std::size_t dim(const std::string& label) const;

 private:
  CausalOrder order_;
  DensityOperator rho_;
  KrausChannel lambda1_;
  KrausChannel lambda2_;
};

/// Plain wires: rho on the first party's input, first output -> second
/// input, second output -> F. Environments are 1-dimensional.
FixedOrderComb wire_comb(CausalOrder order, const DensityOperator& first_input_state);

/// Matrix between labeled spaces.
struct LabeledMap {
  LabeledDims in_dims;
  LabeledDims out_dims;
  Matrix matrix;
};

/// Pure-state / unitary form of a fixed-order comb: psi on (first_in, Q0),
/// u1 : (first_out, Q0) -> (second_in, Q1), u2 : (second_out, Q1) -> (F, Q2).
class PurifiedComb {
 public:
  PurifiedComb(CausalOrder order, PureState psi, LabeledMap u1, LabeledMap u2);

  CausalOrder order() const { return order_; }
  const PureState& psi() const { return psi_; }
  const LabeledMap& u1() const { return u1_; }
  const LabeledMap& u2() const { return u2_; }
  std::size_t dim(const std::string& label) const;

 private:
  CausalOrder order_;
  PureState psi_;
  LabeledMap u1_;
  LabeledMap u2_;
};

/// Output state on F. `a` must map A0 -> A1 and `b` B0 -> B1.
DensityOperator comb_apply(const FixedOrderComb& c, const KrausChannel& a,
                           const KrausChannel& b);
DensityOperator purified_apply(const PurifiedComb& c, const KrausChannel& a,
                               const KrausChannel& b);

/// Purification of the initial state and Stinespring dilations of both
/// channels, completed to unitaries and rewired so that all ancillas sit in
/// the environments Q0, Q1, Q2.
PurifiedComb purify_comb(const FixedOrderComb& c);

/// Process matrix on P (x) A0 (x) A1 (x) B0 (x) B1 (x) F, stored in that order.
class ProcessMatrix {
 public:
  explicit ProcessMatrix(LabeledOperator w);

  const LabeledOperator& op() const { return w_; }
  const Matrix& matrix() const { return w_.matrix(); }
  const LabeledDims& dims() const { return w_.dims(); }
  std::size_t dim(const std::string& label) const { return w_.dims().dim(label); }

 private:
  LabeledOperator w_;
};

enum class FutureMode { Full, TraceControl, TraceTarget };

std::string to_string(FutureMode mode);

/// Quantum switch with control sqrt(lambda)|0> + sqrt(1 - lambda)|1>.
class SwitchSpec {
 public:
  explicit SwitchSpec(double lambda, FutureMode mode = FutureMode::Full);
  SwitchSpec(double lambda, DensityOperator target, FutureMode mode);

  double lambda() const { return lambda_; }
  const DensityOperator& target() const { return target_; }
  FutureMode mode() const { return mode_; }
  std::size_t future_dim() const { return mode_ == FutureMode::Full ? 4 : 2; }

 private:
  double lambda_;
  DensityOperator target_;
  FutureMode mode_;
};

/// Output on [T1, C1], [T1] or [C1] depending on the future mode.
DensityOperator switch_apply(const SwitchSpec& s, const KrausChannel& a,
                             const KrausChannel& b);

/// Evaluates a process on generalized operator-sum maps, returning the
/// (possibly non-Hermitian) output on F.
using ProcessEvaluator = std::function<Matrix(const LinearMap& a, const LinearMap& b)>;

/// W from the outputs on all Choi basis elements |x><y| of both slots.
ProcessMatrix process_tomography(std::size_t dim_a0, std::size_t dim_a1, std::size_t dim_b0,
                                 std::size_t dim_b1, std::size_t dim_f,
                                 const ProcessEvaluator& evaluate);

ProcessMatrix process_matrix_of(const FixedOrderComb& c);
ProcessMatrix process_matrix_of(const PurifiedComb& c);
ProcessMatrix process_matrix_of(const SwitchSpec& s);

/// Tr_AB[W^{T_AB} (I_P (x) J (x) I_F)] for J on (A0, A1, B0, B1) followed by
/// any extra factors K; result ordered (P, K..., F).
LabeledOperator contract_process(const ProcessMatrix& w, const LabeledOperator& j);

/// Choi of the induced P -> F channel; throws if it is not CPTP.
ChoiOperator apply_process(const ProcessMatrix& w, const ChoiOperator& ja,
                           const ChoiOperator& jb);

ProcessMatrix mix_processes(double q, const ProcessMatrix& w1, const ProcessMatrix& w2);

enum class Backend { Statevector, Contraction };

std::string to_string(Backend backend);

/// State after feeding each slot output with half of a maximally entangled
/// pair and storing each slot input. Labels: A0, A1bar, B0, B1bar, F.
class InterventionalState {
 public:
  /// Checks that the A1bar (x) B1bar marginal is maximally mixed.
  InterventionalState(DensityOperator tau, std::size_t dim_a1, std::size_t dim_b1,
                      std::size_t dim_f);

  const DensityOperator& tau() const { return tau_; }
  std::size_t dim_a1() const { return dim_a1_; }
  std::size_t dim_b1() const { return dim_b1_; }
  std::size_t dim_f() const { return dim_f_; }

 private:
  DensityOperator tau_;
  std::size_t dim_a1_;
  std::size_t dim_b1_;
  std::size_t dim_f_;
};

InterventionalState interventional_state(const PurifiedComb& c, Backend backend);
/// Statevector goes through purify_comb.
InterventionalState interventional_state(const FixedOrderComb& c, Backend backend);
InterventionalState interventional_state(const SwitchSpec& s, Backend backend);
/// Contraction only; statevector throws.
InterventionalState interventional_state(const ProcessMatrix& w, Backend backend);

/// Canonical label order of an interventional state.
const std::vector<std::string>& interventional_labels();

}  // namespace qcausal
