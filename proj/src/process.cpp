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

#include "qcausal/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

namespace qcausal {

namespace {

constexpr double kUnitarity = 1e-10;

void expect_labels(const LabeledDims& dims, std::vector<std::string> expected,
                   const std::string& what) {
  std::vector<std::string> got = dims.labels();
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  if (got != expected) {
    std::string list;
    for (const auto& e : expected) list += (list.empty() ? "" : ", ") + e;
    throw Error(what + ": expected labels {" + list + "}, got " + to_string(dims));
  }
}

void expect_same_dim(const LabeledDims& a, const LabeledDims& b, const std::string& label,
                     const std::string& what) {
  if (a.dim(label) != b.dim(label)) {
    throw Error(what + ": dimension of " + label + " does not match between stages");
  }
}

/// A slot map must act exactly in_label -> out_label with the given dims.
void check_slot(const LabeledDims& in, const LabeledDims& out, const std::string& in_label,
                const std::string& out_label, std::size_t din, std::size_t dout,
                const std::string& what) {
  if (in != LabeledDims{{in_label, din}} || out != LabeledDims{{out_label, dout}}) {
    std::ostringstream msg;
    msg << what << ": slot map must be " << in_label << "(" << din << ") -> " << out_label
        << "(" << dout << "), got " << to_string(in) << " -> " << to_string(out);
    throw Error(msg.str());
  }
}

void check_unitary(const Matrix& u, const std::string& what) {
  if (u.rows() != u.cols()) throw Error(what + ": matrix is not square");
  const double dev = max_abs_diff(u.adjoint() * u, Matrix::Identity(u.rows(), u.cols()));
  if (dev > kUnitarity) throw Error(what + ": matrix is not unitary");
}

Matrix kron_matrix(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Tr_rest |l><r| on the factors `keep`, ordered as given.
LabeledOperator reduced_outer(const Vector& l, const Vector& r, const LabeledDims& dims,
                              const std::vector<std::string>& keep) {
  const LabeledDims kept = dims.select(keep);
  const LabeledDims rest = dims.without(keep);
  std::vector<std::size_t> perm;
  for (const auto& s : kept) perm.push_back(dims.index_of(s.label));
  for (const auto& s : rest) perm.push_back(dims.index_of(s.label));
  const auto all_dims = dims.dims();
  const auto idx = permutation_indices(all_dims, perm);
  const auto dk = static_cast<Eigen::Index>(kept.total());
  const auto dr = static_cast<Eigen::Index>(rest.total());
  Matrix ml(dk, dr);
  Matrix mr(dk, dr);
  for (Eigen::Index i = 0; i < dk; ++i) {
    for (Eigen::Index j = 0; j < dr; ++j) {
      const auto n = idx[static_cast<std::size_t>(i * dr + j)];
      ml(i, j) = l(static_cast<Eigen::Index>(n));
      mr(i, j) = r(static_cast<Eigen::Index>(n));
    }
  }
  return LabeledOperator(ml * mr.adjoint(), kept);
}

Vector permute_vector(const Vector& v, const LabeledDims& dims,
                      const std::vector<std::string>& order) {
  std::vector<std::size_t> perm;
  for (const auto& name : order) perm.push_back(dims.index_of(name));
  if (perm.size() != dims.size()) throw Error("permute_vector: order is not a permutation");
  const auto all_dims = dims.dims();
  const auto idx = permutation_indices(all_dims, perm);
  Vector out(v.size());
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    out(n) = v(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(n)]));
  }
  return out;
}

struct Slots {
  const LinearMap& first;
  const LinearMap& second;
};

Slots order_slots(CausalOrder order, const LinearMap& a, const LinearMap& b) {
  if (order == CausalOrder::AThenB) return {a, b};
  return {b, a};
}

Matrix evaluate_comb(const FixedOrderComb& c, const LinearMap& a, const LinearMap& b) {
  const Slots slots = order_slots(c.order(), a, b);
  LabeledOperator x = c.rho().op();
  x = apply_map(slots.first, x);
  x = apply_map(c.lambda1().as_map(), x);
  x = apply_map(slots.second, x);
  x = apply_map(c.lambda2().as_map(), x);
  const std::vector<std::string> keep{label::kF};
  return partial_trace(x, keep).matrix();
}

Matrix evaluate_purified(const PurifiedComb& c, const LinearMap& a, const LinearMap& b) {
  const Slots slots = order_slots(c.order(), a, b);
  const auto first_in = slots.first.in_dims.labels();
  const auto second_in = slots.second.in_dims.labels();
  const auto u1_in = c.u1().in_dims.labels();
  const auto u2_in = c.u2().in_dims.labels();
  const auto df = static_cast<Eigen::Index>(c.dim(label::kF));
  Matrix out = Matrix::Zero(df, df);
  const std::vector<std::string> keep{label::kF};

  for (const auto& t1 : slots.first.terms) {
    LabeledDims d1, d2;
    Vector l = apply_local_raw(c.psi().amplitudes(), c.psi().dims(), t1.left, first_in,
                               slots.first.out_dims, &d1);
    Vector r = apply_local_raw(c.psi().amplitudes(), c.psi().dims(), t1.right, first_in,
                               slots.first.out_dims, &d1);
    l = apply_local_raw(l, d1, c.u1().matrix, u1_in, c.u1().out_dims, &d2);
    r = apply_local_raw(r, d1, c.u1().matrix, u1_in, c.u1().out_dims, &d2);
    for (const auto& t2 : slots.second.terms) {
      LabeledDims d3, d4;
      Vector l2 = apply_local_raw(l, d2, t2.left, second_in, slots.second.out_dims, &d3);
      Vector r2 = apply_local_raw(r, d2, t2.right, second_in, slots.second.out_dims, &d3);
      l2 = apply_local_raw(l2, d3, c.u2().matrix, u2_in, c.u2().out_dims, &d4);
      r2 = apply_local_raw(r2, d3, c.u2().matrix, u2_in, c.u2().out_dims, &d4);
      out += reduced_outer(l2, r2, d4, keep).matrix();
    }
  }
  return out;
}

/// Output of the switch on [T1, C1] before any future-mode trace.
Matrix switch_full_output(const SwitchSpec& s, const LinearMap& a, const LinearMap& b) {
  const double lam = s.lambda();
  Vector phi(2);
  phi << std::sqrt(lam), std::sqrt(1.0 - lam);
  const Matrix input = kron_matrix(s.target().matrix(), phi * phi.adjoint());
  Matrix p0 = Matrix::Zero(2, 2);
  Matrix p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Matrix out = Matrix::Zero(4, 4);
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      const Matrix left = kron_matrix(tb.left * ta.left, p0) + kron_matrix(ta.left * tb.left, p1);
      const Matrix right =
          kron_matrix(tb.right * ta.right, p0) + kron_matrix(ta.right * tb.right, p1);
      out.noalias() += left * input * right.adjoint();
    }
  }
  return out;
}

LabeledOperator switch_output(const SwitchSpec& s, const LinearMap& a, const LinearMap& b) {
  LabeledOperator full(switch_full_output(s, a, b),
                       LabeledDims{{label::kT1, 2}, {label::kC1, 2}});
  switch (s.mode()) {
    case FutureMode::Full:
      return full;
    case FutureMode::TraceControl: {
      const std::vector<std::string> keep{label::kT1};
      return partial_trace(full, keep);
    }
    case FutureMode::TraceTarget: {
      const std::vector<std::string> keep{label::kC1};
      return partial_trace(full, keep);
    }
  }
  throw Error("switch: unknown future mode");
}

/// Single-term map |k><i| . |l><j| whose Choi is |x><y| with x = (i, k), y = (j, l).
LinearMap basis_map(const std::string& in_label, std::size_t din, const std::string& out_label,
                    std::size_t dout, std::size_t x, std::size_t y) {
  const auto i = static_cast<Eigen::Index>(x / dout);
  const auto k = static_cast<Eigen::Index>(x % dout);
  const auto j = static_cast<Eigen::Index>(y / dout);
  const auto l = static_cast<Eigen::Index>(y % dout);
  Matrix left = Matrix::Zero(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(din));
  Matrix right = left;
  left(k, i) = 1.0;
  right(l, j) = 1.0;
  return LinearMap{LabeledDims{{in_label, din}}, LabeledDims{{out_label, dout}},
                   {MapTerm{std::move(left), std::move(right)}}};
}

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  Complex value;
};

/// Core of the link product. Entries index (slots, K) with slot index most
/// significant; the result is ordered (P, K, F).
LabeledOperator contract_entries(const ProcessMatrix& w, const std::vector<SparseEntry>& entries,
                                 const LabeledDims& k_dims) {
  const std::size_t dp = w.dim(label::kP);
  const std::size_t df = w.dim(label::kF);
  const std::size_t dx =
      w.dim(label::kA0) * w.dim(label::kA1) * w.dim(label::kB0) * w.dim(label::kB1);
  const std::size_t dk = k_dims.total();
  LabeledDims out_dims = LabeledDims{{label::kP, dp}}.concat(k_dims).concat(
      LabeledDims{{label::kF, df}});
  const auto n = static_cast<Eigen::Index>(dp * dk * df);
  const auto edf = static_cast<Eigen::Index>(df);
  Matrix r = Matrix::Zero(n, n);
  const Matrix& wm = w.matrix();
  for (const auto& e : entries) {
    const std::size_t y = e.row / dk, k = e.row % dk;
    const std::size_t x = e.col / dk, k2 = e.col % dk;
    for (std::size_t p = 0; p < dp; ++p) {
      for (std::size_t p2 = 0; p2 < dp; ++p2) {
        const auto rr = static_cast<Eigen::Index>((p * dk + k) * df);
        const auto rc = static_cast<Eigen::Index>((p2 * dk + k2) * df);
        const auto wr = static_cast<Eigen::Index>((p * dx + y) * df);
        const auto wc = static_cast<Eigen::Index>((p2 * dx + x) * df);
        r.block(rr, rc, edf, edf) += e.value * wm.block(wr, wc, edf, edf);
      }
    }
  }
  return LabeledOperator(std::move(r), std::move(out_dims));
}

const std::vector<std::string>& canonical_process_labels() {
  static const std::vector<std::string> labels{label::kP,  label::kA0, label::kA1,
                                               label::kB0, label::kB1, label::kF};
  return labels;
}

InterventionalState finish_state(const LabeledOperator& tau, std::size_t dim_a1,
                                 std::size_t dim_b1, std::size_t dim_f, bool trusted) {
  const LabeledOperator ordered = permute(tau, interventional_labels());
  DensityOperator rho = trusted ? DensityOperator::trusted(ordered) : DensityOperator(ordered);
  return InterventionalState(std::move(rho), dim_a1, dim_b1, dim_f);
}

/// X0 stored in memory, X1 fed with half of a maximally entangled pair; the
/// switch's target wire is named "T" on both sides of the slot.
Matrix switch_intervention() {
  Matrix k = Matrix::Zero(8, 2);
  const double w = 1.0 / std::sqrt(2.0);
  // Output order (T, X0, X1bar), input T.
  for (Eigen::Index t = 0; t < 2; ++t) {
    for (Eigen::Index m = 0; m < 2; ++m) k((m * 2 + t) * 2 + m, t) = w;
  }
  return k;
}

}  // namespace

std::string to_string(CausalOrder order) {
  return order == CausalOrder::AThenB ? "AB" : "BA";
}

SlotOrder slot_order(CausalOrder order) {
  if (order == CausalOrder::AThenB) {
    return {label::kA0, label::kA1, label::kB0, label::kB1};
  }
  return {label::kB0, label::kB1, label::kA0, label::kA1};
}

FixedOrderComb::FixedOrderComb(CausalOrder order, DensityOperator rho, KrausChannel lambda1,
                               KrausChannel lambda2)
    : order_(order),
      rho_(std::move(rho)),
      lambda1_(std::move(lambda1)),
      lambda2_(std::move(lambda2)) {
  const SlotOrder s = slot_order(order_);
  expect_labels(rho_.dims(), {s.first_in, label::kE0}, "FixedOrderComb rho");
  expect_labels(lambda1_.in_dims(), {s.first_out, label::kE0}, "FixedOrderComb lambda1 input");
  expect_labels(lambda1_.out_dims(), {s.second_in, label::kE1},
                "FixedOrderComb lambda1 output");
  expect_labels(lambda2_.in_dims(), {s.second_out, label::kE1},
                "FixedOrderComb lambda2 input");
  expect_labels(lambda2_.out_dims(), {label::kF, label::kE2}, "FixedOrderComb lambda2 output");
  expect_same_dim(rho_.dims(), lambda1_.in_dims(), label::kE0, "FixedOrderComb");
  expect_same_dim(lambda1_.out_dims(), lambda2_.in_dims(), label::kE1, "FixedOrderComb");
  if (lambda1_.kind() != ChannelKind::Cptp || lambda2_.kind() != ChannelKind::Cptp) {
    throw Error("FixedOrderComb: comb channels must be trace preserving");
  }
}

std::size_t FixedOrderComb::dim(const std::string& name) const {
  for (const LabeledDims* d : {&rho_.dims(), &lambda1_.in_dims(), &lambda1_.out_dims(),
                               &lambda2_.in_dims(), &lambda2_.out_dims()}) {
    if (d->contains(name)) return d->dim(name);
  }
  throw Error("FixedOrderComb: unknown label " + name);
}

FixedOrderComb wire_comb(CausalOrder order, const DensityOperator& first_input_state) {
  const SlotOrder s = slot_order(order);
  if (first_input_state.dims().size() != 1 || first_input_state.dims()[0].label != s.first_in) {
    throw Error("wire_comb: state must live on " + s.first_in);
  }
  const std::size_t d = first_input_state.dims()[0].dim;
  const LabeledDims e0{{label::kE0, 1}};
  DensityOperator rho =
      DensityOperator::trusted(kron(first_input_state.op(), LabeledOperator::identity(e0)));
  KrausChannel l1 = KrausChannel::identity(LabeledDims{{s.first_out, d}, {label::kE0, 1}},
                                           LabeledDims{{s.second_in, d}, {label::kE1, 1}});
  KrausChannel l2 = KrausChannel::identity(LabeledDims{{s.second_out, d}, {label::kE1, 1}},
                                           LabeledDims{{label::kF, d}, {label::kE2, 1}});
  return FixedOrderComb(order, std::move(rho), std::move(l1), std::move(l2));
}

PurifiedComb::PurifiedComb(CausalOrder order, PureState psi, LabeledMap u1, LabeledMap u2)
    : order_(order), psi_(std::move(psi)), u1_(std::move(u1)), u2_(std::move(u2)) {
  const SlotOrder s = slot_order(order_);
  expect_labels(psi_.dims(), {s.first_in, label::kQ0}, "PurifiedComb psi");
  expect_labels(u1_.in_dims, {s.first_out, label::kQ0}, "PurifiedComb u1 input");
  expect_labels(u1_.out_dims, {s.second_in, label::kQ1}, "PurifiedComb u1 output");
  expect_labels(u2_.in_dims, {s.second_out, label::kQ1}, "PurifiedComb u2 input");
  expect_labels(u2_.out_dims, {label::kF, label::kQ2}, "PurifiedComb u2 output");
  expect_same_dim(psi_.dims(), u1_.in_dims, label::kQ0, "PurifiedComb");
  expect_same_dim(u1_.out_dims, u2_.in_dims, label::kQ1, "PurifiedComb");
  for (const LabeledMap* u : {&u1_, &u2_}) {
    if (u->in_dims.total() != u->out_dims.total()) {
      throw Error("PurifiedComb: unitary input and output dimensions differ");
    }
    if (static_cast<std::size_t>(u->matrix.rows()) != u->out_dims.total() ||
        static_cast<std::size_t>(u->matrix.cols()) != u->in_dims.total()) {
      throw Error("PurifiedComb: matrix shape does not match its labels");
    }
    check_unitary(u->matrix, "PurifiedComb");
  }
}

std::size_t PurifiedComb::dim(const std::string& name) const {
  for (const LabeledDims* d :
       {&psi_.dims(), &u1_.in_dims, &u1_.out_dims, &u2_.in_dims, &u2_.out_dims}) {
    if (d->contains(name)) return d->dim(name);
  }
  throw Error("PurifiedComb: unknown label " + name);
}

DensityOperator comb_apply(const FixedOrderComb& c, const KrausChannel& a,
                           const KrausChannel& b) {
  check_slot(a.in_dims(), a.out_dims(), label::kA0, label::kA1, c.dim(label::kA0),
             c.dim(label::kA1), "comb_apply");
  check_slot(b.in_dims(), b.out_dims(), label::kB0, label::kB1, c.dim(label::kB0),
             c.dim(label::kB1), "comb_apply");
  Matrix out = evaluate_comb(c, a.as_map(), b.as_map());
  return DensityOperator::trusted(
      LabeledOperator(std::move(out), LabeledDims{{label::kF, c.dim(label::kF)}}));
}

DensityOperator purified_apply(const PurifiedComb& c, const KrausChannel& a,
                               const KrausChannel& b) {
  check_slot(a.in_dims(), a.out_dims(), label::kA0, label::kA1, c.dim(label::kA0),
             c.dim(label::kA1), "purified_apply");
  check_slot(b.in_dims(), b.out_dims(), label::kB0, label::kB1, c.dim(label::kB0),
             c.dim(label::kB1), "purified_apply");
  Matrix out = evaluate_purified(c, a.as_map(), b.as_map());
  return DensityOperator::trusted(
      LabeledOperator(std::move(out), LabeledDims{{label::kF, c.dim(label::kF)}}));
}

namespace {

struct CompletedDilation {
  Matrix unitary;       // (in..., S) -> (out..., R)
  std::size_t s_dim;    // ancilla prepared in |0>
  std::size_t r_dim;    // discarded environment
};

/// Stinespring isometry padded so that it completes to a square unitary.
CompletedDilation complete_dilation(const KrausChannel& c) {
  const Dilation dil = stinespring(c);
  const std::size_t din = c.in_dims().total();
  const std::size_t dout = c.out_dims().total();
  const std::size_t r = dil.env_dim;
  // Smallest r2 >= r with din | dout * r2.
  const std::size_t step = din / std::gcd(din, dout);
  const std::size_t r2 = (r + step - 1) / step * step;
  const std::size_t s = dout * r2 / din;
  const auto rows = static_cast<Eigen::Index>(dout * r2);
  Matrix v = Matrix::Zero(rows, static_cast<Eigen::Index>(din));
  for (std::size_t o = 0; o < dout; ++o) {
    for (std::size_t k = 0; k < r; ++k) {
      v.row(static_cast<Eigen::Index>(o * r2 + k)) = dil.isometry.row(static_cast<Eigen::Index>(o * r + k));
    }
  }
  return {complete_to_unitary(v, s), s, r2};
}

/// Matrix of `m` acting on `in_labels` inside `space`, re-expressed as a map
/// from `space` to `out_order`.
Matrix embed_local(const Matrix& m, const LabeledDims& space,
                   const std::vector<std::string>& in_labels, const LabeledDims& out_dims,
                   const std::vector<std::string>& out_order) {
  const auto n = static_cast<Eigen::Index>(space.total());
  Matrix result(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Vector e = Vector::Zero(n);
    e(col) = 1.0;
    LabeledDims d;
    const Vector v = apply_local_raw(e, space, m, in_labels, out_dims, &d);
    result.col(col) = permute_vector(v, d, out_order);
  }
  return result;
}

}  // namespace

PurifiedComb purify_comb(const FixedOrderComb& c) {
  const SlotOrder s = slot_order(c.order());
  const KrausChannel& l1 = c.lambda1();
  const KrausChannel& l2 = c.lambda2();
  const CompletedDilation w1 = complete_dilation(l1);
  const CompletedDilation w2 = complete_dilation(l2);

  const PureState phi0 = purify(c.rho(), "P0");
  const std::size_t dp0 = phi0.dims().dim("P0");
  const LabeledDims s1{{"S1", w1.s_dim}};
  const LabeledDims s2{{"S2", w2.s_dim}};
  PureState psi_raw = kron(kron(phi0, PureState::basis(s1, 0)), PureState::basis(s2, 0));
  const std::vector<std::string> psi_order{s.first_in, label::kE0, "P0", "S1", "S2"};
  psi_raw = permute(psi_raw, psi_order);
  const std::size_t dq0 = c.dim(label::kE0) * dp0 * w1.s_dim * w2.s_dim;
  PureState psi(psi_raw.amplitudes(),
                LabeledDims{{s.first_in, c.dim(s.first_in)}, {label::kQ0, dq0}});

  // U1 = W1 (x) I_{P0, S2} on (X1, E0, P0, S1, S2) -> (Y0, E1, R1, S2, P0).
  const LabeledDims u1_space{{s.first_out, c.dim(s.first_out)},
                             {label::kE0, c.dim(label::kE0)},
                             {"P0", dp0},
                             {"S1", w1.s_dim},
                             {"S2", w2.s_dim}};
  std::vector<std::string> w1_in = l1.in_dims().labels();
  w1_in.push_back("S1");
  const LabeledDims w1_out = l1.out_dims().concat(LabeledDims{{"R1", w1.r_dim}});
  const std::vector<std::string> u1_order{s.second_in, label::kE1, "R1", "S2", "P0"};
  Matrix u1 = embed_local(w1.unitary, u1_space, w1_in, w1_out, u1_order);
  const std::size_t dq1 = c.dim(label::kE1) * w1.r_dim * w2.s_dim * dp0;

  // U2 = W2 (x) I_{R1, P0} on (Y1, E1, R1, S2, P0) -> (F, E2, R2, R1, P0).
  const LabeledDims u2_space{{s.second_out, c.dim(s.second_out)},
                             {label::kE1, c.dim(label::kE1)},
                             {"R1", w1.r_dim},
                             {"S2", w2.s_dim},
                             {"P0", dp0}};
  std::vector<std::string> w2_in = l2.in_dims().labels();
  w2_in.push_back("S2");
  const LabeledDims w2_out = l2.out_dims().concat(LabeledDims{{"R2", w2.r_dim}});
  const std::vector<std::string> u2_order{label::kF, label::kE2, "R2", "R1", "P0"};
  Matrix u2 = embed_local(w2.unitary, u2_space, w2_in, w2_out, u2_order);
  const std::size_t dq2 = c.dim(label::kE2) * w2.r_dim * w1.r_dim * dp0;

  LabeledMap m1{LabeledDims{{s.first_out, c.dim(s.first_out)}, {label::kQ0, dq0}},
                LabeledDims{{s.second_in, c.dim(s.second_in)}, {label::kQ1, dq1}},
                std::move(u1)};
  LabeledMap m2{LabeledDims{{s.second_out, c.dim(s.second_out)}, {label::kQ1, dq1}},
                LabeledDims{{label::kF, c.dim(label::kF)}, {label::kQ2, dq2}}, std::move(u2)};
  return PurifiedComb(c.order(), std::move(psi), std::move(m1), std::move(m2));
}

ProcessMatrix::ProcessMatrix(LabeledOperator w) {
  expect_labels(w.dims(), canonical_process_labels(), "ProcessMatrix");
  w_ = permute(w, canonical_process_labels());
  if (!is_hermitian(w_.matrix(), tol::kHerm)) throw Error("ProcessMatrix: not Hermitian");
}

std::string to_string(FutureMode mode) {
  switch (mode) {
    case FutureMode::Full:
      return "full";
    case FutureMode::TraceControl:
      return "trace_control";
    case FutureMode::TraceTarget:
      return "trace_target";
  }
  return "unknown";
}

SwitchSpec::SwitchSpec(double lambda, FutureMode mode)
    : SwitchSpec(lambda, DensityOperator::basis(LabeledDims{{label::kT0, 2}}, 0), mode) {}

SwitchSpec::SwitchSpec(double lambda, DensityOperator target, FutureMode mode)
    : lambda_(lambda), target_(std::move(target)), mode_(mode) {
  if (!(lambda_ >= 0.0 && lambda_ <= 1.0)) throw Error("SwitchSpec: lambda outside [0, 1]");
  if (target_.dims() != LabeledDims{{label::kT0, 2}}) {
    throw Error("SwitchSpec: target must be a qubit state on T0");
  }
}

DensityOperator switch_apply(const SwitchSpec& s, const KrausChannel& a,
                             const KrausChannel& b) {
  check_slot(a.in_dims(), a.out_dims(), label::kA0, label::kA1, 2, 2, "switch_apply");
  check_slot(b.in_dims(), b.out_dims(), label::kB0, label::kB1, 2, 2, "switch_apply");
  return DensityOperator::trusted(switch_output(s, a.as_map(), b.as_map()));
}

ProcessMatrix process_tomography(std::size_t dim_a0, std::size_t dim_a1, std::size_t dim_b0,
                                 std::size_t dim_b1, std::size_t dim_f,
                                 const ProcessEvaluator& evaluate) {
  const std::size_t dxa = dim_a0 * dim_a1;
  const std::size_t dxb = dim_b0 * dim_b1;
  const auto n = static_cast<Eigen::Index>(dxa * dxb * dim_f);
  const auto df = static_cast<Eigen::Index>(dim_f);
  Matrix w = Matrix::Zero(n, n);
  for (std::size_t xa = 0; xa < dxa; ++xa) {
    for (std::size_t ya = 0; ya < dxa; ++ya) {
      const LinearMap ma = basis_map(label::kA0, dim_a0, label::kA1, dim_a1, xa, ya);
      for (std::size_t xb = 0; xb < dxb; ++xb) {
        for (std::size_t yb = 0; yb < dxb; ++yb) {
          const LinearMap mb = basis_map(label::kB0, dim_b0, label::kB1, dim_b1, xb, yb);
          const Matrix out = evaluate(ma, mb);
          if (out.rows() != df || out.cols() != df) {
            throw Error("process_tomography: evaluator returned the wrong shape");
          }
          const auto r = static_cast<Eigen::Index>((xa * dxb + xb) * dim_f);
          const auto c = static_cast<Eigen::Index>((ya * dxb + yb) * dim_f);
          w.block(r, c, df, df) = out;
        }
      }
    }
  }
  LabeledDims dims{{label::kP, 1},      {label::kA0, dim_a0}, {label::kA1, dim_a1},
                   {label::kB0, dim_b0}, {label::kB1, dim_b1}, {label::kF, dim_f}};
  return ProcessMatrix(LabeledOperator(std::move(w), std::move(dims)));
}

ProcessMatrix process_matrix_of(const FixedOrderComb& c) {
  return process_tomography(c.dim(label::kA0), c.dim(label::kA1), c.dim(label::kB0),
                            c.dim(label::kB1), c.dim(label::kF),
                            [&c](const LinearMap& a, const LinearMap& b) {
                              return evaluate_comb(c, a, b);
                            });
}

ProcessMatrix process_matrix_of(const PurifiedComb& c) {
  return process_tomography(c.dim(label::kA0), c.dim(label::kA1), c.dim(label::kB0),
                            c.dim(label::kB1), c.dim(label::kF),
                            [&c](const LinearMap& a, const LinearMap& b) {
                              return evaluate_purified(c, a, b);
                            });
}

ProcessMatrix process_matrix_of(const SwitchSpec& s) {
  return process_tomography(2, 2, 2, 2, s.future_dim(),
                            [&s](const LinearMap& a, const LinearMap& b) {
                              return switch_output(s, a, b).matrix();
                            });
}

LabeledOperator contract_process(const ProcessMatrix& w, const LabeledOperator& j) {
  const std::vector<std::string> slots{label::kA0, label::kA1, label::kB0, label::kB1};
  for (const auto& name : slots) {
    if (!j.dims().contains(name) || j.dims().dim(name) != w.dim(name)) {
      throw Error("contract_process: operator dims " + to_string(j.dims()) +
                  " do not match the process slots");
    }
  }
  const LabeledDims k_dims = j.dims().without(slots);
  std::vector<std::string> order = slots;
  for (const auto& s : k_dims) order.push_back(s.label);
  const LabeledOperator jp = permute(j, order);
  std::vector<SparseEntry> entries;
  const Matrix& m = jp.matrix();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (m(r, c) != Complex(0.0)) {
        entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), m(r, c)});
      }
    }
  }
  return contract_entries(w, entries, k_dims);
}

ChoiOperator apply_process(const ProcessMatrix& w, const ChoiOperator& ja,
                           const ChoiOperator& jb) {
  check_slot(ja.in_dims(), ja.out_dims(), label::kA0, label::kA1, w.dim(label::kA0),
             w.dim(label::kA1), "apply_process");
  check_slot(jb.in_dims(), jb.out_dims(), label::kB0, label::kB1, w.dim(label::kB0),
             w.dim(label::kB1), "apply_process");
  const LabeledOperator r = contract_process(w, kron(ja.op(), jb.op()));
  const LabeledDims in{{label::kP, w.dim(label::kP)}};
  const LabeledDims out{{label::kF, w.dim(label::kF)}};
  return ChoiOperator(r, in, out);
}

ProcessMatrix mix_processes(double q, const ProcessMatrix& w1, const ProcessMatrix& w2) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("mix_processes: q outside [0, 1]");
  if (w1.dims() != w2.dims()) throw Error("mix_processes: process dimensions differ");
  Matrix m = q * w1.matrix() + (1.0 - q) * w2.matrix();
  return ProcessMatrix(LabeledOperator(std::move(m), w1.dims()));
}

std::string to_string(Backend backend) {
  return backend == Backend::Statevector ? "statevector" : "contraction";
}

const std::vector<std::string>& interventional_labels() {
  static const std::vector<std::string> labels{label::kA0, label::kA1Bar, label::kB0,
                                               label::kB1Bar, label::kF};
  return labels;
}

InterventionalState::InterventionalState(DensityOperator tau, std::size_t dim_a1,
                                         std::size_t dim_b1, std::size_t dim_f)
    : tau_(std::move(tau)), dim_a1_(dim_a1), dim_b1_(dim_b1), dim_f_(dim_f) {
  if (tau_.dims().labels() != interventional_labels()) {
    throw Error("InterventionalState: labels must be A0, A1bar, B0, B1bar, F; got " +
                to_string(tau_.dims()));
  }
  if (tau_.dims().dim(label::kA1Bar) != dim_a1 || tau_.dims().dim(label::kB1Bar) != dim_b1 ||
      tau_.dims().dim(label::kF) != dim_f) {
    throw Error("InterventionalState: recorded dimensions do not match the state");
  }
  const std::vector<std::string> partners{label::kA1Bar, label::kB1Bar};
  const Matrix marginal = partial_trace(tau_.op(), partners).matrix();
  const auto d = static_cast<Eigen::Index>(dim_a1 * dim_b1);
  const Matrix omega = Matrix::Identity(d, d) / static_cast<double>(d);
  if (max_abs_diff(marginal, omega) > 1e-9) {
    throw Error("InterventionalState: A1bar B1bar marginal is not maximally mixed");
  }
}

InterventionalState interventional_state(const PurifiedComb& c, Backend backend) {
  const std::size_t da1 = c.dim(label::kA1);
  const std::size_t db1 = c.dim(label::kB1);
  const std::size_t df = c.dim(label::kF);
  if (backend == Backend::Contraction) {
    return interventional_state(process_matrix_of(c), Backend::Contraction);
  }
  const SlotOrder s = slot_order(c.order());
  const std::string first_bar = s.first_out + "bar";
  const std::string second_bar = s.second_out + "bar";
  PureState state =
      kron(c.psi(), max_entangled(c.dim(s.first_out), s.first_out, first_bar));
  state = apply_local(state, c.u1().matrix, c.u1().in_dims.labels(), c.u1().out_dims);
  state = kron(state, max_entangled(c.dim(s.second_out), s.second_out, second_bar));
  state = apply_local(state, c.u2().matrix, c.u2().in_dims.labels(), c.u2().out_dims);
  const LabeledOperator tau =
      reduced_outer(state.amplitudes(), state.amplitudes(), state.dims(), interventional_labels());
  return finish_state(tau, da1, db1, df, true);
}

InterventionalState interventional_state(const FixedOrderComb& c, Backend backend) {
  if (backend == Backend::Contraction) {
    return interventional_state(process_matrix_of(c), Backend::Contraction);
  }
  return interventional_state(purify_comb(c), Backend::Statevector);
}

InterventionalState interventional_state(const SwitchSpec& s, Backend backend) {
  if (backend == Backend::Contraction) {
    return interventional_state(process_matrix_of(s), Backend::Contraction);
  }
  const PureState target = purify(s.target(), "R");
  const LabeledDims start_dims = target.dims().renamed(label::kT0, "T");
  const Matrix k = switch_intervention();
  const std::vector<std::string> on_t{"T"};
  const LabeledDims a_out{{"T", 2}, {label::kA0, 2}, {label::kA1Bar, 2}};
  const LabeledDims b_out{{"T", 2}, {label::kB0, 2}, {label::kB1Bar, 2}};
  const std::vector<std::string> order{label::kA0, label::kA1Bar, label::kB0,
                                       label::kB1Bar, "T", "R"};

  // Branch 0 applies A then B; branch 1 applies B then A.
  LabeledDims d1, d2;
  Vector v = apply_local_raw(target.amplitudes(), start_dims, k, on_t, a_out, &d1);
  v = apply_local_raw(v, d1, k, on_t, b_out, &d2);
  const Vector branch0 = permute_vector(v, d2, order);
  v = apply_local_raw(target.amplitudes(), start_dims, k, on_t, b_out, &d1);
  v = apply_local_raw(v, d1, k, on_t, a_out, &d2);
  const Vector branch1 = permute_vector(v, d2, order);

  const double c0 = std::sqrt(s.lambda());
  const double c1 = std::sqrt(1.0 - s.lambda());
  Vector full(branch0.size() * 2);
  for (Eigen::Index i = 0; i < branch0.size(); ++i) {
    full(2 * i) = c0 * branch0(i);
    full(2 * i + 1) = c1 * branch1(i);
  }
  LabeledDims dims = d2.select(order).concat(LabeledDims{{"C", 2}});

  std::vector<std::string> keep{label::kA0, label::kA1Bar, label::kB0, label::kB1Bar};
  LabeledOperator tau;
  switch (s.mode()) {
    case FutureMode::Full: {
      keep.push_back("T");
      keep.push_back("C");
      const std::vector<std::string> parts{"T", "C"};
      tau = merge_labels(reduced_outer(full, full, dims, keep), parts, label::kF);
      break;
    }
    case FutureMode::TraceControl:
      keep.push_back("T");
      tau = reduced_outer(full, full, dims, keep).renamed("T", label::kF);
      break;
    case FutureMode::TraceTarget:
      keep.push_back("C");
      tau = reduced_outer(full, full, dims, keep).renamed("C", label::kF);
      break;
  }
  return finish_state(tau, 2, 2, s.future_dim(), true);
}

InterventionalState interventional_state(const ProcessMatrix& w, Backend backend) {
  if (backend != Backend::Contraction) {
    throw Error("interventional_state: a process matrix supports only the contraction backend");
  }
  if (w.dim(label::kP) != 1) {
    throw Error("interventional_state: the process must have a 1-dimensional global past");
  }
  const std::size_t da0 = w.dim(label::kA0);
  const std::size_t da1 = w.dim(label::kA1);
  const std::size_t db0 = w.dim(label::kB0);
  const std::size_t db1 = w.dim(label::kB1);
  // J = Phi_{A0,A0mem} (x) phi+_{A1,A1bar} (x) Phi_{B0,B0mem} (x) phi+_{B1,B1bar};
  // reordered to (A0, A1, B0, B1 | A0mem, A1bar, B0mem, B1bar) its only
  // nonzeros are |y, y><x, x| with weight 1 / (dA1 dB1).
  const LabeledDims k_dims{
      {"A0mem", da0}, {label::kA1Bar, da1}, {"B0mem", db0}, {label::kB1Bar, db1}};
  const std::size_t dx = k_dims.total();
  const Complex weight(1.0 / static_cast<double>(da1 * db1), 0.0);
  std::vector<SparseEntry> entries;
  entries.reserve(dx * dx);
  for (std::size_t y = 0; y < dx; ++y) {
    for (std::size_t x = 0; x < dx; ++x) entries.push_back({y * dx + y, x * dx + x, weight});
  }
  LabeledOperator r = contract_entries(w, entries, k_dims);
  const std::vector<std::string> keep{"A0mem", label::kA1Bar, "B0mem", label::kB1Bar,
                                      label::kF};
  r = partial_trace(r, keep).renamed("A0mem", label::kA0).renamed("B0mem", label::kB0);
  return finish_state(r, da1, db1, w.dim(label::kF), false);
}

}  // namespace qcausal
