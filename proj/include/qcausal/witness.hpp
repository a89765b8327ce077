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

#include <optional>
#include <string>
#include <vector>

#include "qcausal/entropy.hpp"
#include "qcausal/process.hpp"

namespace qcausal {

/// A witness is violated only when value < bound - kViolationTolerance.
inline constexpr double kViolationTolerance = 1e-7;

enum class Verdict { BeyondFixedOrder, ExcludesOnlyAB, ExcludesOnlyBA, Inconclusive };

std::string to_string(Verdict verdict);

struct WitnessValue {
  double value = 0.0;
  double bound = 0.0;

  bool violated() const { return value < bound - kViolationTolerance; }
};

/// Spectra needed by the data-processing witness of one order. Computing
/// them once lets several entropy families share the eigensolves.
struct DpSpectra {
  RealVector joint;
  RealVector marginal;
  double bound = 0.0;
};

// The functions below accept any state on A0, A1bar, B0, B1bar, F; bounds
// use the dimensions of A1bar and B1bar as the slot output dimensions.

DpSpectra dp_spectra(const DensityOperator& sigma, CausalOrder order);
WitnessValue dp_value(const DpSpectra& spectra, const EntropySpec& spec);

/// A<=B: H(A0 A1bar B0 B1bar F) - H(A0 A1bar B0) against log2(dB1 / dF).
/// B<=A: H(A0 A1bar B0 B1bar F) - H(B0 B1bar A0) against log2(dA1 / dF).
WitnessValue dp_witness(const DensityOperator& sigma, CausalOrder order,
                        const EntropySpec& spec = EntropySpec::von_neumann());
WitnessValue dp_witness(const InterventionalState& tau, CausalOrder order,
                        const EntropySpec& spec = EntropySpec::von_neumann());

struct MarginalWitnesses {
  double i1 = 0.0;
  double i2 = 0.0;
  double bound = 0.0;
};

/// A<=B: i1 = H(B1bar | A0 A1bar B0) + H(F | A1bar B1bar),
///       i2 = H(A0 F | A1bar B1bar) + H(B0 | A1bar B1bar).
/// B<=A exchanges A and B. Von Neumann only.
MarginalWitnesses marginal_witnesses(const DensityOperator& sigma, CausalOrder order,
                                     const EntropySpec& spec = EntropySpec::von_neumann());
MarginalWitnesses marginal_witnesses(const InterventionalState& tau, CausalOrder order,
                                     const EntropySpec& spec = EntropySpec::von_neumann());

struct WitnessReport {
  std::string tag;
  EntropySpec family = EntropySpec::von_neumann();
  double dp_ab = 0.0;
  double bound_ab = 0.0;
  double dp_ba = 0.0;
  double bound_ba = 0.0;
  bool violated_ab = false;
  bool violated_ba = false;
  std::optional<double> i1_ab, i2_ab, i1_ba, i2_ba;
  /// Set when the family lies outside the range where monotonicity holds.
  bool range_warning = false;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;
};

/// Both DP witnesses, marginal witnesses for von Neumann, and the verdict.
WitnessReport evaluate_witnesses(const InterventionalState& tau, const EntropySpec& spec,
                                 std::string tag = "");

/// BeyondFixedOrder iff both orders are violated; range warnings force
/// Inconclusive.
Verdict verdict(const WitnessReport& report);

}  // namespace qcausal
