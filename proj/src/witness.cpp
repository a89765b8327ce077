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

#include "qcausal/witness.hpp"

#include <cmath>
#include <utility>

namespace qcausal {

namespace {

void check_five_labels(const DensityOperator& sigma, const char* what) {
  for (const auto& name : interventional_labels()) {
    if (!sigma.dims().contains(name)) {
      throw Error(std::string(what) + ": state lacks label " + name + " (" +
                  to_string(sigma.dims()) + ")");
    }
  }
}

struct Roles {
  std::string x0, x1bar, y0, y1bar;  // first party, second party
};

Roles roles(CausalOrder order) {
  if (order == CausalOrder::AThenB) {
    return {label::kA0, label::kA1Bar, label::kB0, label::kB1Bar};
  }
  return {label::kB0, label::kB1Bar, label::kA0, label::kA1Bar};
}

double log2_ratio(std::size_t num, std::size_t den) {
  return std::log2(static_cast<double>(num) / static_cast<double>(den));
}

}  // namespace

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::BeyondFixedOrder:
      return "BeyondFixedOrder";
    case Verdict::ExcludesOnlyAB:
      return "ExcludesOnlyAB";
    case Verdict::ExcludesOnlyBA:
      return "ExcludesOnlyBA";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

DpSpectra dp_spectra(const DensityOperator& sigma, CausalOrder order) {
  check_five_labels(sigma, "dp_witness");
  const Roles r = roles(order);
  const std::vector<std::string> past{r.x0, r.x1bar, r.y0};
  DpSpectra s;
  s.joint = herm_eigenvalues(partial_trace(sigma.op(), interventional_labels()).matrix());
  s.marginal = herm_eigenvalues(partial_trace(sigma.op(), past).matrix());
  s.bound = log2_ratio(sigma.dims().dim(r.y1bar), sigma.dims().dim(label::kF));
  return s;
}

WitnessValue dp_value(const DpSpectra& spectra, const EntropySpec& spec) {
  return {entropy_from_spectrum(spectra.joint, spec) -
              entropy_from_spectrum(spectra.marginal, spec),
          spectra.bound};
}

WitnessValue dp_witness(const DensityOperator& sigma, CausalOrder order,
                        const EntropySpec& spec) {
  return dp_value(dp_spectra(sigma, order), spec);
}

WitnessValue dp_witness(const InterventionalState& tau, CausalOrder order,
                        const EntropySpec& spec) {
  return dp_witness(tau.tau(), order, spec);
}

MarginalWitnesses marginal_witnesses(const DensityOperator& sigma, CausalOrder order,
                                     const EntropySpec& spec) {
  if (spec.family() != EntropyFamily::VonNeumann) {
    throw Error("marginal_witnesses: defined for the von Neumann entropy only, got " +
                spec.name());
  }
  check_five_labels(sigma, "marginal_witnesses");
  const Roles r = roles(order);
  const std::vector<std::string> partners{label::kA1Bar, label::kB1Bar};
  const std::vector<std::string> y1bar{r.y1bar};
  const std::vector<std::string> past{r.x0, r.x1bar, r.y0};
  const std::vector<std::string> f{label::kF};
  const std::vector<std::string> x0f{r.x0, label::kF};
  const std::vector<std::string> y0{r.y0};
  MarginalWitnesses m;
  m.i1 = conditional_entropy(sigma, y1bar, past) + conditional_entropy(sigma, f, partners);
  m.i2 = conditional_entropy(sigma, x0f, partners) + conditional_entropy(sigma, y0, partners);
  m.bound = log2_ratio(sigma.dims().dim(r.y1bar), sigma.dims().dim(label::kF));
  return m;
}

MarginalWitnesses marginal_witnesses(const InterventionalState& tau, CausalOrder order,
                                     const EntropySpec& spec) {
  return marginal_witnesses(tau.tau(), order, spec);
}

WitnessReport evaluate_witnesses(const InterventionalState& tau, const EntropySpec& spec,
                                 std::string tag) {
  WitnessReport report;
  report.tag = std::move(tag);
  report.family = spec;
  const WitnessValue ab = dp_witness(tau, CausalOrder::AThenB, spec);
  const WitnessValue ba = dp_witness(tau, CausalOrder::BThenA, spec);
  report.dp_ab = ab.value;
  report.bound_ab = ab.bound;
  report.dp_ba = ba.value;
  report.bound_ba = ba.bound;
  report.violated_ab = ab.violated();
  report.violated_ba = ba.violated();
  if (spec.family() == EntropyFamily::VonNeumann) {
    const MarginalWitnesses mab = marginal_witnesses(tau, CausalOrder::AThenB);
    const MarginalWitnesses mba = marginal_witnesses(tau, CausalOrder::BThenA);
    report.i1_ab = mab.i1;
    report.i2_ab = mab.i2;
    report.i1_ba = mba.i1;
    report.i2_ba = mba.i2;
  }
  if (!spec.validated()) {
    report.range_warning = true;
    report.notes.push_back("Renyi order " + spec.name() +
                           " is outside [1/2, inf]; verdict withheld");
  }
  if (spec.externally_cited()) {
    report.notes.push_back("max-entropy monotonicity rests on an external result");
  }
  report.verdict = verdict(report);
  if (report.verdict != Verdict::BeyondFixedOrder) {
    report.notes.push_back("no violation does not imply a fixed causal order");
  }
  return report;
}

Verdict verdict(const WitnessReport& report) {
  if (report.range_warning) return Verdict::Inconclusive;
  if (report.violated_ab && report.violated_ba) return Verdict::BeyondFixedOrder;
  if (report.violated_ab) return Verdict::ExcludesOnlyAB;
  if (report.violated_ba) return Verdict::ExcludesOnlyBA;
  return Verdict::Inconclusive;
}

}  // namespace qcausal
