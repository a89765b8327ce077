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
#include <string_view>
#include <vector>

#include "qcausal/process.hpp"
#include "qcausal/rng.hpp"
#include "qcausal/witness.hpp"

namespace qcausal {

/// Raised for invalid command-line style configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Random instances (campaign dimension policy)
// ---------------------------------------------------------------------------

struct SlotDims {
  std::size_t a0 = 2, a1 = 2, b0 = 2, b1 = 2, f = 2;

  /// Dimension of the interventional state.
  std::size_t tau_dim() const { return a0 * a1 * b0 * b1 * f; }
};

/// Slot dimensions from {2, 3}, redrawn until the interventional state has
/// dimension at most `max_tau_dim`.
SlotDims random_slot_dims(Rng& rng, std::size_t max_tau_dim = 64);

/// Haar unitaries and a random pure state. dQ0 is drawn from {2, 3, 4};
/// draws where dQ1 or dQ2 would not be integers are rejected.
PurifiedComb random_purified_comb(Rng& rng, CausalOrder order);

/// Random state (random rank) and random channels; environments of
/// dimension 1 or 2.
FixedOrderComb random_fixed_order_comb(Rng& rng, CausalOrder order,
                                       std::size_t max_tau_dim = 64);

/// Random CPTP map in -> out with a random number of Kraus operators.
KrausChannel random_slot_channel(Rng& rng, const std::string& in_label, std::size_t din,
                                 const std::string& out_label, std::size_t dout);

// ---------------------------------------------------------------------------
// Case-study sweeps
// ---------------------------------------------------------------------------

enum class CaseStudy { SwitchFull, Upsilon1, Upsilon2 };

/// Tags: switch_full, upsilon1, upsilon2.
CaseStudy parse_case_study(std::string_view tag);
std::string to_string(CaseStudy c);
SwitchSpec case_study_spec(CaseStudy c, double lambda);

enum class BackendChoice { Statevector, Contraction, Both };

BackendChoice parse_backend(std::string_view tag);

struct SweepConfig {
  CaseStudy process = CaseStudy::SwitchFull;
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  int lambda_steps = 101;
  EntropySpec entropy = EntropySpec::von_neumann();
  BackendChoice backend = BackendChoice::Statevector;
  std::uint64_t seed = 0;
};

/// Throws UsageError on an invalid grid.
void validate(const SweepConfig& config);
std::vector<double> lambda_grid(double lambda_min, double lambda_max, int steps);

struct SweepResult {
  std::vector<double> lambdas;
  std::vector<WitnessReport> rows;
  /// Largest trace distance between the two backends; negative when only
  /// one backend ran.
  double max_backend_distance = -1.0;
};

SweepResult run_sweep(const SweepConfig& config);

/// %.12g formatting shared by every CSV writer.
std::string format_number(double x);
std::string sweep_csv(const SweepResult& result);

/// Grid indices whose verdict is BeyondFixedOrder.
std::vector<std::size_t> certified_indices(const SweepResult& result);

// ---------------------------------------------------------------------------
// Verification campaigns
// ---------------------------------------------------------------------------

enum class Campaign { Thm1, Lemma1, Lemma3, Ssa, Crosscheck, MarginalBounds };

Campaign parse_campaign(std::string_view tag);
std::string to_string(Campaign c);

struct CampaignConfig {
  Campaign campaign = Campaign::Thm1;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
};

/// One inequality (or equality, as slack = -deviation) tracked over a
/// campaign. A sample fails when slack < -tolerance. Informational checks
/// are reported but never counted as failures.
struct CheckSummary {
  std::string name;
  double tolerance = 1e-9;
  bool informational = false;
  std::size_t evaluated = 0;
  std::size_t failures = 0;
  double worst_slack = kInfinity;
};

struct TrialResult {
  std::size_t index = 0;
  std::string label;
  double worst_slack = kInfinity;
  bool pass = true;
};

struct CampaignResult {
  CampaignConfig config;
  std::vector<CheckSummary> checks;
  std::vector<TrialResult> trials;
  std::size_t passes = 0;
  std::size_t failures = 0;
  double seconds = 0.0;

  const CheckSummary& check(std::string_view name) const;
};

/// Trial i draws from Rng(seed + i).
CampaignResult run_campaign(const CampaignConfig& config);

std::string campaign_json(const CampaignResult& result);

// ---------------------------------------------------------------------------
// Figure data
// ---------------------------------------------------------------------------

/// Tags 3a, 3b, 3c, 4, 5a, 5b. Returns the paths written.
std::vector<std::string> reproduce_figure(std::string_view figure, const std::string& outdir);

}  // namespace qcausal
