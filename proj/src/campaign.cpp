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

#include "qcausal/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <utility>

#include "json.hpp"

namespace qcausal {

namespace {

std::size_t draw(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

std::size_t slot_dim(const SlotDims& d, const std::string& name) {
  if (name == label::kA0) return d.a0;
  if (name == label::kA1) return d.a1;
  if (name == label::kB0) return d.b0;
  if (name == label::kB1) return d.b1;
  return d.f;
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  return 0.5 * trace_norm_hermitian(a.matrix() - b.matrix());
}

/// Accumulates per-check and per-trial slacks.
class Recorder {
 public:
  explicit Recorder(CampaignResult& result) : result_(result) {}

  void begin_trial(std::size_t index, std::string label) {
    result_.trials.push_back(TrialResult{index, std::move(label), kInfinity, true});
  }

  void record(const std::string& name, double slack, double tolerance = 1e-9,
              bool informational = false) {
    CheckSummary& c = find_or_add(name, tolerance, informational);
    ++c.evaluated;
    c.worst_slack = std::min(c.worst_slack, slack);
    const bool failed = slack < -tolerance;
    if (failed) ++c.failures;
    if (informational) return;
    TrialResult& t = result_.trials.back();
    t.worst_slack = std::min(t.worst_slack, slack);
    if (failed) t.pass = false;
  }

  void finish() {
    for (const auto& t : result_.trials) {
      if (t.pass) {
        ++result_.passes;
      } else {
        ++result_.failures;
      }
    }
  }

 private:
  CheckSummary& find_or_add(const std::string& name, double tolerance, bool informational) {
    for (auto& c : result_.checks) {
      if (c.name == name) return c;
    }
    CheckSummary c;
    c.name = name;
    c.tolerance = tolerance;
    c.informational = informational;
    result_.checks.push_back(c);
    return result_.checks.back();
  }

  CampaignResult& result_;
};

std::vector<EntropySpec> theorem_families() {
  return {EntropySpec::von_neumann(), EntropySpec::renyi(0.5), EntropySpec::renyi(0.8),
          EntropySpec::renyi(2.0), EntropySpec::renyi(kInfinity)};
}

CausalOrder random_order(Rng& rng) {
  return rng.below(2) == 0 ? CausalOrder::AThenB : CausalOrder::BThenA;
}

void run_thm1(const CampaignConfig& config, Recorder& rec) {
  for (std::size_t i = 0; i < config.trials; ++i) {
    Rng rng(config.seed + i);
    const CausalOrder order = random_order(rng);
    const PurifiedComb comb = random_purified_comb(rng, order);
    rec.begin_trial(i, "order=" + to_string(order));
    const InterventionalState tau = interventional_state(comb, Backend::Statevector);
    const DpSpectra spectra = dp_spectra(tau.tau(), order);
    for (const auto& spec : theorem_families()) {
      const WitnessValue w = dp_value(spectra, spec);
      rec.record("dp_" + spec.name(), w.value - w.bound);
    }
  }
}

void run_lemma1(const CampaignConfig& config, Recorder& rec) {
  for (std::size_t i = 0; i < config.trials; ++i) {
    Rng rng(config.seed + i);
    FactorizationDims d;
    do {
      d.b1 = draw(rng, 2, 3);
      d.q1 = draw(rng, 2, 3);
      d.f = draw(rng, 2, 3);
    } while ((d.b1 * d.q1) % d.f != 0);
    d.q2 = d.b1 * d.q1 / d.f;
    const Matrix u2 = haar_unitary(d.b1 * d.q1, rng);
    const KrausChannel channel = completely_factorizable(u2, d);
    const LabeledDims in{{"Q1", d.q1}};
    const DensityOperator rho = random_density(in, draw(rng, 1, d.q1), rng);
    const DensityOperator out = apply_channel(channel, rho);
    const double offset = std::log2(static_cast<double>(d.q2) / static_cast<double>(d.q1));
    rec.begin_trial(i, "B1=" + std::to_string(d.b1) + " Q1=" + std::to_string(d.q1) +
                           " F=" + std::to_string(d.f) + " Q2=" + std::to_string(d.q2));
    for (const auto& spec : theorem_families()) {
      rec.record("increase_" + spec.name(), entropy(out, spec) - entropy(rho, spec) - offset);
    }
  }
}

void run_lemma3(const CampaignConfig& config, Recorder& rec) {
  for (std::size_t i = 0; i < config.trials; ++i) {
    Rng rng(config.seed + i);
    const CausalOrder order = random_order(rng);
    const FixedOrderComb comb = random_fixed_order_comb(rng, order);
    const KrausChannel a = random_slot_channel(rng, label::kA0, comb.dim(label::kA0),
                                               label::kA1, comb.dim(label::kA1));
    const KrausChannel b = random_slot_channel(rng, label::kB0, comb.dim(label::kB0),
                                               label::kB1, comb.dim(label::kB1));
    rec.begin_trial(i, "order=" + to_string(order));
    const PurifiedComb purified = purify_comb(comb);
    const double dev =
        max_abs_diff(comb_apply(comb, a, b).matrix(), purified_apply(purified, a, b).matrix());
    rec.record("comb_vs_purified_max_abs", -dev);
  }
}

void run_ssa(const CampaignConfig& config, Recorder& rec) {
  const std::vector<std::string> x{"X"}, y{"Y"}, z{"Z"};
  const LabeledDims dims{{"X", 2}, {"Y", 2}, {"Z", 2}};
  for (std::size_t i = 0; i < config.trials; ++i) {
    Rng rng(config.seed + i);
    const DensityOperator rho = random_density(dims, draw(rng, 1, 8), rng);
    rec.begin_trial(i, "3 qubits");
    rec.record("ssa_gap", ssa_gap(rho, x, y, z));
  }
}

void run_crosscheck(const CampaignConfig& config, Recorder& rec) {
  std::size_t index = 0;
  for (const FutureMode mode :
       {FutureMode::Full, FutureMode::TraceControl, FutureMode::TraceTarget}) {
    for (const double lambda : {0.0, 0.3, 0.7, 1.0}) {
      const SwitchSpec s(lambda, mode);
      rec.begin_trial(index++, "switch " + to_string(mode) + " lambda=" + format_number(lambda));
      const double d = trace_distance(interventional_state(s, Backend::Statevector).tau(),
                                      interventional_state(s, Backend::Contraction).tau());
      rec.record("switch_trace_distance", -d);
    }
  }
  for (std::size_t i = 0; i < config.trials; ++i) {
    Rng rng(config.seed + i);
    const CausalOrder order = random_order(rng);
    const PurifiedComb comb = random_purified_comb(rng, order);
    rec.begin_trial(index++, "purified comb order=" + to_string(order));
    const double d = trace_distance(interventional_state(comb, Backend::Statevector).tau(),
                                    interventional_state(comb, Backend::Contraction).tau());
    rec.record("comb_trace_distance", -d);
  }
}

void run_marginal_bounds(const CampaignConfig& config, Recorder& rec) {
  const std::vector<std::string> partners{label::kA1Bar, label::kB1Bar};
  for (std::size_t i = 0; i < config.trials; ++i) {
    Rng rng(config.seed + i);
    const CausalOrder order = random_order(rng);
    const FixedOrderComb comb = random_fixed_order_comb(rng, order);
    rec.begin_trial(i, "order=" + to_string(order));
    const InterventionalState tau = interventional_state(comb, Backend::Statevector);
    const MarginalWitnesses m = marginal_witnesses(tau, order);
    const double ssa_bound = entropy(tau.tau()) - entropy(tau.tau(), partners);
    rec.record("i1_vs_dimension_bound", m.i1 - m.bound);
    rec.record("i2_vs_ssa_bound", m.i2 - ssa_bound);
    // Reported only: this lower bound does not hold for every fixed-order comb.
    rec.record("i2_vs_dimension_bound", m.i2 - m.bound, 1e-9, true);
  }
}

}  // namespace

SlotDims random_slot_dims(Rng& rng, std::size_t max_tau_dim) {
  if (max_tau_dim < 32) throw Error("random_slot_dims: need room for qubit slots");
  for (;;) {
    SlotDims d;
    d.a0 = draw(rng, 2, 3);
    d.a1 = draw(rng, 2, 3);
    d.b0 = draw(rng, 2, 3);
    d.b1 = draw(rng, 2, 3);
    d.f = draw(rng, 2, 3);
    if (d.tau_dim() <= max_tau_dim) return d;
  }
}

PurifiedComb random_purified_comb(Rng& rng, CausalOrder order) {
  const SlotOrder s = slot_order(order);
  SlotDims d;
  std::size_t dq0 = 0, dq1 = 0, dq2 = 0;
  for (;;) {
    d = random_slot_dims(rng);
    dq0 = draw(rng, 2, 4);
    const std::size_t num1 = slot_dim(d, s.first_out) * dq0;
    if (num1 % slot_dim(d, s.second_in) != 0) continue;
    dq1 = num1 / slot_dim(d, s.second_in);
    const std::size_t num2 = slot_dim(d, s.second_out) * dq1;
    if (num2 % d.f != 0) continue;
    dq2 = num2 / d.f;
    break;
  }
  const LabeledDims psi_dims{{s.first_in, slot_dim(d, s.first_in)}, {label::kQ0, dq0}};
  PureState psi = random_pure(psi_dims, rng);
  LabeledMap u1{LabeledDims{{s.first_out, slot_dim(d, s.first_out)}, {label::kQ0, dq0}},
                LabeledDims{{s.second_in, slot_dim(d, s.second_in)}, {label::kQ1, dq1}},
                Matrix()};
  u1.matrix = haar_unitary(u1.in_dims.total(), rng);
  LabeledMap u2{LabeledDims{{s.second_out, slot_dim(d, s.second_out)}, {label::kQ1, dq1}},
                LabeledDims{{label::kF, d.f}, {label::kQ2, dq2}}, Matrix()};
  u2.matrix = haar_unitary(u2.in_dims.total(), rng);
  return PurifiedComb(order, std::move(psi), std::move(u1), std::move(u2));
}

KrausChannel random_slot_channel(Rng& rng, const std::string& in_label, std::size_t din,
                                 const std::string& out_label, std::size_t dout) {
  const std::size_t min_kraus = (din + dout - 1) / dout;
  return random_channel(LabeledDims{{in_label, din}}, LabeledDims{{out_label, dout}},
                        draw(rng, min_kraus, min_kraus + 2), rng);
}

FixedOrderComb random_fixed_order_comb(Rng& rng, CausalOrder order, std::size_t max_tau_dim) {
  const SlotOrder s = slot_order(order);
  const SlotDims d = random_slot_dims(rng, max_tau_dim);
  const std::size_t e0 = draw(rng, 1, 2);
  const std::size_t e1 = draw(rng, 1, 2);
  const std::size_t e2 = draw(rng, 1, 2);
  const LabeledDims rho_dims{{s.first_in, slot_dim(d, s.first_in)}, {label::kE0, e0}};
  DensityOperator rho = random_density(rho_dims, draw(rng, 1, rho_dims.total()), rng);
  const LabeledDims l1_in{{s.first_out, slot_dim(d, s.first_out)}, {label::kE0, e0}};
  const LabeledDims l1_out{{s.second_in, slot_dim(d, s.second_in)}, {label::kE1, e1}};
  const LabeledDims l2_in{{s.second_out, slot_dim(d, s.second_out)}, {label::kE1, e1}};
  const LabeledDims l2_out{{label::kF, d.f}, {label::kE2, e2}};
  const std::size_t r1 = (l1_in.total() + l1_out.total() - 1) / l1_out.total();
  const std::size_t r2 = (l2_in.total() + l2_out.total() - 1) / l2_out.total();
  KrausChannel l1 = random_channel(l1_in, l1_out, draw(rng, r1, r1 + 2), rng);
  KrausChannel l2 = random_channel(l2_in, l2_out, draw(rng, r2, r2 + 2), rng);
  return FixedOrderComb(order, std::move(rho), std::move(l1), std::move(l2));
}

CaseStudy parse_case_study(std::string_view tag) {
  if (tag == "switch_full") return CaseStudy::SwitchFull;
  if (tag == "upsilon1") return CaseStudy::Upsilon1;
  if (tag == "upsilon2") return CaseStudy::Upsilon2;
  throw UsageError("unknown process '" + std::string(tag) +
                   "' (expected switch_full, upsilon1 or upsilon2)");
}

std::string to_string(CaseStudy c) {
  switch (c) {
    case CaseStudy::SwitchFull:
      return "switch_full";
    case CaseStudy::Upsilon1:
      return "upsilon1";
    case CaseStudy::Upsilon2:
      return "upsilon2";
  }
  return "unknown";
}

SwitchSpec case_study_spec(CaseStudy c, double lambda) {
  switch (c) {
    case CaseStudy::SwitchFull:
      return SwitchSpec(lambda, FutureMode::Full);
    case CaseStudy::Upsilon1:
      return SwitchSpec(lambda, FutureMode::TraceControl);
    case CaseStudy::Upsilon2:
      return SwitchSpec(lambda, FutureMode::TraceTarget);
  }
  throw Error("case_study_spec: unknown case study");
}

BackendChoice parse_backend(std::string_view tag) {
  if (tag == "statevector") return BackendChoice::Statevector;
  if (tag == "contraction") return BackendChoice::Contraction;
  if (tag == "both") return BackendChoice::Both;
  throw UsageError("unknown backend '" + std::string(tag) +
                   "' (expected statevector, contraction or both)");
}

void validate(const SweepConfig& config) {
  if (!(config.lambda_min >= 0.0 && config.lambda_min <= config.lambda_max &&
        config.lambda_max <= 1.0)) {
    throw UsageError("lambda grid must satisfy 0 <= min <= max <= 1");
  }
  if (config.lambda_steps < 2) throw UsageError("lambda grid needs at least 2 steps");
}

std::vector<double> lambda_grid(double lambda_min, double lambda_max, int steps) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    grid.push_back(lambda_min + (lambda_max - lambda_min) * k / (steps - 1));
  }
  return grid;
}

SweepResult run_sweep(const SweepConfig& config) {
  validate(config);
  SweepResult result;
  result.lambdas = lambda_grid(config.lambda_min, config.lambda_max, config.lambda_steps);
  for (const double lambda : result.lambdas) {
    const SwitchSpec spec = case_study_spec(config.process, lambda);
    const Backend primary = config.backend == BackendChoice::Contraction
                                ? Backend::Contraction
                                : Backend::Statevector;
    const InterventionalState tau = interventional_state(spec, primary);
    if (config.backend == BackendChoice::Both) {
      const InterventionalState other = interventional_state(spec, Backend::Contraction);
      result.max_backend_distance =
          std::max(result.max_backend_distance, trace_distance(tau.tau(), other.tau()));
    }
    result.rows.push_back(
        evaluate_witnesses(tau, config.entropy, "lambda=" + format_number(lambda)));
  }
  return result;
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "lambda,dp_ab,bound_ab,dp_ba,bound_ba,violated_ab,violated_ba,i1_ab,i2_ab,i1_ba,i2_ba,"
      "verdict\n";
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
  };
  for (std::size_t k = 0; k < result.rows.size(); ++k) {
    const WitnessReport& r = result.rows[k];
    out += format_number(result.lambdas[k]) + ',' + format_number(r.dp_ab) + ',' +
           format_number(r.bound_ab) + ',' + format_number(r.dp_ba) + ',' +
           format_number(r.bound_ba) + ',' + (r.violated_ab ? "1" : "0") + ',' +
           (r.violated_ba ? "1" : "0") + ',' + opt(r.i1_ab) + ',' + opt(r.i2_ab) + ',' +
           opt(r.i1_ba) + ',' + opt(r.i2_ba) + ',' + to_string(r.verdict) + '\n';
  }
  return out;
}

std::vector<std::size_t> certified_indices(const SweepResult& result) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < result.rows.size(); ++k) {
    if (result.rows[k].verdict == Verdict::BeyondFixedOrder) out.push_back(k);
  }
  return out;
}

Campaign parse_campaign(std::string_view tag) {
  if (tag == "thm1") return Campaign::Thm1;
  if (tag == "lemma1") return Campaign::Lemma1;
  if (tag == "lemma3") return Campaign::Lemma3;
  if (tag == "ssa") return Campaign::Ssa;
  if (tag == "crosscheck") return Campaign::Crosscheck;
  if (tag == "marginal_bounds") return Campaign::MarginalBounds;
  throw UsageError("unknown campaign '" + std::string(tag) + "'");
}

std::string to_string(Campaign c) {
  switch (c) {
    case Campaign::Thm1:
      return "thm1";
    case Campaign::Lemma1:
      return "lemma1";
    case Campaign::Lemma3:
      return "lemma3";
    case Campaign::Ssa:
      return "ssa";
    case Campaign::Crosscheck:
      return "crosscheck";
    case Campaign::MarginalBounds:
      return "marginal_bounds";
  }
  return "unknown";
}

const CheckSummary& CampaignResult::check(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("CampaignResult: no check named " + std::string(name));
}

CampaignResult run_campaign(const CampaignConfig& config) {
  if (config.trials < 1) throw UsageError("campaign needs at least one trial");
  const auto start = std::chrono::steady_clock::now();
  CampaignResult result;
  result.config = config;
  Recorder rec(result);
  switch (config.campaign) {
    case Campaign::Thm1:
      run_thm1(config, rec);
      break;
    case Campaign::Lemma1:
      run_lemma1(config, rec);
      break;
    case Campaign::Lemma3:
      run_lemma3(config, rec);
      break;
    case Campaign::Ssa:
      run_ssa(config, rec);
      break;
    case Campaign::Crosscheck:
      run_crosscheck(config, rec);
      break;
    case Campaign::MarginalBounds:
      run_marginal_bounds(config, rec);
      break;
  }
  rec.finish();
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string campaign_json(const CampaignResult& result) {
  using nlohmann::json;
  const auto number = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  json checks = json::array();
  double worst = kInfinity;
  for (const auto& c : result.checks) {
    checks.push_back({{"name", c.name},
                      {"tolerance", c.tolerance},
                      {"informational", c.informational},
                      {"evaluated", c.evaluated},
                      {"failures", c.failures},
                      {"worst_slack", number(c.worst_slack)}});
    if (!c.informational) worst = std::min(worst, c.worst_slack);
  }
  json trials = json::array();
  for (const auto& t : result.trials) {
    trials.push_back({{"index", t.index},
                      {"label", t.label},
                      {"worst_slack", number(t.worst_slack)},
                      {"pass", t.pass}});
  }
  json doc = {{"campaign", to_string(result.config.campaign)},
              {"trials", result.config.trials},
              {"seed", result.config.seed},
              {"passes", result.passes},
              {"failures", result.failures},
              {"worst_slack", number(worst)},
              {"checks", checks},
              {"per_trial", trials}};
  return doc.dump(2) + "\n";
}

std::vector<std::string> reproduce_figure(std::string_view figure, const std::string& outdir) {
  struct Job {
    std::string file;
    CaseStudy process;
    EntropySpec entropy;
  };
  const auto vn = EntropySpec::von_neumann();
  std::vector<Job> jobs;
  if (figure == "3a") {
    jobs.push_back({"fig3a.csv", CaseStudy::SwitchFull, vn});
  } else if (figure == "3b") {
    jobs.push_back({"fig3b.csv", CaseStudy::Upsilon1, vn});
  } else if (figure == "3c") {
    jobs.push_back({"fig3c.csv", CaseStudy::Upsilon2, vn});
  } else if (figure == "4") {
    jobs.push_back({"fig4.csv", CaseStudy::Upsilon1, vn});
  } else if (figure == "5a") {
    jobs.push_back({"fig5a_vn.csv", CaseStudy::Upsilon2, vn});
    for (const char* a : {"0.5", "0.65", "0.8"}) {
      jobs.push_back({std::string("fig5a_renyi") + a + ".csv", CaseStudy::Upsilon2,
                      EntropySpec::parse(std::string("renyi:") + a)});
    }
  } else if (figure == "5b") {
    jobs.push_back({"fig5b_vn.csv", CaseStudy::Upsilon2, vn});
    for (const char* a : {"2", "3", "4", "inf"}) {
      jobs.push_back({std::string("fig5b_renyi") + a + ".csv", CaseStudy::Upsilon2,
                      EntropySpec::parse(std::string("renyi:") + a)});
    }
  } else {
    throw UsageError("unknown figure '" + std::string(figure) +
                     "' (expected 3a, 3b, 3c, 4, 5a or 5b)");
  }
  std::filesystem::create_directories(outdir);
  std::vector<std::string> written;
  for (const auto& job : jobs) {
    SweepConfig config;
    config.process = job.process;
    config.entropy = job.entropy;
    const std::string path = (std::filesystem::path(outdir) / job.file).string();
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << sweep_csv(run_sweep(config));
    written.push_back(path);
  }
  return written;
}

}  // namespace qcausal
