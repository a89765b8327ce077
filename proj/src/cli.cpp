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

#include "qcausal/cli.hpp"

#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "qcausal/campaign.hpp"

namespace qcausal {

namespace {

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot write " + path);
  file << text;
}

struct SweepArgs {
  std::string process;
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  int lambda_steps = 101;
  std::string entropy = "vn";
  std::string backend = "statevector";
  std::uint64_t seed = 0;
  std::string out;
};

struct VerifyArgs {
  std::string campaign;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string out;
};

struct ReproduceArgs {
  std::string figure;
  std::string outdir = ".";
};

int do_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  SweepConfig config;
  config.process = parse_case_study(args.process);
  config.lambda_min = args.lambda_min;
  config.lambda_max = args.lambda_max;
  config.lambda_steps = args.lambda_steps;
  try {
    config.entropy = EntropySpec::parse(args.entropy);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  config.backend = parse_backend(args.backend);
  config.seed = args.seed;
  validate(config);
  if (!config.entropy.validated()) {
    err << "warning: " << config.entropy.name()
        << " is outside the validated range; verdicts are withheld\n";
  }
  if (config.entropy.externally_cited()) {
    err << "note: max-entropy monotonicity rests on an external result\n";
  }
  const SweepResult result = run_sweep(config);
  write_output(sweep_csv(result), args.out, out);
  if (config.backend == BackendChoice::Both) {
    err << "max backend trace distance: " << format_number(result.max_backend_distance)
        << "\n";
    if (result.max_backend_distance > 1e-9) {
      err << "error: backends disagree beyond 1e-9\n";
      return kExitVerificationFailure;
    }
  }
  return kExitOk;
}

int do_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  CampaignConfig config;
  config.campaign = parse_campaign(args.campaign);
  config.trials = args.trials;
  config.seed = args.seed;
  const CampaignResult result = run_campaign(config);
  write_output(campaign_json(result), args.out, out);
  for (const auto& c : result.checks) {
    if (c.failures > 0) {
      err << (c.informational ? "info: " : "failure: ") << c.name << " fell below its bound in "
          << c.failures << " of " << c.evaluated << " samples (worst slack "
          << format_number(c.worst_slack) << ")\n";
    }
  }
  return result.failures == 0 ? kExitOk : kExitVerificationFailure;
}

int do_reproduce(const ReproduceArgs& args, std::ostream& out) {
  for (const auto& path : reproduce_figure(args.figure, args.outdir)) out << path << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropic witnesses of indefinite causal order", "qcausal"};
  app.require_subcommand(1);

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Witness values over a lambda grid (CSV)");
  sweep_cmd->add_option("--process", sweep.process, "switch_full, upsilon1 or upsilon2")
      ->required();
  sweep_cmd->add_option("--lambda-min", sweep.lambda_min, "Grid start")->capture_default_str();
  sweep_cmd->add_option("--lambda-max", sweep.lambda_max, "Grid end")->capture_default_str();
  sweep_cmd->add_option("--lambda-steps", sweep.lambda_steps, "Grid points, endpoints included")
      ->capture_default_str();
  sweep_cmd->add_option("--entropy", sweep.entropy, "vn, renyi:<alpha>, min or max")
      ->capture_default_str();
  sweep_cmd->add_option("--backend", sweep.backend, "statevector, contraction or both")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.seed, "Seed (sweeps are deterministic)")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sweep.out, "Output CSV path (default: stdout)");

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run a property campaign (JSON)");
  verify_cmd
      ->add_option("--campaign", verify.campaign,
                   "thm1, lemma1, lemma3, ssa, crosscheck or marginal_bounds")
      ->required();
  verify_cmd->add_option("--trials", verify.trials, "Number of random trials")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Base seed; trial i uses seed + i")
      ->capture_default_str();
  verify_cmd->add_option("--out", verify.out, "Output JSON path (default: stdout)");

  ReproduceArgs reproduce;
  CLI::App* reproduce_cmd = app.add_subcommand("reproduce", "Write figure data as CSV files");
  reproduce_cmd->add_option("--figure", reproduce.figure, "3a, 3b, 3c, 4, 5a or 5b")
      ->required();
  reproduce_cmd->add_option("--outdir", reproduce.outdir, "Output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sweep_cmd) return do_sweep(sweep, out, err);
    if (*verify_cmd) return do_verify(verify, out, err);
    return do_reproduce(reproduce, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
}

}  // namespace qcausal
