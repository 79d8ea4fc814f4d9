// Copyright 2026 The Proposal Programs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <any>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "propprog/cli_config.hpp"
#include "propprog/errors.hpp"
#include "propprog/fixtures.hpp"
#include "propprog/linreg.hpp"
#include "propprog/oracle.hpp"
#include "propprog/oracle_checks.hpp"
#include "propprog/rng.hpp"
#include "propprog/samplers.hpp"
#include "propprog/serialize.hpp"
#include "propprog/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using namespace propprog;

// Substream roles under the config seed: 0 parameter init, 1 dataset
// generation, 2 training (further derived by the starting iteration on
// resume), 3 importance sampling.
constexpr std::uint64_t kParamStream = 0;
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kInferStream = 3;

cli::CliConfig load_or_default(const std::string& path) {
  if (path.empty()) return cli::CliConfig{};
  return cli::load_config(path);
}

// Loads a checkpoint and verifies it was produced under this config and
// proposal kind before its parameters are reused.
trainer::Checkpoint load_matching_checkpoint(const std::string& path,
                                             const cli::CliConfig& config) {
  trainer::Checkpoint ck = trainer::load_checkpoint(path);
  auto hash = ck.extra.find("config_hash");
  if (hash == ck.extra.end() || hash->second != config.config_hash()) {
    throw ConfigError("checkpoint " + path + " was not produced by this config");
  }
  auto kind = ck.extra.find("proposal_kind");
  if (kind == ck.extra.end() || kind->second != config.proposal.kind) {
    throw ConfigError("checkpoint " + path + " holds a different proposal kind");
  }
  return ck;
}

int cmd_generate_data(const cli::CliConfig& config) {
  fs::create_directories(config.output.dir);
  auto pair =
      linreg::generate_pair(config.dataset.n_points, derive_seed(config.seed, kDataStream));
  std::string hash = config.config_hash();
  linreg::write_dataset_csv(config.output.dir + "/dataset.csv", pair.data,
                            {"config_hash: " + hash, "tool: generate-data"});
  std::ofstream latents(config.output.dir + "/latents.json", std::ios::binary);
  if (!latents) throw IoError("cannot open for writing: " + config.output.dir + "/latents.json");
  latents << to_json(pair.latents) << "\n";
  std::cout << "wrote " << config.output.dir << "/dataset.csv and latents.json ("
            << config.dataset.n_points << " points)\n";
  return 0;
}

int cmd_train(const cli::CliConfig& config, const std::string& resume_path) {
  std::size_t n = config.dataset.n_points;
  cli::ProposalBundle bundle =
      cli::make_proposal(config.proposal, n, derive_seed(config.seed, kParamStream));
  if (config.proposal.kind == "prior") {
    throw ConfigError("the prior proposal has no trainable parameters");
  }
  trainer::PairDistribution r = linreg::pair_distribution(n);
  trainer::Optimizer opt = cli::make_optimizer(config.training);
  std::int64_t start_iter = 0;
  if (!resume_path.empty()) {
    trainer::Checkpoint ck = load_matching_checkpoint(resume_path, config);
    bundle.params = std::move(ck.params);
    opt = std::move(ck.opt);
    start_iter = ck.iteration;
  }

  trainer::TrainOptions options;
  options.k_replicates = config.training.k_replicates;
  options.batch_size = config.training.batch_size;
  options.iterations = config.training.iterations;
  options.seed = derive_seed(derive_seed(config.seed, kTrainStream),
                             static_cast<std::uint64_t>(start_iter));
  trainer::TrainResult result = trainer::train(*bundle.program, r, bundle.params, opt, options);

  fs::create_directories(config.output.dir);
  std::string hash = config.config_hash();
  std::string objective_path = config.output.dir + "/objective.csv";
  std::ofstream objective(objective_path, std::ios::binary);
  if (!objective) throw IoError("cannot open for writing: " + objective_path);
  objective << "# config_hash: " << hash << "\n";
  objective << "# tool: train\n";
  objective << "# start_iteration: " << start_iter << "\n";
  objective << "iteration,mean_log_xi_hat\n";
  for (std::size_t i = 0; i < result.objective_log.size(); ++i) {
    objective << (start_iter + static_cast<std::int64_t>(i) + 1) << ','
              << format_real(result.objective_log[i]) << "\n";
  }
  if (!objective) throw IoError("write failed: " + objective_path);

  trainer::save_checkpoint(config.output.dir + "/checkpoint.json",
                           start_iter + config.training.iterations, bundle.params, opt,
                           {{"config_hash", hash}, {"proposal_kind", config.proposal.kind}});
  std::cout << "trained " << config.training.iterations << " iterations from "
            << start_iter;
  if (!result.objective_log.empty()) {
    std::cout << "; final batch objective " << format_real(result.objective_log.back());
  }
  std::cout << "\n";
  return 0;
}

int cmd_infer_is(const cli::CliConfig& config, const std::string& data_path,
                 const std::string& checkpoint_path) {
  auto data = std::make_shared<const linreg::Dataset>(linreg::read_dataset_csv(data_path));
  if (data->size() != config.dataset.n_points) {
    throw ConfigError("dataset has " + std::to_string(data->size()) +
                      " points but dataset.n_points is " +
                      std::to_string(config.dataset.n_points));
  }
  cli::ProposalBundle bundle = cli::make_proposal(config.proposal, data->size(),
                                                  derive_seed(config.seed, kParamStream));
  if (!checkpoint_path.empty()) {
    trainer::Checkpoint ck = load_matching_checkpoint(checkpoint_path, config);
    bundle.params = std::move(ck.params);
  }
  samplers::UnnormalizedTarget target =
      linreg::posterior_target(data).rescaled(config.inference.rescale);
  OutputSelection outputs = linreg::latent_selection();
  auto slope_of = [](const ChoiceMap& z) { return z.at("slope").as_real(); };
  samplers::IsResult result = samplers::importance_sample(
      target, *bundle.program, std::any(data), bundle.params, config.inference.n_particles,
      config.inference.k_replicates, slope_of, outputs,
      derive_seed(config.seed, kInferStream));

  fs::create_directories(config.output.dir);
  samplers::write_is_diagnostics(config.output.dir + "/is_diagnostics.csv", result,
                                 {"config_hash: " + config.config_hash(),
                                  "tool: infer-is"});
  std::cout << "posterior mean slope estimate: " << format_real(result.estimate) << "\n";
  return 0;
}

int cmd_oracle_check(const std::vector<std::string>& suites, bool list) {
  if (list) {
    for (const auto& name : oracle_checks::check_names()) std::cout << name << "\n";
    return 0;
  }
  bool all_passed = true;
  for (const auto& result : oracle_checks::run_suite(suites)) {
    std::cout << (result.passed ? "[ok] " : "[FAIL] ") << result.name << ": "
              << result.detail << "\n";
    all_passed = all_passed && result.passed;
  }
  return all_passed ? 0 : 3;
}

int cmd_mh_demo(const std::string& fixture_name, std::int64_t steps, int k_replicates,
                std::uint64_t seed, const std::string& out_path) {
  if (steps < 1) throw ConfigError("--steps must be at least 1");
  if (k_replicates < 1) throw ConfigError("--k must be at least 1");
  const fixtures::Fixture* fixture = nullptr;
  try {
    fixture = &fixtures::fixture_by_name(fixture_name);
  } catch (const Error&) {
    throw ConfigError("unknown fixture: " + fixture_name);
  }

  samplers::MhKernel kernel;
  kernel.program = fixture->program.get();
  kernel.params = &fixture->params;
  kernel.k_replicates = k_replicates;
  kernel.block = fixture->outputs;
  samplers::ChainResult chain =
      samplers::mh_chain(fixture->target, {kernel}, fixture->z0, steps, seed);

  std::vector<double> occupancy(fixture->z_support.size(), 0.0);
  std::size_t burn_in = static_cast<std::size_t>(steps / 10);
  std::size_t counted = 0;
  for (std::size_t t = burn_in; t < chain.iterates.size(); ++t) {
    for (std::size_t zi = 0; zi < fixture->z_support.size(); ++zi) {
      if (chain.iterates[t] == fixture->z_support[zi]) {
        occupancy[zi] += 1.0;
        ++counted;
        break;
      }
    }
  }
  for (double& c : occupancy) c /= static_cast<double>(counted);
  double tv = oracle::tv_distance(occupancy, fixture->target_probs);
  double accept_rate = chain.kernel_accept_rates.at(0);

  std::cout << "fixture " << fixture->name << ": " << steps << " steps, K="
            << k_replicates << ", accept rate " << format_real(accept_rate)
            << ", occupancy tv " << format_real(tv) << "\n";
  if (!out_path.empty()) {
    samplers::write_mh_diagnostics(out_path, chain,
                                   {"tool: mh-demo", "fixture: " + fixture->name});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proposal programs: training and inference with estimated "
               "proposal probabilities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_path;
  std::string checkpoint_path;
  std::string resume_path;
  std::string out_path;
  std::string fixture_name = "two_coin";
  std::vector<std::string> suites;
  bool list_checks = false;
  std::int64_t steps = 20000;
  int k_replicates = 2;
  std::uint64_t seed = 0;

  CLI::App* gen = app.add_subcommand("generate-data",
                                     "Sample a dataset and its latents from the model");
  gen->add_option("--config", config_path, "JSON run configuration");

  CLI::App* train = app.add_subcommand("train",
                                       "Train the configured proposal on model pairs");
  train->add_option("--config", config_path, "JSON run configuration");
  train->add_option("--resume", resume_path, "checkpoint to continue from");

  CLI::App* infer = app.add_subcommand("infer-is",
                                       "Importance-sampling inference on a dataset");
  infer->add_option("--config", config_path, "JSON run configuration");
  infer->add_option("--data", data_path, "dataset CSV")->required();
  infer->add_option("--checkpoint", checkpoint_path, "trained parameter checkpoint");

  CLI::App* check = app.add_subcommand("oracle-check",
                                       "Run the exact-oracle verification suite");
  check->add_option("--suite", suites, "check names to run (default: all)");
  check->add_flag("--list", list_checks, "list check names and exit");

  CLI::App* mh = app.add_subcommand("mh-demo",
                                    "Run an estimated-ratio MH chain on a fixture");
  mh->add_option("--fixture", fixture_name, "fixture name");
  mh->add_option("--steps", steps, "chain length");
  mh->add_option("--k", k_replicates, "probability-estimate replicates");
  mh->add_option("--seed", seed, "chain seed");
  mh->add_option("--out", out_path, "diagnostics CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_generate_data(load_or_default(config_path));
    if (train->parsed()) return cmd_train(load_or_default(config_path), resume_path);
    if (infer->parsed())
      return cmd_infer_is(load_or_default(config_path), data_path, checkpoint_path);
    if (check->parsed()) return cmd_oracle_check(suites, list_checks);
    if (mh->parsed())
      return cmd_mh_demo(fixture_name, steps, k_replicates, seed, out_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
