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

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "propprog/param_store.hpp"
#include "propprog/runtime.hpp"
#include "propprog/trainer.hpp"

namespace propprog::cli {

// Strict JSON run configuration for the command line tool. Unknown keys are
// rejected at every level so a typo cannot silently fall back to a default.
// Every field has a default; an empty JSON object is a valid config.

struct DatasetConfig {
  std::size_t n_points = 20;
};

struct ProposalConfig {
  // One of "ransac_nn", "nn", "prior".
  std::string kind = "ransac_nn";
  std::size_t hidden_dim = 10;
  // Size of the support of the RANSAC iteration-count choice.
  std::size_t iter_support = 10;
};

struct AdamSection {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct SgdSection {
  double step_size = 1e-3;
};

struct TrainingConfig {
  int k_replicates = 20;
  int batch_size = 8;
  std::int64_t iterations = 300;
  // One of "adam", "sgd".
  std::string optimizer = "adam";
  AdamSection adam;
  SgdSection sgd;
};

struct InferenceConfig {
  int n_particles = 100;
  int k_replicates = 10;
  // Multiplies the unnormalized target density; normalized results are
  // exactly invariant to it.
  double rescale = 1.0;
};

struct OutputConfig {
  std::string dir = "out";
};

struct CliConfig {
  std::uint64_t seed = 0;
  DatasetConfig dataset;
  ProposalConfig proposal;
  TrainingConfig training;
  InferenceConfig inference;
  OutputConfig output;

  // Canonical compact JSON with lexicographically sorted keys; equal
  // configs canonicalize to equal strings.
  std::string canonical() const;

  // FNV-1a 64-bit hash of canonical(), as 16 lowercase hex digits. Stamped
  // into every output file header so results can be traced to their config.
  std::string config_hash() const;
};

// Parses and validates a config; both throw ConfigError with the offending
// key path on unknown keys, wrong types, or out-of-range values.
CliConfig parse_config_json(const std::string& text);
CliConfig load_config(const std::string& path);

// The proposal program named by the config, with its parameters freshly
// initialized from param_seed.
struct ProposalBundle {
  std::shared_ptr<const runtime::ProposalProgram> program;
  ParamStore params;
};
ProposalBundle make_proposal(const ProposalConfig& config, std::size_t n_points,
                             std::uint64_t param_seed);

trainer::Optimizer make_optimizer(const TrainingConfig& config);

}  // namespace propprog::cli
