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

#include <any>
#include <memory>
#include <string>
#include <vector>

#include "propprog/param_store.hpp"
#include "propprog/runtime.hpp"
#include "propprog/samplers.hpp"
#include "propprog/trace.hpp"

namespace propprog::fixtures {

// A small discrete proposal program bundled with everything the oracle and
// the samplers need to exercise it: its output selection, a default input,
// a lookup-table target over its output space, and a starting state.
struct Fixture {
  std::string name;
  std::shared_ptr<const runtime::ProposalProgram> program;
  OutputSelection outputs;
  std::any input;
  ParamStore params;
  samplers::UnnormalizedTarget target;
  // Every output trace the program can produce, in enumeration order.
  std::vector<ChoiceMap> z_support;
  // The normalized target distribution over z_support.
  std::vector<double> target_probs;
  ChoiceMap z0;
};

// A target that looks its argument up in a fixed table of output traces;
// traces outside the table have zero density.
samplers::UnnormalizedTarget table_target(std::vector<ChoiceMap> zs,
                                          std::vector<double> unnormalized,
                                          std::string description);

// u ~ bernoulli(0.5); z ~ bernoulli(u ? 0.9 : 0.1). One informative
// internal choice; output marginals are 0.5 / 0.5.
const Fixture& two_coin();

// u ~ bernoulli(0.5); z1 ~ bernoulli(u ? 0.8 : 0.3);
// z2 ~ bernoulli(u ? 0.6 : 0.4). Four output states, all reachable.
const Fixture& four_state();

// u ~ categorical(0.2, 0.3, 0.5); z ~ uniform_discrete(0, u). Some
// constrained executions are infeasible (z = 2 requires u = 2).
const Fixture& three_path();

// z1 ~ bernoulli(0.4); u ~ bernoulli(z1 ? 0.3 : 0.6);
// z2 ~ bernoulli(u != z1 ? 0.8 : 0.5). An internal choice between outputs.
const Fixture& out_chain();

// Input dependent: z ~ bernoulli(u ? anchor(x) : 0.5) where anchor reads
// the previous output trace. Exercises proposals whose distribution
// genuinely depends on the input.
const Fixture& sticky();

// a ~ bernoulli(0.7); b ~ bernoulli(a ? 0.9 : 0.4), both outputs. No
// internal choices: probability estimates are exact for every K.
const Fixture& no_internal();

// Point-mass choices only; every estimate equals 1 exactly.
const Fixture& point_mass();

// u ~ bernoulli(sigmoid(theta_u)); z ~ bernoulli(u ? sigmoid(theta_z)
// : 1 - sigmoid(theta_z)), both annotated with parameter gradients.
std::shared_ptr<const runtime::ProposalProgram> param_two_coin_program();
ParamStore param_two_coin_params(double theta_u, double theta_z);

// out ~ bernoulli(sigmoid(theta)), annotated; no internal choices.
std::shared_ptr<const runtime::ProposalProgram> logistic_program();
ParamStore logistic_params(double theta);

const std::vector<const Fixture*>& all_fixtures();
const Fixture& fixture_by_name(const std::string& name);

}  // namespace propprog::fixtures
