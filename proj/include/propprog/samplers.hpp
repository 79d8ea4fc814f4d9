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
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "propprog/runtime.hpp"
#include "propprog/trace.hpp"

namespace propprog::samplers {

// An unnormalized target density over output traces. log_density returns
// the base log density; log_scale is an additive constant (log of a
// multiplicative rescaling of the density). Normalized estimates and
// acceptance ratios use the base density only, so they are invariant to the
// constant not merely up to rounding but exactly; the constant still
// reaches raw per-sample diagnostics through full_log_density.
struct UnnormalizedTarget {
  std::function<double(const ChoiceMap&)> log_density;
  std::string description;
  double log_scale = 0.0;

  double full_log_density(const ChoiceMap& z) const {
    return log_density(z) + log_scale;
  }

  // The same target with its density multiplied by the constant c > 0.
  UnnormalizedTarget rescaled(double c) const;
};

struct WeightedSample {
  ChoiceMap z;
  // log pi(z) - log xi_hat, including the target's scale constant.
  double log_weight = 0.0;
  double f_value = 0.0;
};

struct IsResult {
  // Self-normalized estimate of E_pi[f].
  double estimate = 0.0;
  std::vector<WeightedSample> samples;
  // Scale-free normalized weights, summing to 1 over the particles.
  std::vector<double> normalized_weights;
  // log sum_i exp(log_weight_i), including the scale constant.
  double log_sum_weights = 0.0;
};

// Self-normalized importance sampling with the proposal program as the
// sampler: each particle draws z and a marginal probability estimate from
// simulate() and is weighted by pi(z) / xi_hat. Particle i uses the
// substream derive_seed(seed, i), so estimates depend only on (seed, N, K).
// Throws AllWeightsZeroError if every particle has zero weight.
IsResult importance_sample(const UnnormalizedTarget& target,
                           const runtime::ProposalProgram& p, const std::any& input,
                           const ParamStore& params, int n_particles, int k_replicates,
                           const std::function<double(const ChoiceMap&)>& f,
                           const OutputSelection& outputs, std::uint64_t seed);

struct MhState {
  ChoiceMap current;
  // Base (scale-free) target log density of current.
  double log_target = 0.0;
  std::int64_t steps = 0;
  std::int64_t accepts = 0;
  // Proposals rejected because the proposal-side probability estimate
  // underflowed to zero.
  std::int64_t degenerate_rejects = 0;
};

MhState make_initial_state(const UnnormalizedTarget& target, const ChoiceMap& z0);

struct MhStepResult {
  MhState state;
  bool accepted = false;
  double log_alpha = 0.0;
};

// One Metropolis-Hastings step with an estimated-probability proposal: the
// proposal program (fed the current output trace as input) proposes a block
// z' via simulate(); the reverse move is scored by assess() on the current
// block; the acceptance ratio is
//   (pi(z') xi_hat_reverse) / (pi(z) xi_hat_forward),
// all in log space. Addresses outside the block selection are carried over
// unchanged.
MhStepResult mh_step(const UnnormalizedTarget& target, const runtime::ProposalProgram& p,
                     const ParamStore& params, const MhState& state, int k_replicates,
                     const OutputSelection& block, std::uint64_t seed);

// A proposal program with its replicate count and the block of addresses it
// rewrites.
struct MhKernel {
  const runtime::ProposalProgram* program = nullptr;
  const ParamStore* params = nullptr;
  int k_replicates = 1;
  OutputSelection block;
};

struct MhDiagRow {
  std::int64_t step = 0;
  bool accepted = false;
  double log_alpha = 0.0;
};

struct ChainResult {
  // steps + 1 entries; the first is the initial state.
  std::vector<ChoiceMap> iterates;
  MhState final_state;
  std::vector<double> kernel_accept_rates;
  std::vector<MhDiagRow> diagnostics;
};

// Runs steps MH steps, cycling through the kernels. Step t uses the
// substream derive_seed(seed, t).
ChainResult mh_chain(const UnnormalizedTarget& target,
                     const std::vector<MhKernel>& kernels, const ChoiceMap& z0,
                     std::int64_t steps, std::uint64_t seed);

// CSV writers for sampler diagnostics. Every line of header_comments is
// emitted first, prefixed with "# ".
void write_is_diagnostics(const std::string& path, const IsResult& result,
                          const std::vector<std::string>& header_comments);
void write_mh_diagnostics(const std::string& path, const ChainResult& result,
                          const std::vector<std::string>& header_comments);

}  // namespace propprog::samplers
