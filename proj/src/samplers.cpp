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

#include "propprog/samplers.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "propprog/errors.hpp"
#include "propprog/math.hpp"
#include "propprog/parallel.hpp"
#include "propprog/serialize.hpp"

namespace propprog::samplers {

UnnormalizedTarget UnnormalizedTarget::rescaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("rescaled requires a positive finite constant");
  }
  UnnormalizedTarget out = *this;
  out.log_scale += std::log(c);
  return out;
}

IsResult importance_sample(const UnnormalizedTarget& target,
                           const runtime::ProposalProgram& p, const std::any& input,
                           const ParamStore& params, int n_particles, int k_replicates,
                           const std::function<double(const ChoiceMap&)>& f,
                           const OutputSelection& outputs, std::uint64_t seed) {
  if (n_particles < 1) throw DomainError("importance_sample requires N >= 1");
  IsResult result;
  result.samples.resize(static_cast<std::size_t>(n_particles));
  // Base-density log weights; the scale constant is added only to the
  // published per-sample weights, never to the normalization.
  std::vector<double> base_log_weights(static_cast<std::size_t>(n_particles));

  parallel_for(static_cast<std::size_t>(n_particles), [&](std::size_t i) {
    runtime::SimulateResult sim =
        runtime::simulate(p, input, params, k_replicates, outputs, derive_seed(seed, i));
    double log_pi = target.log_density(sim.output);
    double lw = (log_pi == kNegInf) ? kNegInf : log_pi - sim.estimate.log_xi_hat;
    WeightedSample& sample = result.samples[i];
    sample.z = std::move(sim.output);
    sample.f_value = f(sample.z);
    base_log_weights[i] = lw;
    sample.log_weight = (lw == kNegInf) ? kNegInf : lw + target.log_scale;
  });

  double lse = log_sum_exp(base_log_weights);
  if (lse == kNegInf) {
    throw AllWeightsZeroError("every importance weight is zero under " +
                              target.description);
  }
  result.normalized_weights = softmax(base_log_weights);
  double estimate = 0.0;
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    estimate += result.normalized_weights[i] * result.samples[i].f_value;
  }
  result.estimate = estimate;
  result.log_sum_weights = lse + target.log_scale;
  return result;
}

MhState make_initial_state(const UnnormalizedTarget& target, const ChoiceMap& z0) {
  MhState state;
  state.current = z0;
  state.log_target = target.log_density(z0);
  if (state.log_target == kNegInf) {
    throw DomainError("initial state has zero target density");
  }
  return state;
}

MhStepResult mh_step(const UnnormalizedTarget& target, const runtime::ProposalProgram& p,
                     const ParamStore& params, const MhState& state, int k_replicates,
                     const OutputSelection& block, std::uint64_t seed) {
  MhStepResult result;
  result.state = state;
  result.state.steps += 1;

  // Forward: propose a fresh block and estimate its proposal probability.
  runtime::SimulateResult sim = runtime::simulate(
      p, std::any(state.current), params, k_replicates, block, derive_seed(seed, 0));
  ChoiceMap proposed = merge(state.current, sim.output);

  double log_pi_proposed = target.log_density(proposed);
  if (log_pi_proposed == kNegInf) {
    result.accepted = false;
    result.log_alpha = kNegInf;
    return result;
  }
  if (sim.estimate.log_xi_hat == kNegInf) {
    // The proposing execution's own output probability underflowed; the
    // acceptance ratio is ill-defined, so reject and record it.
    result.state.degenerate_rejects += 1;
    result.accepted = false;
    result.log_alpha = kNegInf;
    return result;
  }

  // Reverse: score the current block under the proposal run from the
  // proposed state.
  ChoiceMap current_block = restrict_map(state.current, block);
  runtime::AssessResult reverse =
      runtime::assess(p, std::any(proposed), params, current_block, k_replicates, block,
                      derive_seed(seed, 1));

  double log_alpha = (log_pi_proposed - state.log_target) +
                     (reverse.estimate.log_xi_hat - sim.estimate.log_xi_hat);
  if (log_alpha > 0.0) log_alpha = 0.0;
  result.log_alpha = log_alpha;

  double u = RandomStream(derive_seed(seed, 2)).uniform_pos();
  if (std::log(u) <= log_alpha) {
    result.accepted = true;
    result.state.current = std::move(proposed);
    result.state.log_target = log_pi_proposed;
    result.state.accepts += 1;
  }
  return result;
}

ChainResult mh_chain(const UnnormalizedTarget& target,
                     const std::vector<MhKernel>& kernels, const ChoiceMap& z0,
                     std::int64_t steps, std::uint64_t seed) {
  if (kernels.empty()) throw DomainError("mh_chain requires at least one kernel");
  if (steps < 0) throw DomainError("mh_chain requires steps >= 0");
  for (const auto& kernel : kernels) {
    if (kernel.program == nullptr || kernel.params == nullptr) {
      throw DomainError("mh_chain kernel missing program or params");
    }
  }

  ChainResult result;
  result.iterates.reserve(static_cast<std::size_t>(steps) + 1);
  result.iterates.push_back(z0);
  MhState state = make_initial_state(target, z0);
  std::vector<std::int64_t> kernel_steps(kernels.size(), 0);
  std::vector<std::int64_t> kernel_accepts(kernels.size(), 0);

  for (std::int64_t t = 0; t < steps; ++t) {
    std::size_t which = static_cast<std::size_t>(t) % kernels.size();
    const MhKernel& kernel = kernels[which];
    MhStepResult step =
        mh_step(target, *kernel.program, *kernel.params, state, kernel.k_replicates,
                kernel.block, derive_seed(seed, static_cast<std::uint64_t>(t)));
    state = std::move(step.state);
    kernel_steps[which] += 1;
    kernel_accepts[which] += step.accepted ? 1 : 0;
    result.iterates.push_back(state.current);
    result.diagnostics.push_back({t, step.accepted, step.log_alpha});
  }

  result.kernel_accept_rates.resize(kernels.size(), 0.0);
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    if (kernel_steps[k] > 0) {
      result.kernel_accept_rates[k] = static_cast<double>(kernel_accepts[k]) /
                                      static_cast<double>(kernel_steps[k]);
    }
  }
  result.final_state = std::move(state);
  return result;
}

void write_is_diagnostics(const std::string& path, const IsResult& result,
                          const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& line : header_comments) out << "# " << line << "\n";
  out << "particle_index,log_weight,f_value\n";
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    const auto& s = result.samples[i];
    out << i << ','
        << (s.log_weight == kNegInf ? std::string("-inf") : format_real(s.log_weight))
        << ',' << format_real(s.f_value) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_mh_diagnostics(const std::string& path, const ChainResult& result,
                          const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& line : header_comments) out << "# " << line << "\n";
  out << "step,accepted,log_alpha\n";
  for (const auto& row : result.diagnostics) {
    out << row.step << ',' << (row.accepted ? 1 : 0) << ','
        << (row.log_alpha == kNegInf ? std::string("-inf") : format_real(row.log_alpha))
        << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace propprog::samplers
