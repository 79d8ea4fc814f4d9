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

#include "propprog/runtime.hpp"

#include <cmath>

#include "propprog/errors.hpp"
#include "propprog/math.hpp"

namespace propprog::runtime {

namespace {

// Checks that a trace constrained to z realizes no output address beyond z.
// The realization assumption says every output address appears in every
// execution; a selected address missing from z means the output trace does
// not cover the output set.
void check_output_coverage(const Trace& trace, const ChoiceMap& z,
                           const OutputSelection& outputs, bool from_assess) {
  for (const auto& r : trace.records()) {
    if (outputs.contains(r.address) && !z.has(r.address)) {
      if (from_assess) {
        throw SelectionMismatchError(
            "assess: selected output address not constrained: " + r.address);
      }
      throw MissingOutputError(
          "output address not present in the proposing execution: " + r.address);
    }
  }
}

}  // namespace

class Executor {
 public:
  static Trace execute(const ProposalProgram& p, const std::any& input,
                       const ParamStore& params, RandomStream rng,
                       const ChoiceMap* constraints, ChoiceScript* script,
                       GradSink* grads) {
    ExecutionContext ctx(rng, constraints, script, grads);
    try {
      p.run(ctx, input, params);
    } catch (const ExecutionContext::Abort&) {
      // Constrained value out of support: the partial trace already carries
      // a -inf record.
    }
    if (!ctx.aborted_ && constraints != nullptr &&
        ctx.consumed_constraints_ != constraints->size()) {
      for (const auto& [address, value] : constraints->entries()) {
        if (ctx.seen_.count(address) == 0) {
          throw MissingOutputError("constrained address never visited: " + address);
        }
      }
    }
    return Trace(std::move(ctx.records_));
  }
};

Value ExecutionContext::choice(const dist::Distribution& d, const Address& address) {
  return choice(d, address, GradHook());
}

Value ExecutionContext::choice(const dist::Distribution& d, const Address& address,
                               const GradHook& hook) {
  if (aborted_) throw Abort();
  if (!seen_.insert(address).second) {
    throw DuplicateAddressError("address visited twice: " + address);
  }

  Value value;
  bool constrained = false;
  if (constraints_ != nullptr && constraints_->has(address)) {
    value = constraints_->at(address);
    constrained = true;
    ++consumed_constraints_;
  } else if (script_ != nullptr) {
    value = script_->next_choice(d);
  } else {
    value = d.sample(rng_);
  }

  double lp = d.log_density(value);
  ChoiceRecord record;
  record.address = address;
  record.value = value;
  record.log_prob = lp;
  record.position = static_cast<int>(records_.size());
  records_.push_back(record);

  if (lp == kNegInf) {
    if (constrained) {
      aborted_ = true;
      throw Abort();
    }
    throw DomainError("sampled value outside its own support at " + address);
  }

  if (hook && grads_ != nullptr) {
    GradMap& sink = (grads_->outputs != nullptr && grads_->outputs->contains(address))
                        ? grads_->output_grads
                        : grads_->internal_grads;
    hook(d.grad_log_density(value), sink);
  }
  return value;
}

RandomStream& ExecutionContext::raw_rng() {
  if (script_ != nullptr) {
    throw NonEnumerableError("raw randomness is not available under enumeration");
  }
  return rng_;
}

Trace run_forward(const ProposalProgram& p, const std::any& input,
                  const ParamStore& params, std::uint64_t seed) {
  return Executor::execute(p, input, params, RandomStream(seed), nullptr, nullptr,
                           nullptr);
}

Trace run_constrained(const ProposalProgram& p, const std::any& input,
                      const ParamStore& params, const ChoiceMap& z, std::uint64_t seed) {
  return Executor::execute(p, input, params, RandomStream(seed), &z, nullptr, nullptr);
}

Trace run_scripted(const ProposalProgram& p, const std::any& input,
                   const ParamStore& params, const ChoiceMap& constraints,
                   ChoiceScript& script) {
  return Executor::execute(p, input, params, RandomStream(0), &constraints, &script,
                           nullptr);
}

GradRun run_constrained_grad(const ProposalProgram& p, const std::any& input,
                             const ParamStore& params, const ChoiceMap& z,
                             const OutputSelection& outputs, std::uint64_t seed) {
  GradSink sink(&outputs);
  GradRun out;
  out.trace =
      Executor::execute(p, input, params, RandomStream(seed), &z, nullptr, &sink);
  auto [log_p_output, log_p_internal] = split_log_prob(out.trace, outputs);
  out.log_p_output = log_p_output;
  out.log_p_internal = log_p_internal;
  out.output_grads = std::move(sink.output_grads);
  out.internal_grads = std::move(sink.internal_grads);
  return out;
}

SimulateResult simulate(const ProposalProgram& p, const std::any& input,
                        const ParamStore& params, int k_replicates,
                        const OutputSelection& outputs, std::uint64_t seed) {
  if (k_replicates < 1) throw DomainError("simulate requires K >= 1");
  SimulateResult result;
  result.traces.reserve(static_cast<std::size_t>(k_replicates));
  result.traces.push_back(run_forward(p, input, params, derive_seed(seed, 0)));
  result.output = restrict(result.traces[0], outputs);

  for (int i = 1; i < k_replicates; ++i) {
    result.traces.push_back(
        run_constrained(p, input, params, result.output, derive_seed(seed, i)));
  }

  std::vector<double> log_p_outputs;
  log_p_outputs.reserve(result.traces.size());
  for (const auto& trace : result.traces) {
    check_output_coverage(trace, result.output, outputs, /*from_assess=*/false);
    log_p_outputs.push_back(split_log_prob(trace, outputs).first);
  }
  result.estimate.log_xi_hat = log_mean_exp(log_p_outputs);
  result.estimate.replicates = k_replicates;
  result.chosen_index = static_cast<int>(
      RandomStream(derive_seed(seed, static_cast<std::uint64_t>(k_replicates)))
          .uniform_int(0, k_replicates - 1));
  return result;
}

AssessResult assess(const ProposalProgram& p, const std::any& input,
                    const ParamStore& params, const ChoiceMap& z, int k_replicates,
                    const OutputSelection& outputs, std::uint64_t seed) {
  if (k_replicates < 1) throw DomainError("assess requires K >= 1");
  for (const auto& [address, value] : z.entries()) {
    if (!outputs.contains(address)) {
      throw SelectionMismatchError("assess: constrained address outside the selection: " +
                                   address);
    }
  }
  for (const auto& address : outputs.explicit_addresses()) {
    if (!z.has(address)) {
      throw SelectionMismatchError("assess: selected output address not constrained: " +
                                   address);
    }
  }

  AssessResult result;
  result.traces.reserve(static_cast<std::size_t>(k_replicates));
  std::vector<double> log_p_outputs;
  log_p_outputs.reserve(static_cast<std::size_t>(k_replicates));
  for (int i = 0; i < k_replicates; ++i) {
    Trace trace = run_constrained(p, input, params, z, derive_seed(seed, i));
    check_output_coverage(trace, z, outputs, /*from_assess=*/true);
    log_p_outputs.push_back(split_log_prob(trace, outputs).first);
    result.traces.push_back(std::move(trace));
  }
  result.estimate.log_xi_hat = log_mean_exp(log_p_outputs);
  result.estimate.replicates = k_replicates;
  return result;
}

}  // namespace propprog::runtime
