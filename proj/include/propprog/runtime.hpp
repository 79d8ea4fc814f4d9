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
#include <unordered_set>
#include <vector>

#include "propprog/dist.hpp"
#include "propprog/param_store.hpp"
#include "propprog/rng.hpp"
#include "propprog/trace.hpp"

namespace propprog::runtime {

// Scripted value source for exhaustive enumeration; implemented by the
// oracle's depth-first driver.
class ChoiceScript {
 public:
  virtual ~ChoiceScript() = default;
  virtual Value next_choice(const dist::Distribution& d) = 0;
};

// Translates the gradient of one choice's log density with respect to the
// distribution's own parameters into gradients with respect to named
// trainable parameters, accumulated into the sink. Passing a hook to
// ExecutionContext::choice marks the choice's parameters as depending on
// trainable parameters; choices made without a hook contribute nothing to
// any gradient.
using GradHook = std::function<void(const dist::ParamGrad& grad, GradMap& sink)>;

// Per-execution gradient accumulation, split by whether each choice's
// address belongs to the output selection.
struct GradSink {
  explicit GradSink(const OutputSelection* outputs_) : outputs(outputs_) {}
  const OutputSelection* outputs;
  GradMap output_grads;
  GradMap internal_grads;
};

// The interface between a running proposal program and the library. A
// program makes addressed random choices through choice() and may consume
// unaddressed randomness through raw_rng(); everything else about its
// control flow is ordinary host code.
class ExecutionContext {
 public:
  // Draws from d (or takes the constrained or scripted value) at the given
  // address, records the choice, and returns the value. Visiting an address
  // twice is an error. Under constraints, a value outside the support of d
  // aborts the execution with an infeasible (-inf) trace.
  Value choice(const dist::Distribution& d, const Address& address);
  Value choice(const dist::Distribution& d, const Address& address, const GradHook& hook);

  // Unaddressed randomness (for example RANSAC's pair resampling). Draws
  // consume the same underlying stream as sampled choices; they carry no
  // probability and are invisible to traces. Not permitted under
  // enumeration.
  RandomStream& raw_rng();

 private:
  friend class Executor;
  ExecutionContext(RandomStream rng, const ChoiceMap* constraints, ChoiceScript* script,
                   GradSink* grads)
      : rng_(rng), constraints_(constraints), script_(script), grads_(grads) {}

  struct Abort {};

  RandomStream rng_;
  const ChoiceMap* constraints_;
  ChoiceScript* script_;
  GradSink* grads_;
  std::vector<ChoiceRecord> records_;
  std::unordered_set<Address> seen_;
  std::size_t consumed_constraints_ = 0;
  bool aborted_ = false;
};

// A probabilistic program used as a proposal: a host-language procedure
// over addressed random choices. Programs must be deterministic functions
// of (input, params, randomness): all randomness flows through the context.
class ProposalProgram {
 public:
  virtual ~ProposalProgram() = default;
  virtual void run(ExecutionContext& ctx, const std::any& input,
                   const ParamStore& params) const = 0;
};

// Low-level single-execution drivers.
Trace run_forward(const ProposalProgram& p, const std::any& input,
                  const ParamStore& params, std::uint64_t seed);

// Runs with the choices in z forced. The resulting trace is infeasible
// (total log prob -inf) if some forced value falls outside the support of
// its distribution at the moment it is visited. Every address of z must be
// consumed by a feasible execution.
Trace run_constrained(const ProposalProgram& p, const std::any& input,
                      const ParamStore& params, const ChoiceMap& z, std::uint64_t seed);

// Scripted execution for the enumeration oracle.
Trace run_scripted(const ProposalProgram& p, const std::any& input,
                   const ParamStore& params, const ChoiceMap& constraints,
                   ChoiceScript& script);

// One constrained execution with gradient accumulation, split by the output
// selection. log_p_output + log_p_internal = trace.total_log_prob().
struct GradRun {
  Trace trace;
  double log_p_output = 0.0;
  double log_p_internal = 0.0;
  GradMap output_grads;
  GradMap internal_grads;
};
GradRun run_constrained_grad(const ProposalProgram& p, const std::any& input,
                             const ParamStore& params, const ChoiceMap& z,
                             const OutputSelection& outputs, std::uint64_t seed);

// A K-replicate estimate of the marginal output probability p(z; x):
// xi_hat = (1/K) sum_k p_O(tau_k), carried in log space.
struct ProbEstimate {
  double log_xi_hat = 0.0;
  int replicates = 0;
};

struct SimulateResult {
  ChoiceMap output;
  ProbEstimate estimate;
  // The forward trace at index 0 followed by the K - 1 constrained
  // replicates.
  std::vector<Trace> traces;
  // Uniform draw over the K slots, recorded for the extended-space
  // bookkeeping; the returned output always comes from the forward trace.
  int chosen_index = 0;
};

// Samples z from one forward execution and estimates its marginal output
// probability with K replicates total (the forward execution plus K - 1
// executions constrained to z). Unbiased: E[xi_hat] = p(z; x) exactly, and
// for K = 1 the single-trace estimate p_O(tau) makes the importance weight
// exact in the extended-space sense.
SimulateResult simulate(const ProposalProgram& p, const std::any& input,
                        const ParamStore& params, int k_replicates,
                        const OutputSelection& outputs, std::uint64_t seed);

struct AssessResult {
  ProbEstimate estimate;
  std::vector<Trace> traces;
};

// Estimates the marginal output probability of a given z with K executions
// constrained to z. The addresses of z must exactly cover the output
// selection as realized by the program. If z is outside the support of
// every replicate, log_xi_hat is -inf.
AssessResult assess(const ProposalProgram& p, const std::any& input,
                    const ParamStore& params, const ChoiceMap& z, int k_replicates,
                    const OutputSelection& outputs, std::uint64_t seed);

}  // namespace propprog::runtime
