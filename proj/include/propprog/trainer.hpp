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
#include <map>
#include <string>
#include <vector>

#include "propprog/param_store.hpp"
#include "propprog/runtime.hpp"
#include "propprog/trace.hpp"

namespace propprog::trainer {

// One supervised example: a program input together with the output trace
// the proposal should learn to produce.
struct TrainingPair {
  std::any input;
  ChoiceMap z;
};

// A distribution over training pairs, sampled by seed so that minibatch
// draws are reproducible.
struct PairDistribution {
  std::function<TrainingPair(std::uint64_t seed)> sample;
  std::string description;
};

// Leave-one-out log means: entry k is log((1/(K-1)) sum_{j != k}
// exp(log_p_outputs[j])).
std::vector<double> leave_one_out_log_means(const std::vector<double>& log_p_outputs);

// The score-function gradient estimate of the K-replicate objective from
// one batch of constrained executions:
//   g = sum_k (log xi_hat - log xi_hat_without_k) * grad log p_internal_k
//   h = sum_k W_k * grad log p_output_k,  W = softmax(log_p_outputs)
// Every term is computed from the differences log_p_outputs[i] - max, so
// shifting all inputs by an exactly representable constant leaves the
// baseline differences and the weights bit-identical.
GradMap combine_score_terms(const std::vector<double>& log_p_outputs,
                            const std::vector<GradMap>& internal_grads,
                            const std::vector<GradMap>& output_grads);

struct GradientEstimate {
  GradMap grad;
  double log_xi_hat = 0.0;
};

// Estimates the parameter gradient of the multi-sample objective for one
// pair with K >= 2 constrained executions (K >= 2 so that every replicate
// has a nonempty leave-one-out baseline). Replicate k runs on the
// substream derive_seed(seed, k). Throws DegenerateBatchError when z is
// out of support of all K executions.
GradientEstimate estimate_gradient(const runtime::ProposalProgram& p,
                                   const std::any& input, const ChoiceMap& z,
                                   const ParamStore& params, int k_replicates,
                                   std::uint64_t seed);

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Gradient-ascent optimizer state. All state is public so that checkpoints
// can serialize it and resume bit-identically.
struct Optimizer {
  enum class Kind { kSgd, kAdam };

  Kind kind = Kind::kSgd;
  double step_size = 0.1;
  AdamConfig adam;
  std::int64_t t = 0;
  std::map<std::string, Tensor> first_moments;
  std::map<std::string, Tensor> second_moments;

  static Optimizer make_sgd(double step_size);
  static Optimizer make_adam(AdamConfig config = {});

  // One ascent step along mean_grad. Parameters absent from mean_grad are
  // treated as having zero gradient.
  void ascend(ParamStore& params, const GradMap& mean_grad);
};

struct TrainOptions {
  int k_replicates = 2;
  int batch_size = 1;
  std::int64_t iterations = 0;
  std::uint64_t seed = 0;
};

struct TrainResult {
  // Per-iteration mean of log xi_hat over the minibatch.
  std::vector<double> objective_log;
};

// Stochastic gradient ascent on the multi-sample objective: each iteration
// draws batch_size pairs from r, averages their gradient estimates in index
// order, and applies one optimizer step. Iteration t and element m use the
// substream derive_seed(derive_seed(seed, t), m), so the trajectory depends
// only on (seed, K, M), not on scheduling. A non-finite mean gradient
// raises NonFiniteGradientError naming the iteration.
TrainResult train(const runtime::ProposalProgram& p, const PairDistribution& r,
                  ParamStore& params, Optimizer& opt, const TrainOptions& options);

// Monte Carlo estimate of the K-replicate objective: the mean over n_outer
// pairs drawn from r of log xi_hat from one K-replicate assessment each.
double objective_estimate(const runtime::ProposalProgram& p, const PairDistribution& r,
                          const ParamStore& params, int k_replicates, int n_outer,
                          std::uint64_t seed);

// Checkpoint JSON:
//   {"iteration":t,"params":{name:[[dims],v...]},"opt_state":{...},
//    "extra":{...}}
// Save and load round trip bit-identically, so training resumes exactly.
void save_checkpoint(const std::string& path, std::int64_t iteration,
                     const ParamStore& params, const Optimizer& opt,
                     const std::map<std::string, std::string>& extra = {});

struct Checkpoint {
  std::int64_t iteration = 0;
  ParamStore params;
  Optimizer opt;
  std::map<std::string, std::string> extra;
};
Checkpoint load_checkpoint(const std::string& path);

// Objective trace CSV with columns (iteration, mean_log_xi_hat), preceded
// by "# "-prefixed header comment lines.
void write_objective_csv(const std::string& path, const std::vector<double>& objective_log,
                         const std::vector<std::string>& header_comments);

}  // namespace propprog::trainer
