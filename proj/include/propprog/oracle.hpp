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
#include <vector>

#include "propprog/runtime.hpp"
#include "propprog/trace.hpp"

namespace propprog::oracle {

// One exhaustively enumerated execution. log_prob is the log probability of
// the execution under the enumeration mode: for unconstrained enumeration
// it equals the trace's total log probability; for constrained enumeration
// it covers only the freely sampled choices (the constrained ones are
// forced, not drawn).
struct WeightedTrace {
  Trace trace;
  double log_prob = 0.0;
};

struct EnumerateOptions {
  std::size_t max_traces = 1000000;
};

// All positive-probability executions of a discrete program, found by
// depth-first search over a stack of choice points: each run replays the
// prefix recorded on the stack, extends it with first-support values, and
// the driver then advances the deepest choice point that has values left.
// Programs that touch a continuous distribution or raw randomness are
// rejected with NonEnumerableError; exceeding max_traces raises
// BranchLimitError.
struct EnumeratedProgram {
  std::vector<WeightedTrace> traces;

  // Sum of exp(log_prob); 1 up to rounding for a complete enumeration.
  double total_prob() const;
};

EnumeratedProgram enumerate(const runtime::ProposalProgram& p, const std::any& input,
                            const ParamStore& params, EnumerateOptions options = {});

// As above with the choices of z forced, enumerating only the free choices.
EnumeratedProgram enumerate_constrained(const runtime::ProposalProgram& p,
                                        const std::any& input, const ParamStore& params,
                                        const ChoiceMap& z,
                                        EnumerateOptions options = {});

// Exact marginal output probability p(z; x): the sum of full-trace
// probabilities over the enumerated executions that agree with z on the
// output selection.
double exact_marginal(const EnumeratedProgram& enumerated, const ChoiceMap& z,
                      const OutputSelection& outputs);

// All distinct output traces of an enumerated program with their exact
// marginal probabilities.
struct OutputDistribution {
  std::vector<ChoiceMap> outputs;
  std::vector<double> probs;

  std::size_t index_of(const ChoiceMap& z) const;
};
OutputDistribution exact_output_distribution(const EnumeratedProgram& enumerated,
                                             const OutputSelection& outputs);

// A training pair (x, z) with its probability weight under the pair
// distribution r.
struct WeightedPair {
  std::any input;
  ChoiceMap z;
  double weight = 0.0;
};

// Exact objective values by exhaustive enumeration:
//   objective = sum_pairs weight * log p(z; x)
//   lower_bound = sum_pairs weight * E[log xi_hat]
// where the inner expectation runs over all K-tuples of constrained
// executions. Checks the multi-sample bound lower_bound <= objective.
struct ExactObjectives {
  double objective = 0.0;
  double lower_bound = 0.0;
};
ExactObjectives exact_objectives(const runtime::ProposalProgram& p,
                                 const std::vector<WeightedPair>& pairs,
                                 const ParamStore& params, int k_replicates,
                                 EnumerateOptions options = {});

// Exact gradient of the K-replicate lower bound with respect to every
// parameter, by enumerating all K-tuples of constrained executions of a
// single pair and differentiating term by term.
GradMap exact_lower_bound_gradient(const runtime::ProposalProgram& p,
                                   const std::any& input, const ChoiceMap& z,
                                   const ParamStore& params, int k_replicates,
                                   EnumerateOptions options = {});

// Chi-square goodness of fit of observed counts against expected cell
// probabilities. Expected probabilities must be positive on every cell.
struct GofResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 0.0;
};
GofResult chi_square_gof(const std::vector<std::int64_t>& observed,
                         const std::vector<double>& expected_probs);

// Total variation distance between two distributions on the same cells.
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

// Upper regularized incomplete gamma Q(a, x), used for chi-square tail
// probabilities; series expansion below a + 1, continued fraction above.
double regularized_gamma_q(double a, double x);

}  // namespace propprog::oracle
