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

#include "propprog/oracle.hpp"

#include <cmath>

#include "propprog/errors.hpp"
#include "propprog/math.hpp"

namespace propprog::oracle {

namespace {

struct ChoicePoint {
  std::vector<Value> support;
  std::vector<double> log_probs;
  std::size_t index = 0;
};

// Replays the prefix held on the shared stack, then extends it with the
// first supported value of each new choice point.
class DfsScript : public runtime::ChoiceScript {
 public:
  explicit DfsScript(std::vector<ChoicePoint>* stack) : stack_(stack) {}

  Value next_choice(const dist::Distribution& d) override {
    if (cursor_ < stack_->size()) {
      ChoicePoint& cp = (*stack_)[cursor_];
      ++cursor_;
      log_prob_ += cp.log_probs[cp.index];
      return cp.support[cp.index];
    }
    ChoicePoint cp;
    cp.support = d.support();
    if (cp.support.empty()) throw NonEnumerableError("empty support under enumeration");
    cp.log_probs.reserve(cp.support.size());
    for (const Value& v : cp.support) cp.log_probs.push_back(d.log_density(v));
    Value first = cp.support[0];
    log_prob_ += cp.log_probs[0];
    stack_->push_back(std::move(cp));
    ++cursor_;
    return first;
  }

  double log_prob() const { return log_prob_; }

 private:
  std::vector<ChoicePoint>* stack_;
  std::size_t cursor_ = 0;
  double log_prob_ = 0.0;
};

EnumeratedProgram enumerate_impl(const runtime::ProposalProgram& p, const std::any& input,
                                 const ParamStore& params, const ChoiceMap& constraints,
                                 const EnumerateOptions& options) {
  EnumeratedProgram out;
  std::vector<ChoicePoint> stack;
  for (;;) {
    DfsScript script(&stack);
    Trace trace = runtime::run_scripted(p, input, params, constraints, script);
    if (out.traces.size() >= options.max_traces) {
      throw BranchLimitError("enumeration exceeded max_traces");
    }
    out.traces.push_back({std::move(trace), script.log_prob()});
    while (!stack.empty()) {
      ChoicePoint& top = stack.back();
      if (++top.index < top.support.size()) break;
      stack.pop_back();
    }
    if (stack.empty()) break;
  }
  return out;
}

// All choices of the trace as a constraint map, for gradient replay.
ChoiceMap full_assignment(const Trace& trace) {
  ChoiceMap out;
  for (const auto& r : trace.records()) out.set(r.address, r.value);
  return out;
}

double regularized_gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double regularized_gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1e308;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double EnumeratedProgram::total_prob() const {
  double sum = 0.0;
  for (const auto& wt : traces) sum += std::exp(wt.log_prob);
  return sum;
}

EnumeratedProgram enumerate(const runtime::ProposalProgram& p, const std::any& input,
                            const ParamStore& params, EnumerateOptions options) {
  return enumerate_impl(p, input, params, ChoiceMap(), options);
}

EnumeratedProgram enumerate_constrained(const runtime::ProposalProgram& p,
                                        const std::any& input, const ParamStore& params,
                                        const ChoiceMap& z, EnumerateOptions options) {
  return enumerate_impl(p, input, params, z, options);
}

double exact_marginal(const EnumeratedProgram& enumerated, const ChoiceMap& z,
                      const OutputSelection& outputs) {
  double sum = 0.0;
  for (const auto& wt : enumerated.traces) {
    if (agrees(wt.trace, z, outputs)) sum += std::exp(wt.log_prob);
  }
  return sum;
}

std::size_t OutputDistribution::index_of(const ChoiceMap& z) const {
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i] == z) return i;
  }
  throw DomainError("output trace not present in the enumerated distribution");
}

OutputDistribution exact_output_distribution(const EnumeratedProgram& enumerated,
                                             const OutputSelection& outputs) {
  OutputDistribution dist;
  for (const auto& wt : enumerated.traces) {
    ChoiceMap z = restrict(wt.trace, outputs);
    double prob = std::exp(wt.log_prob);
    bool found = false;
    for (std::size_t i = 0; i < dist.outputs.size(); ++i) {
      if (dist.outputs[i] == z) {
        dist.probs[i] += prob;
        found = true;
        break;
      }
    }
    if (!found) {
      dist.outputs.push_back(std::move(z));
      dist.probs.push_back(prob);
    }
  }
  return dist;
}

ExactObjectives exact_objectives(const runtime::ProposalProgram& p,
                                 const std::vector<WeightedPair>& pairs,
                                 const ParamStore& params, int k_replicates,
                                 EnumerateOptions options) {
  if (k_replicates < 1) throw DomainError("exact_objectives requires K >= 1");
  ExactObjectives out;
  for (const auto& pair : pairs) {
    OutputSelection sel = selection_of(pair.z);
    EnumeratedProgram full = enumerate(p, pair.input, params, options);
    double pz = exact_marginal(full, pair.z, sel);
    out.objective += pair.weight * (pz > 0.0 ? std::log(pz) : kNegInf);

    EnumeratedProgram cons =
        enumerate_constrained(p, pair.input, params, pair.z, options);
    std::size_t m = cons.traces.size();
    std::vector<double> q(m);
    std::vector<double> p_out(m);
    double q_total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      q[i] = std::exp(cons.traces[i].log_prob);
      q_total += q[i];
      p_out[i] = std::exp(split_log_prob(cons.traces[i].trace, sel).first);
    }
    if (std::fabs(q_total - 1.0) > 1e-9) {
      throw DomainError("constrained enumeration probabilities do not sum to 1");
    }

    double tuples = std::pow(static_cast<double>(m), k_replicates);
    if (tuples > static_cast<double>(options.max_traces)) {
      throw BranchLimitError("tuple enumeration exceeds max_traces");
    }

    double bound = 0.0;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k_replicates), 0);
    for (;;) {
      double tuple_prob = 1.0;
      double xi_sum = 0.0;
      for (std::size_t k = 0; k < idx.size(); ++k) {
        tuple_prob *= q[idx[k]];
        xi_sum += p_out[idx[k]];
      }
      double log_xi = xi_sum > 0.0
                          ? std::log(xi_sum / static_cast<double>(k_replicates))
                          : kNegInf;
      bound += tuple_prob * log_xi;
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == m) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) break;
    }
    out.lower_bound += pair.weight * bound;
  }
  double slack = 1e-12 * std::max(1.0, std::fabs(out.objective));
  if (out.lower_bound > out.objective + slack) {
    throw DomainError("multi-sample lower bound exceeded the objective");
  }
  return out;
}

GradMap exact_lower_bound_gradient(const runtime::ProposalProgram& p,
                                   const std::any& input, const ChoiceMap& z,
                                   const ParamStore& params, int k_replicates,
                                   EnumerateOptions options) {
  if (k_replicates < 1) throw DomainError("exact gradient requires K >= 1");
  OutputSelection sel = selection_of(z);
  EnumeratedProgram cons = enumerate_constrained(p, input, params, z, options);
  std::size_t m = cons.traces.size();

  std::vector<double> q(m);
  std::vector<double> p_out(m);
  std::vector<GradMap> grad_internal(m);
  std::vector<GradMap> grad_output(m);
  for (std::size_t i = 0; i < m; ++i) {
    q[i] = std::exp(cons.traces[i].log_prob);
    p_out[i] = std::exp(split_log_prob(cons.traces[i].trace, sel).first);
    runtime::GradRun replay = runtime::run_constrained_grad(
        p, input, params, full_assignment(cons.traces[i].trace), sel, 0);
    grad_internal[i] = std::move(replay.internal_grads);
    grad_output[i] = std::move(replay.output_grads);
  }

  double tuples = std::pow(static_cast<double>(m), k_replicates);
  if (tuples > static_cast<double>(options.max_traces)) {
    throw BranchLimitError("tuple enumeration exceeds max_traces");
  }

  GradMap grad;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k_replicates), 0);
  for (;;) {
    double tuple_prob = 1.0;
    double xi_sum = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      tuple_prob *= q[idx[k]];
      xi_sum += p_out[idx[k]];
    }
    if (xi_sum <= 0.0) {
      throw DomainError("lower bound is -inf; gradient undefined");
    }
    double log_xi = std::log(xi_sum / static_cast<double>(k_replicates));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      accumulate(grad, grad_internal[idx[k]], tuple_prob * log_xi);
      if (p_out[idx[k]] > 0.0) {
        accumulate(grad, grad_output[idx[k]], tuple_prob * p_out[idx[k]] / xi_sum);
      }
    }
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == m) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  return grad;
}

GofResult chi_square_gof(const std::vector<std::int64_t>& observed,
                         const std::vector<double>& expected_probs) {
  if (observed.size() != expected_probs.size() || observed.size() < 2) {
    throw DomainError("chi_square_gof: need matching cell vectors with >= 2 cells");
  }
  double n = 0.0;
  for (std::int64_t c : observed) {
    if (c < 0) throw DomainError("chi_square_gof: negative count");
    n += static_cast<double>(c);
  }
  if (n <= 0.0) throw DomainError("chi_square_gof: empty sample");
  GofResult out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected_probs[i] > 0.0)) {
      throw DomainError("chi_square_gof: expected probabilities must be positive");
    }
    double expected = n * expected_probs[i];
    double d = static_cast<double>(observed[i]) - expected;
    out.statistic += d * d / expected;
  }
  out.degrees_of_freedom = static_cast<int>(observed.size()) - 1;
  out.p_value = regularized_gamma_q(0.5 * out.degrees_of_freedom, 0.5 * out.statistic);
  return out;
}

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DomainError("tv_distance: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::fabs(p[i] - q[i]);
  return 0.5 * sum;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw DomainError("regularized_gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - regularized_gamma_p_series(a, x);
  return regularized_gamma_q_cf(a, x);
}

}  // namespace propprog::oracle
