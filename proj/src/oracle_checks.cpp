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

#include "propprog/oracle_checks.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "propprog/errors.hpp"
#include "propprog/fixtures.hpp"
#include "propprog/math.hpp"
#include "propprog/oracle.hpp"
#include "propprog/rng.hpp"
#include "propprog/samplers.hpp"
#include "propprog/trainer.hpp"

namespace propprog::oracle_checks {

namespace {

constexpr std::uint64_t kSmokeSeed = 20260822;

// Collects named requirements; the check passes when every one held.
class Requirements {
 public:
  void require(bool condition, const std::string& what) {
    ++total_;
    if (!condition) {
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }

  void require_close(double actual, double expected, double tol,
                     const std::string& what) {
    double dev = std::fabs(actual - expected);
    if (std::isfinite(dev)) worst_ = std::max(worst_, dev);
    std::ostringstream msg;
    msg << what << ": got " << std::setprecision(17) << actual << ", want "
        << expected << " within " << tol;
    require(dev <= tol, msg.str());
  }

  void require_within_se(double actual, double expected, double se, double factor,
                         const std::string& what) {
    std::ostringstream msg;
    msg << what << ": got " << std::setprecision(17) << actual << ", want "
        << expected << " within " << factor << " x se " << se;
    require(se > 0.0 && std::fabs(actual - expected) <= factor * se, msg.str());
  }

  CheckResult result(const std::string& name) const {
    CheckResult r;
    r.name = name;
    r.passed = failures_.empty();
    std::ostringstream detail;
    if (r.passed) {
      detail << total_ << " requirements held, worst deviation "
             << std::setprecision(3) << worst_;
    } else {
      detail << failures_;
    }
    r.detail = detail.str();
    return r;
  }

 private:
  int total_ = 0;
  double worst_ = 0.0;
  std::string failures_;
};

double log_p_output(const Trace& trace, const OutputSelection& outputs) {
  return split_log_prob(trace, outputs).first;
}

// Mean and standard error of a stream of values.
struct RunningMean {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double se() const {
    double m = mean();
    double var = sum_sq / static_cast<double>(n) - m * m;
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  }
};

CheckResult check_enumeration_totals() {
  Requirements req;
  for (const fixtures::Fixture* f : fixtures::all_fixtures()) {
    auto en = oracle::enumerate(*f->program, f->input, f->params);
    req.require_close(en.total_prob(), 1.0, 1e-12, f->name + " full total");
    for (std::size_t i = 0; i < f->z_support.size(); ++i) {
      auto ec = oracle::enumerate_constrained(*f->program, f->input, f->params,
                                              f->z_support[i]);
      req.require_close(ec.total_prob(), 1.0, 1e-12,
                        f->name + " constrained total #" + std::to_string(i));
    }
  }
  return req.result("enumeration-totals");
}

CheckResult check_support_coverage() {
  Requirements req;
  for (const fixtures::Fixture* f : fixtures::all_fixtures()) {
    auto en = oracle::enumerate(*f->program, f->input, f->params);
    for (std::size_t i = 0; i < f->z_support.size(); ++i) {
      if (f->target_probs[i] <= 0.0) continue;
      double marginal = oracle::exact_marginal(en, f->z_support[i], f->outputs);
      req.require(marginal > 0.0, f->name + " output #" + std::to_string(i) +
                                      " has zero proposal mass");
    }
  }
  return req.result("support-coverage");
}

// For every extended K = 2 tuple (one forward execution, one constrained
// replicate), the tuple probability times the importance weight
// pi(z) / xi_hat must integrate to exactly pi(z) for each output trace z,
// provided every constrained execution of z is feasible. When infeasible
// executions carry internal mass a_z, the integral provably shrinks to
// pi(z) (1 - a_z^2); three_path pins that deficiency exactly, showing the
// feasibility condition is necessary and sharp.
CheckResult check_is_weight_identity() {
  Requirements req;
  for (const char* name : {"two_coin", "out_chain", "sticky", "three_path"}) {
    const auto& f = fixtures::fixture_by_name(name);
    std::vector<double> integrated(f.z_support.size(), 0.0);
    std::vector<double> infeasible_mass(f.z_support.size(), 0.0);
    auto en = oracle::enumerate(*f.program, f.input, f.params);
    for (const auto& wt : en.traces) {
      ChoiceMap z = restrict(wt.trace, f.outputs);
      std::size_t zi = 0;
      while (zi < f.z_support.size() && !(f.z_support[zi] == z)) ++zi;
      req.require(zi < f.z_support.size(), f.name + ": unknown output trace");
      if (zi == f.z_support.size()) continue;
      double pi_z = std::exp(f.target.log_density(z));
      double p_full = std::exp(wt.trace.total_log_prob());
      double p_o_fwd = std::exp(log_p_output(wt.trace, f.outputs));
      auto ec = oracle::enumerate_constrained(*f.program, f.input, f.params, z);
      infeasible_mass[zi] = 0.0;
      for (const auto& c : ec.traces) {
        double log_p_o_rep = log_p_output(c.trace, f.outputs);
        if (log_p_o_rep == kNegInf) infeasible_mass[zi] += std::exp(c.log_prob);
        double xi_hat = 0.5 * (p_o_fwd + std::exp(log_p_o_rep));
        double tuple_prob = p_full * std::exp(c.log_prob);
        integrated[zi] += tuple_prob * (pi_z / xi_hat);
      }
    }
    for (std::size_t zi = 0; zi < f.z_support.size(); ++zi) {
      double pi_z = std::exp(f.target.log_density(f.z_support[zi]));
      double a = infeasible_mass[zi];
      double expected = pi_z * (1.0 - a * a);
      req.require_close(integrated[zi], expected, 1e-12 * std::max(1.0, expected),
                        f.name + " weight integral #" + std::to_string(zi));
      if (std::string(name) != "three_path") {
        req.require(a == 0.0, f.name + " unexpectedly has infeasible mass");
      }
    }
  }
  return req.result("is-weight-identity");
}

// Exact reversibility of one full-block MH step at K = 2: enumerating every
// forward tuple, reverse tuple, and acceptance decision, the probability
// flow pi(z) T(z -> z') must equal pi(z') T(z' -> z) for all pairs.
CheckResult check_mh_detailed_balance() {
  Requirements req;
  for (const char* name : {"two_coin", "sticky", "three_path"}) {
    const auto& f = fixtures::fixture_by_name(name);
    std::size_t n = f.z_support.size();
    std::vector<double> log_pi(n);
    std::vector<oracle::EnumeratedProgram> full(n);
    std::vector<std::vector<oracle::EnumeratedProgram>> constrained(n);
    for (std::size_t a = 0; a < n; ++a) {
      log_pi[a] = f.target.log_density(f.z_support[a]);
      std::any input_a(f.z_support[a]);
      full[a] = oracle::enumerate(*f.program, input_a, f.params);
      constrained[a].resize(n);
      for (std::size_t b = 0; b < n; ++b) {
        constrained[a][b] = oracle::enumerate_constrained(*f.program, input_a,
                                                          f.params, f.z_support[b]);
      }
    }

    // flow[a][b] = pi(z_a) T(z_a -> z_b) for a != b.
    std::vector<std::vector<double>> flow(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) continue;
        double transition = 0.0;
        for (const auto& fwd : full[a].traces) {
          if (!(restrict(fwd.trace, f.outputs) == f.z_support[b])) continue;
          double p_fwd = std::exp(fwd.trace.total_log_prob());
          double p_o_fwd = std::exp(log_p_output(fwd.trace, f.outputs));
          for (const auto& cf : constrained[a][b].traces) {
            double p_o_cf = std::exp(log_p_output(cf.trace, f.outputs));
            double log_xi_fwd = std::log(0.5 * (p_o_fwd + p_o_cf));
            double tuple_fwd = p_fwd * std::exp(cf.log_prob);
            for (const auto& r1 : constrained[b][a].traces) {
              for (const auto& r2 : constrained[b][a].traces) {
                double xi_rev = 0.5 * (std::exp(log_p_output(r1.trace, f.outputs)) +
                                       std::exp(log_p_output(r2.trace, f.outputs)));
                double log_alpha =
                    std::min(0.0, (log_pi[b] - log_pi[a]) +
                                      (std::log(xi_rev) - log_xi_fwd));
                transition += tuple_fwd * std::exp(r1.log_prob) *
                              std::exp(r2.log_prob) * std::exp(log_alpha);
              }
            }
          }
        }
        flow[a][b] = std::exp(log_pi[a]) * transition;
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        req.require_close(flow[a][b], flow[b][a],
                          1e-12 * std::max(1.0, std::max(flow[a][b], flow[b][a])),
                          f.name + " flow " + std::to_string(a) + "<->" +
                              std::to_string(b));
      }
    }
  }
  return req.result("mh-detailed-balance");
}

CheckResult check_objective_ordering() {
  Requirements req;
  {
    const auto& f = fixtures::fixture_by_name("two_coin");
    std::vector<oracle::WeightedPair> pairs;
    for (const auto& z : f.z_support) pairs.push_back({f.input, z, 0.5});
    double previous = -std::numeric_limits<double>::infinity();
    double objective = 0.0;
    for (int k = 1; k <= 3; ++k) {
      auto exact = oracle::exact_objectives(*f.program, pairs, f.params, k);
      objective = exact.objective;
      req.require(exact.lower_bound >= previous + 1e-6,
                  "two_coin bound not strictly increasing at K=" + std::to_string(k));
      req.require(exact.lower_bound <= exact.objective - 1e-6,
                  "two_coin bound not strictly below the objective at K=" +
                      std::to_string(k));
      previous = exact.lower_bound;
    }
    req.require(std::isfinite(objective), "two_coin objective not finite");
  }
  {
    const auto& f = fixtures::fixture_by_name("no_internal");
    std::vector<oracle::WeightedPair> pairs;
    for (const auto& z : f.z_support)
      pairs.push_back({f.input, z, 1.0 / static_cast<double>(f.z_support.size())});
    for (int k = 1; k <= 3; ++k) {
      auto exact = oracle::exact_objectives(*f.program, pairs, f.params, k);
      req.require_close(exact.lower_bound, exact.objective, 1e-12,
                        "no_internal bound at K=" + std::to_string(k));
    }
  }
  return req.result("objective-ordering");
}

CheckResult check_gof_machinery() {
  Requirements req;
  for (double s : {0.1, 0.5, 1.0, 2.41, 5.0, 10.0}) {
    double x = 0.5 * s;
    double y = std::sqrt(x);
    req.require_close(oracle::regularized_gamma_q(0.5, x), std::erfc(y), 1e-12,
                      "df=1 tail at " + std::to_string(s));
    req.require_close(oracle::regularized_gamma_q(1.0, x), std::exp(-x), 1e-12,
                      "df=2 tail at " + std::to_string(s));
    double df3 = std::erfc(y) + (2.0 / std::sqrt(M_PI)) * y * std::exp(-x);
    req.require_close(oracle::regularized_gamma_q(1.5, x), df3, 1e-12,
                      "df=3 tail at " + std::to_string(s));
  }
  {
    auto gof = oracle::chi_square_gof({25, 25, 25, 25}, {0.25, 0.25, 0.25, 0.25});
    req.require_close(gof.statistic, 0.0, 1e-12, "exact-fit statistic");
    req.require_close(gof.p_value, 1.0, 1e-12, "exact-fit p value");
    req.require(gof.degrees_of_freedom == 3, "exact-fit degrees of freedom");
  }
  {
    auto gof = oracle::chi_square_gof({30, 20, 25, 25}, {0.25, 0.25, 0.25, 0.25});
    req.require_close(gof.statistic, 2.0, 1e-12, "off-fit statistic");
    double expected = std::erfc(1.0) + (2.0 / std::sqrt(M_PI)) * std::exp(-1.0);
    req.require_close(gof.p_value, expected, 1e-12, "off-fit p value");
  }
  req.require_close(oracle::tv_distance({0.2, 0.8}, {0.5, 0.5}), 0.3, 1e-15,
                    "tv hand value");
  req.require_close(oracle::tv_distance({0.25, 0.75}, {0.25, 0.75}), 0.0, 1e-15,
                    "tv self distance");
  return req.result("gof-machinery");
}

CheckResult check_unbiasedness_smoke() {
  Requirements req;
  const auto& f = fixtures::fixture_by_name("four_state");
  auto en = oracle::enumerate(*f.program, f.input, f.params);
  const int n = 3000;
  const int k = 3;
  for (std::size_t zi = 0; zi < f.z_support.size(); ++zi) {
    double exact = oracle::exact_marginal(en, f.z_support[zi], f.outputs);
    std::uint64_t z_seed = derive_seed(kSmokeSeed, zi);
    RunningMean stats;
    for (int i = 0; i < n; ++i) {
      auto ar = runtime::assess(*f.program, f.input, f.params, f.z_support[zi], k,
                                f.outputs, derive_seed(z_seed, i));
      stats.add(std::exp(ar.estimate.log_xi_hat));
    }
    req.require_within_se(stats.mean(), exact, stats.se(), 5.0,
                          "four_state estimate mean #" + std::to_string(zi));
  }
  return req.result("unbiasedness-smoke");
}

CheckResult check_mh_smoke() {
  Requirements req;
  const auto& f = fixtures::fixture_by_name("two_coin");
  samplers::MhKernel kernel;
  kernel.program = f.program.get();
  kernel.params = &f.params;
  kernel.k_replicates = 2;
  kernel.block = f.outputs;
  auto chain = samplers::mh_chain(f.target, {kernel}, f.z0, 20000, kSmokeSeed);
  std::vector<double> occupancy(f.z_support.size(), 0.0);
  std::size_t burn_in = 1000;
  std::size_t counted = 0;
  for (std::size_t t = burn_in; t < chain.iterates.size(); ++t) {
    for (std::size_t zi = 0; zi < f.z_support.size(); ++zi) {
      if (chain.iterates[t] == f.z_support[zi]) {
        occupancy[zi] += 1.0;
        ++counted;
        break;
      }
    }
  }
  req.require(counted == chain.iterates.size() - burn_in,
              "chain visited an unknown output trace");
  for (double& c : occupancy) c /= static_cast<double>(counted);
  double tv = oracle::tv_distance(occupancy, f.target_probs);
  std::ostringstream what;
  what << "occupancy tv " << std::setprecision(4) << tv << " vs bound 0.03";
  req.require(tv < 0.03, what.str());
  req.require(chain.kernel_accept_rates.at(0) > 0.05, "acceptance rate too low");
  return req.result("mh-smoke");
}

CheckResult check_gradient_smoke() {
  Requirements req;
  auto program = fixtures::param_two_coin_program();
  ParamStore params = fixtures::param_two_coin_params(0.3, -0.4);
  ChoiceMap z;
  z.set("z", Value(true));
  std::any input;
  const int k = 2;
  GradMap exact = oracle::exact_lower_bound_gradient(*program, input, z, params, k);
  const int n = 20000;
  std::map<std::string, RunningMean> stats;
  for (int i = 0; i < n; ++i) {
    auto est = trainer::estimate_gradient(*program, input, z, params, k,
                                          derive_seed(kSmokeSeed, i));
    for (const auto& name : params.names()) {
      auto it = est.grad.find(name);
      stats[name].add(it == est.grad.end() ? 0.0 : it->second.scalar_value());
    }
  }
  for (const auto& name : params.names()) {
    auto it = exact.find(name);
    req.require(it != exact.end(), "exact gradient missing " + name);
    if (it == exact.end()) continue;
    req.require_within_se(stats[name].mean(), it->second.scalar_value(),
                          stats[name].se(), 5.0, "gradient mean for " + name);
  }
  return req.result("gradient-smoke");
}

struct NamedCheck {
  const char* name;
  CheckResult (*fn)();
};

const NamedCheck kChecks[] = {
    {"enumeration-totals", check_enumeration_totals},
    {"support-coverage", check_support_coverage},
    {"is-weight-identity", check_is_weight_identity},
    {"mh-detailed-balance", check_mh_detailed_balance},
    {"objective-ordering", check_objective_ordering},
    {"gof-machinery", check_gof_machinery},
    {"unbiasedness-smoke", check_unbiasedness_smoke},
    {"mh-smoke", check_mh_smoke},
    {"gradient-smoke", check_gradient_smoke},
};

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& c : kChecks) out.push_back(c.name);
    return out;
  }();
  return names;
}

CheckResult run_check(const std::string& name) {
  for (const auto& c : kChecks) {
    if (name == c.name) {
      try {
        return c.fn();
      } catch (const std::exception& e) {
        CheckResult r;
        r.name = name;
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
        return r;
      }
    }
  }
  throw ConfigError("unknown check: " + name);
}

std::vector<CheckResult> run_suite(const std::vector<std::string>& names) {
  std::vector<CheckResult> results;
  if (names.empty()) {
    for (const auto& c : kChecks) results.push_back(run_check(c.name));
  } else {
    for (const auto& name : names) results.push_back(run_check(name));
  }
  return results;
}

}  // namespace propprog::oracle_checks
