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

// Acceptance suite: each criterion prints exactly one [PASS]/[FAIL] line
// with its measured statistic and the bound it was held to. Run with a
// criterion number (1..10) to check one, or with no arguments for all.

#include <algorithm>
#include <any>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "propprog/dist.hpp"
#include "propprog/fixtures.hpp"
#include "propprog/linreg.hpp"
#include "propprog/math.hpp"
#include "propprog/nnet.hpp"
#include "propprog/oracle.hpp"
#include "propprog/oracle_checks.hpp"
#include "propprog/param_store.hpp"
#include "propprog/rng.hpp"
#include "propprog/runtime.hpp"
#include "propprog/samplers.hpp"
#include "propprog/trainer.hpp"

namespace pp = propprog;
namespace ppf = pp::fixtures;
namespace ppl = pp::linreg;
namespace ppo = pp::oracle;
namespace ppr = pp::runtime;
namespace pps = pp::samplers;
namespace ppt = pp::trainer;

using pp::dist::Distribution;

namespace {

constexpr std::uint64_t kAcceptanceSeed = 20260822;

struct Stat {
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

bool bitwise_equal(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

double rel_err(double actual, double reference) {
  return std::fabs(actual - reference) /
         std::max({1.0, std::fabs(actual), std::fabs(reference)});
}

void report(int id, bool passed, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", passed ? "PASS" : "FAIL", id,
              detail.c_str());
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return std::string(buf);
}

// 1. K-replicate assessments are unbiased for the exact output marginal on
// every discrete fixture with internal randomness, including one with
// infeasible constrained executions.
bool criterion_1() {
  const int n = 100000;
  const int k = 2;
  double worst = 0.0;
  int fixture_index = 0;
  for (const char* name : {"four_state", "three_path", "out_chain"}) {
    const auto& f = ppf::fixture_by_name(name);
    auto enumerated = ppo::enumerate(*f.program, f.input, f.params);
    std::size_t n_outputs = std::min<std::size_t>(3, f.z_support.size());
    for (std::size_t zi = 0; zi < n_outputs; ++zi) {
      double exact = ppo::exact_marginal(enumerated, f.z_support[zi], f.outputs);
      std::uint64_t base = pp::derive_seed(
          pp::derive_seed(kAcceptanceSeed, 100 + fixture_index), zi);
      Stat stat;
      for (int i = 0; i < n; ++i) {
        auto res = ppr::assess(*f.program, f.input, f.params, f.z_support[zi],
                               k, f.outputs, pp::derive_seed(base, i));
        stat.add(std::exp(res.estimate.log_xi_hat));
      }
      double dev = std::fabs(stat.mean() - exact) / stat.se();
      worst = std::max(worst, dev);
    }
    ++fixture_index;
  }
  bool passed = worst < 4.0;
  report(1, passed,
         fmt("assess means match exact marginals; worst |mean-exact|/se = "
             "%.2f (bound %.0f) at K=2, n=100000 per output",
             worst, 4.0));
  return passed;
}

// 2. With no internal randomness the estimate is exact for every K, and a
// one-replicate simulate scores its own trace exactly.
bool criterion_2() {
  double worst = 0.0;
  for (const char* name : {"no_internal", "point_mass"}) {
    const auto& f = ppf::fixture_by_name(name);
    auto enumerated = ppo::enumerate(*f.program, f.input, f.params);
    for (const auto& z : f.z_support) {
      double exact = std::log(ppo::exact_marginal(enumerated, z, f.outputs));
      for (int k : {1, 5}) {
        for (std::uint64_t s = 0; s < 20; ++s) {
          auto res = ppr::assess(*f.program, f.input, f.params, z, k,
                                 f.outputs, pp::derive_seed(kAcceptanceSeed, s));
          worst = std::max(worst, std::fabs(res.estimate.log_xi_hat - exact));
        }
      }
    }
  }

  bool exact_single = true;
  for (const char* name : {"two_coin", "three_path", "no_internal"}) {
    const auto& f = ppf::fixture_by_name(name);
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto sim = ppr::simulate(*f.program, f.input, f.params, 1, f.outputs,
                               pp::derive_seed(kAcceptanceSeed, 200 + s));
      double log_po = pp::split_log_prob(sim.traces[0], f.outputs).first;
      if (!bitwise_equal(sim.estimate.log_xi_hat, log_po)) exact_single = false;
    }
  }

  bool passed = worst <= 1e-12 && exact_single;
  report(2, passed,
         fmt("estimates are exact without internal randomness; worst "
             "|log xi_hat - log p| = %.2e (bound %.0e), K=1 simulate "
             "scores bitwise",
             worst, 1e-12));
  return passed;
}

// 3. Self-normalized importance sampling converges to the true posterior
// expectation, with the error inside four bootstrap standard errors and
// shrinking from N=1000 to N=100000 on a shared particle stream.
bool criterion_3() {
  const auto& f = ppf::fixture_by_name("two_coin");
  auto indicator = [](const pp::ChoiceMap& z) {
    return z.at("z").as_boolean() ? 1.0 : 0.0;
  };
  const double exact = 0.9;
  std::uint64_t seed = pp::derive_seed(kAcceptanceSeed, 3);

  double worst_dev = 0.0;
  bool shrinks = true;
  for (int k : {1, 10}) {
    auto big = pps::importance_sample(f.target, *f.program, f.input, f.params,
                                      100000, k, indicator, f.outputs, seed);
    auto small = pps::importance_sample(f.target, *f.program, f.input,
                                        f.params, 1000, k, indicator,
                                        f.outputs, seed);

    double max_lw = pp::kNegInf;
    for (const auto& s : big.samples) max_lw = std::max(max_lw, s.log_weight);
    std::vector<double> v(big.samples.size());
    std::vector<double> fv(big.samples.size());
    for (std::size_t i = 0; i < big.samples.size(); ++i) {
      v[i] = std::exp(big.samples[i].log_weight - max_lw);
      fv[i] = big.samples[i].f_value;
    }

    pp::RandomStream boot(pp::derive_seed(seed, 777 + k));
    Stat boot_stat;
    const int b_reps = 200;
    for (int b = 0; b < b_reps; ++b) {
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        std::int64_t j = boot.uniform_int(0, static_cast<std::int64_t>(v.size()) - 1);
        num += v[j] * fv[j];
        den += v[j];
      }
      boot_stat.add(num / den);
    }
    double boot_se = boot_stat.se() * std::sqrt(static_cast<double>(boot_stat.n));

    double dev = std::fabs(big.estimate - exact) / boot_se;
    worst_dev = std::max(worst_dev, dev);
    if (std::fabs(big.estimate - exact) > std::fabs(small.estimate - exact)) {
      shrinks = false;
    }
  }

  bool passed = worst_dev < 4.0 && shrinks;
  report(3, passed,
         fmt("importance sampling converges; worst |est-0.9|/bootstrap_se = "
             "%.2f (bound %.0f) at N=100000, error shrinks from N=1000",
             worst_dev, 4.0));
  return passed;
}

// 4. Metropolis-Hastings with estimated proposal probabilities leaves the
// target invariant for K in {1, 2, 10}: thinned occupancy passes a
// chi-square test and total variation stays small.
bool criterion_4() {
  const auto& f = ppf::fixture_by_name("four_state");
  const std::int64_t steps = 200000;
  const std::size_t burn_in = 10000;
  const std::size_t thin = 10;

  double worst_tv = 0.0;
  double worst_p = 1.0;
  for (int k : {1, 2, 10}) {
    pps::MhKernel kernel{f.program.get(), &f.params, k, f.outputs};
    auto chain = pps::mh_chain(f.target, {kernel}, f.z0, steps,
                               pp::derive_seed(kAcceptanceSeed, 40 + k));

    std::vector<double> freq(f.z_support.size(), 0.0);
    std::vector<std::int64_t> thinned(f.z_support.size(), 0);
    std::int64_t total = 0;
    for (std::size_t t = burn_in; t < chain.iterates.size(); ++t) {
      for (std::size_t i = 0; i < f.z_support.size(); ++i) {
        if (chain.iterates[t] == f.z_support[i]) {
          freq[i] += 1.0;
          if ((t - burn_in) % thin == 0) ++thinned[i];
          break;
        }
      }
      ++total;
    }
    for (double& x : freq) x /= static_cast<double>(total);

    worst_tv = std::max(worst_tv, ppo::tv_distance(freq, f.target_probs));
    auto gof = ppo::chi_square_gof(thinned, f.target_probs);
    worst_p = std::min(worst_p, gof.p_value);
  }

  bool passed = worst_tv < 0.02 && worst_p > 1e-3;
  report(4, passed,
         fmt("MH occupancy matches the target for K in {1,2,10}; worst tv = "
             "%.4f (bound 0.02), worst thinned chi-square p = %.3f (bound "
             "1e-3)",
             worst_tv, worst_p));
  return passed;
}

// 5. The extended-space accounting is exact: the importance weight
// identity (with its feasibility deficiency law) and pseudo-marginal
// detailed balance both hold under exhaustive enumeration.
bool criterion_5() {
  auto weight = pp::oracle_checks::run_check("is-weight-identity");
  auto balance = pp::oracle_checks::run_check("mh-detailed-balance");
  bool passed = weight.passed && balance.passed;
  report(5, passed,
         "extended-space identities hold exactly under enumeration; "
         "is-weight-identity: " + weight.detail +
         "; mh-detailed-balance: " + balance.detail);
  return passed;
}

// 6. The multi-sample objective is ordered: strictly increasing in K on a
// fixture with internal randomness, bounded by the marginal objective, and
// collapsing to it when there is nothing to marginalize.
bool criterion_6() {
  auto check = pp::oracle_checks::run_check("objective-ordering");
  report(6, check.passed,
         "multi-sample objectives are ordered and tight; " + check.detail);
  return check.passed;
}

// 7. The score-function gradient estimator is correct: the enumerated
// gradient matches finite differences and the sampled estimator matches
// the enumerated gradient in expectation.
bool criterion_7() {
  auto program = ppf::param_two_coin_program();
  auto params = ppf::param_two_coin_params(0.3, -0.4);
  pp::ChoiceMap z;
  z.set("z", pp::Value(true));
  const int k = 2;
  const double h = 1e-6;

  auto exact = ppo::exact_lower_bound_gradient(*program, {}, z, params, k);
  double worst_fd = 0.0;
  for (const char* name : {"theta_u", "theta_z"}) {
    double base = params.value(name).scalar_value();
    std::vector<ppo::WeightedPair> pairs = {{std::any{}, z, 1.0}};
    params.value(name).data()[0] = base + h;
    double up = ppo::exact_objectives(*program, pairs, params, k).lower_bound;
    params.value(name).data()[0] = base - h;
    double down = ppo::exact_objectives(*program, pairs, params, k).lower_bound;
    params.value(name).data()[0] = base;
    double fd = (up - down) / (2.0 * h);
    worst_fd = std::max(worst_fd, rel_err(exact.at(name).scalar_value(), fd));
  }

  const int n = 1000000;
  std::map<std::string, Stat> stats;
  std::uint64_t base = pp::derive_seed(kAcceptanceSeed, 7);
  for (int i = 0; i < n; ++i) {
    auto est = ppt::estimate_gradient(*program, {}, z, params, k,
                                      pp::derive_seed(base, i));
    for (const auto& [name, tensor] : est.grad) {
      stats[name].add(tensor.scalar_value());
    }
  }
  double worst_mc = 0.0;
  for (const char* name : {"theta_u", "theta_z"}) {
    const auto& s = stats.at(name);
    worst_mc = std::max(worst_mc,
                        std::fabs(s.mean() - exact.at(name).scalar_value()) /
                            s.se());
  }

  bool passed = worst_fd < 1e-5 && worst_mc < 4.0;
  report(7, passed,
         fmt("gradient estimator is correct; exact vs finite differences "
             "rel err = %.2e (bound 1e-5), sampled mean vs exact = %.2f se "
             "(bound 4) over 1000000 draws",
             worst_fd, worst_mc));
  return passed;
}

// 8. Every parameterized density gradient and the network backward pass
// agree with finite differences over randomized instances.
bool criterion_8() {
  pp::RandomStream rng(pp::derive_seed(kAcceptanceSeed, 8));
  double worst = 0.0;
  const double tol = 1e-5;

  for (int trial = 0; trial < 100; ++trial) {
    {
      double p = 0.05 + 0.9 * rng.uniform();
      pp::Value v(trial % 2 == 0);
      double h = 1e-6;
      auto g = Distribution::bernoulli(p).grad_log_density(v);
      double fd = (Distribution::bernoulli(p + h).log_density(v) -
                   Distribution::bernoulli(p - h).log_density(v)) /
                  (2.0 * h);
      worst = std::max(worst, rel_err(g.at("p"), fd));
    }
    {
      int cells = static_cast<int>(rng.uniform_int(2, 5));
      std::vector<double> probs(cells);
      double total = 0.0;
      for (double& q : probs) {
        q = 0.1 + rng.uniform();
        total += q;
      }
      for (double& q : probs) q /= total;
      std::int64_t v = rng.uniform_int(0, cells - 1);
      auto g = Distribution::categorical(probs).grad_log_density(pp::Value(v));
      for (int i = 0; i < cells; ++i) {
        double expect = (i == v) ? 1.0 / probs[static_cast<std::size_t>(v)] : 0.0;
        worst = std::max(
            worst, rel_err(g.at("probs[" + std::to_string(i) + "]"), expect));
      }
    }
    {
      double mean = -3.0 + 6.0 * rng.uniform();
      double sd = 0.3 + 2.2 * rng.uniform();
      pp::Value x(mean + sd * (4.0 * rng.uniform() - 2.0));
      double hm = 1e-6 * std::max(1.0, std::fabs(mean));
      double hs = 1e-6 * std::max(1.0, sd);
      auto g = Distribution::normal(mean, sd).grad_log_density(x);
      double fd_mean = (Distribution::normal(mean + hm, sd).log_density(x) -
                        Distribution::normal(mean - hm, sd).log_density(x)) /
                       (2.0 * hm);
      double fd_sd = (Distribution::normal(mean, sd + hs).log_density(x) -
                      Distribution::normal(mean, sd - hs).log_density(x)) /
                     (2.0 * hs);
      worst = std::max(worst, rel_err(g.at("mean"), fd_mean));
      worst = std::max(worst, rel_err(g.at("stddev"), fd_sd));
    }
    {
      double loc = -3.0 + 6.0 * rng.uniform();
      double sc = 0.3 + 2.2 * rng.uniform();
      pp::Value x(loc + sc * (6.0 * rng.uniform() - 3.0));
      double hl = 1e-6 * std::max(1.0, std::fabs(loc));
      double hs = 1e-6 * std::max(1.0, sc);
      auto g = Distribution::cauchy(loc, sc).grad_log_density(x);
      double fd_loc = (Distribution::cauchy(loc + hl, sc).log_density(x) -
                       Distribution::cauchy(loc - hl, sc).log_density(x)) /
                      (2.0 * hl);
      double fd_sc = (Distribution::cauchy(loc, sc + hs).log_density(x) -
                      Distribution::cauchy(loc, sc - hs).log_density(x)) /
                     (2.0 * hs);
      worst = std::max(worst, rel_err(g.at("location"), fd_loc));
      worst = std::max(worst, rel_err(g.at("scale"), fd_sc));
    }
    {
      double shape = 0.3 + 3.7 * rng.uniform();
      double scale = 0.3 + 2.7 * rng.uniform();
      pp::Value x(shape * scale * (0.2 + rng.uniform()));
      double ha = 1e-6 * std::max(1.0, shape);
      double hs = 1e-6 * std::max(1.0, scale);
      auto g = Distribution::gamma(shape, scale).grad_log_density(x);
      double fd_shape = (Distribution::gamma(shape + ha, scale).log_density(x) -
                         Distribution::gamma(shape - ha, scale).log_density(x)) /
                        (2.0 * ha);
      double fd_scale = (Distribution::gamma(shape, scale + hs).log_density(x) -
                         Distribution::gamma(shape, scale - hs).log_density(x)) /
                        (2.0 * hs);
      worst = std::max(worst, rel_err(g.at("shape"), fd_shape));
      worst = std::max(worst, rel_err(g.at("scale"), fd_scale));
    }
  }

  double worst_net = 0.0;
  const double net_tol = 1e-4;
  for (int trial = 0; trial < 100; ++trial) {
    int in_dim = static_cast<int>(rng.uniform_int(1, 5));
    int hid_dim = static_cast<int>(rng.uniform_int(1, 6));
    int out_dim = static_cast<int>(rng.uniform_int(1, 4));
    pp::nnet::Mlp net("n/", in_dim, hid_dim, out_dim);
    pp::ParamStore params;
    pp::RandomStream init(rng.next_u64());
    net.register_params(params, init);
    for (const auto& name : params.names()) {
      for (double& w : params.value(name).data()) w += 0.3 * init.normal();
    }
    std::vector<double> x(in_dim);
    std::vector<double> cot(out_dim);
    for (double& v : x) v = init.normal();
    for (double& v : cot) v = init.normal();

    auto loss = [&](const std::vector<double>& input) {
      auto out = net.forward(params, input);
      double t = 0.0;
      for (int i = 0; i < out_dim; ++i) t += cot[i] * out[i];
      return t;
    };

    pp::nnet::Mlp::Cache cache;
    net.forward(params, x, &cache);
    pp::GradMap grads;
    auto input_grad = net.backward(params, cache, cot, grads);

    const double h = 1e-6;
    for (const auto& name : params.names()) {
      auto& value = params.value(name);
      for (std::size_t i = 0; i < value.size(); ++i) {
        double keep = value.data()[i];
        value.data()[i] = keep + h;
        double up = loss(x);
        value.data()[i] = keep - h;
        double down = loss(x);
        value.data()[i] = keep;
        worst_net = std::max(
            worst_net, rel_err(grads.at(name).data()[i], (up - down) / (2.0 * h)));
      }
    }
    for (int i = 0; i < in_dim; ++i) {
      std::vector<double> xp = x;
      std::vector<double> xm = x;
      xp[i] += h;
      xm[i] -= h;
      worst_net = std::max(
          worst_net,
          rel_err(input_grad[i], (loss(xp) - loss(xm)) / (2.0 * h)));
    }
  }

  bool passed = worst < tol && worst_net < net_tol;
  report(8, passed,
         fmt("density and network gradients match finite differences over "
             "100 random instances each; worst density rel err = %.2e "
             "(bound 1e-5), worst network rel err = %.2e (bound 1e-4)",
             worst, worst_net));
  return passed;
}

struct DeskScale {
  std::size_t n_points = 20;
  std::size_t hidden_dim = 10;
  std::size_t iter_support = 10;
  int k_replicates = 20;
  int batch_size = 8;
  std::int64_t iterations = 300;
  double adam_alpha = 0.01;
};

ppt::TrainOptions desk_options(const DeskScale& desk, std::uint64_t seed) {
  ppt::TrainOptions options;
  options.k_replicates = desk.k_replicates;
  options.batch_size = desk.batch_size;
  options.iterations = desk.iterations;
  options.seed = seed;
  return options;
}

ppt::Optimizer desk_optimizer(const DeskScale& desk) {
  ppt::AdamConfig config;
  config.alpha = desk.adam_alpha;
  return ppt::Optimizer::make_adam(config);
}

// 9. Desk-scale training improves both trained proposal families on held
// out pairs, and the RANSAC-driven family ends up ahead of the pure
// network family.
bool criterion_9() {
  DeskScale desk;
  auto pairs = ppl::pair_distribution(desk.n_points);
  const int eval_pairs = 200;
  std::uint64_t eval_seed = pp::derive_seed(kAcceptanceSeed, 901);

  ppl::RansacNnProposal ransac_nn(desk.n_points, desk.hidden_dim,
                                  desk.iter_support);
  pp::ParamStore ransac_params;
  ransac_nn.init_params(ransac_params, pp::derive_seed(kAcceptanceSeed, 902));

  ppl::NnProposal nn(desk.n_points, desk.hidden_dim);
  pp::ParamStore nn_params;
  nn.init_params(nn_params, pp::derive_seed(kAcceptanceSeed, 903));

  double ransac_before = ppt::objective_estimate(
      ransac_nn, pairs, ransac_params, desk.k_replicates, eval_pairs, eval_seed);
  double nn_before = ppt::objective_estimate(nn, pairs, nn_params,
                                             desk.k_replicates, eval_pairs,
                                             eval_seed);

  auto ransac_opt = desk_optimizer(desk);
  ppt::train(ransac_nn, pairs, ransac_params, ransac_opt,
             desk_options(desk, pp::derive_seed(kAcceptanceSeed, 904)));
  auto nn_opt = desk_optimizer(desk);
  ppt::train(nn, pairs, nn_params, nn_opt,
             desk_options(desk, pp::derive_seed(kAcceptanceSeed, 905)));

  double ransac_after = ppt::objective_estimate(
      ransac_nn, pairs, ransac_params, desk.k_replicates, eval_pairs, eval_seed);
  double nn_after = ppt::objective_estimate(nn, pairs, nn_params,
                                            desk.k_replicates, eval_pairs,
                                            eval_seed);

  bool passed = ransac_after > ransac_before && nn_after > nn_before &&
                ransac_after > nn_after;
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "training improves held-out objectives; ransac_nn %.2f -> "
                "%.2f, nn %.2f -> %.2f, trained ransac_nn ahead of nn "
                "(200 held-out pairs, K=20, M=8, 300 adam iterations)",
                ransac_before, ransac_after, nn_before, nn_after);
  report(9, passed, buf);
  return passed;
}

// 10. On fresh datasets, few-particle importance sampling with the trained
// RANSAC proposal recovers the generating slope better than the prior
// proposal.
bool criterion_10() {
  DeskScale desk;
  auto pairs = ppl::pair_distribution(desk.n_points);

  ppl::RansacNnProposal ransac_nn(desk.n_points, desk.hidden_dim,
                                  desk.iter_support);
  pp::ParamStore ransac_params;
  ransac_nn.init_params(ransac_params, pp::derive_seed(kAcceptanceSeed, 1001));
  auto opt = desk_optimizer(desk);
  ppt::train(ransac_nn, pairs, ransac_params, opt,
             desk_options(desk, pp::derive_seed(kAcceptanceSeed, 1002)));

  ppl::PriorProposal prior(desk.n_points);
  pp::ParamStore prior_params;

  auto slope_of = [](const pp::ChoiceMap& z) {
    return z.at("slope").as_real();
  };
  const int n_datasets = 20;
  const int n_particles = 6;
  const int k_replicates = 10;

  std::vector<double> ransac_errs;
  std::vector<double> prior_errs;
  for (int j = 0; j < n_datasets; ++j) {
    auto pair = ppl::generate_pair(desk.n_points,
                                   pp::derive_seed(kAcceptanceSeed, 1100 + j));
    double true_slope = pair.latents.at("slope").as_real();
    auto data = std::make_shared<const ppl::Dataset>(pair.data);
    auto target = ppl::posterior_target(data);
    std::any input(data);

    auto ransac_is = pps::importance_sample(
        target, ransac_nn, input, ransac_params, n_particles, k_replicates,
        slope_of, ppl::latent_selection(),
        pp::derive_seed(kAcceptanceSeed, 1200 + j));
    auto prior_is = pps::importance_sample(
        target, prior, input, prior_params, n_particles, k_replicates,
        slope_of, ppl::latent_selection(),
        pp::derive_seed(kAcceptanceSeed, 1300 + j));

    double re = ransac_is.estimate - true_slope;
    double pe = prior_is.estimate - true_slope;
    ransac_errs.push_back(re * re);
    prior_errs.push_back(pe * pe);
  }

  auto median = [](std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t n = xs.size();
    return (n % 2 == 1) ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
  };
  double ransac_med = median(ransac_errs);
  double prior_med = median(prior_errs);

  bool passed = ransac_med < prior_med;
  report(10, passed,
         fmt("trained proposal recovers the slope better than the prior; "
             "median squared slope error %.4f vs %.4f over 20 datasets "
             "(N=6 particles, K=10)",
             ransac_med, prior_med));
  return passed;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::function<bool()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

  if (argc > 2) {
    std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
    return 2;
  }
  if (argc == 2) {
    int id = std::atoi(argv[1]);
    if (id < 1 || id > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
      return 2;
    }
    return criteria[static_cast<std::size_t>(id - 1)]() ? 0 : 1;
  }

  bool all_passed = true;
  for (const auto& criterion : criteria) {
    if (!criterion()) all_passed = false;
  }
  return all_passed ? 0 : 1;
}
