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

#include <any>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "propprog/dist.hpp"
#include "propprog/errors.hpp"
#include "propprog/fixtures.hpp"
#include "propprog/math.hpp"
#include "propprog/oracle.hpp"
#include "propprog/runtime.hpp"
#include "propprog/serialize.hpp"
#include "propprog/trace.hpp"

namespace pp = propprog;
namespace ppo = propprog::oracle;
namespace ppr = propprog::runtime;

using propprog::dist::Distribution;

namespace {

nlohmann::json load_frozen() {
  std::ifstream in(std::string(TESTS_FIXTURE_DIR) + "/frozen.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

struct ContinuousChoice : ppr::ProposalProgram {
  void run(ppr::ExecutionContext& ctx, const std::any&,
           const pp::ParamStore&) const override {
    ctx.choice(Distribution::normal(0.0, 1.0), "x");
  }
};

struct RawRandomness : ppr::ProposalProgram {
  void run(ppr::ExecutionContext& ctx, const std::any&,
           const pp::ParamStore&) const override {
    ctx.raw_rng().uniform();
    ctx.choice(Distribution::bernoulli(0.5), "z");
  }
};

}  // namespace

TEST_CASE("enumeration reproduces frozen trace counts and marginals") {
  auto frozen = load_frozen();
  for (const pp::fixtures::Fixture* f : pp::fixtures::all_fixtures()) {
    CAPTURE(f->name);
    auto enumerated = ppo::enumerate(*f->program, f->input, f->params);
    CHECK(enumerated.traces.size() ==
          frozen["trace_counts"][f->name].get<std::size_t>());
    CHECK(enumerated.total_prob() == doctest::Approx(1.0).epsilon(1e-12));

    const auto& marginals = frozen["marginals"][f->name];
    REQUIRE(marginals.size() == f->z_support.size());
    for (std::size_t i = 0; i < f->z_support.size(); ++i) {
      double p = ppo::exact_marginal(enumerated, f->z_support[i], f->outputs);
      CHECK(p == doctest::Approx(marginals[i].get<double>()).epsilon(1e-12));
    }

    auto dist = ppo::exact_output_distribution(enumerated, f->outputs);
    CHECK(dist.outputs.size() == f->z_support.size());
    for (std::size_t i = 0; i < f->z_support.size(); ++i) {
      std::size_t j = dist.index_of(f->z_support[i]);
      CHECK(dist.probs[j] ==
            doctest::Approx(marginals[i].get<double>()).epsilon(1e-12));
    }
    double total = 0.0;
    for (double p : dist.probs) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("constrained enumeration keeps aborted executions") {
  const auto& f = pp::fixtures::fixture_by_name("three_path");
  pp::ChoiceMap z2;
  z2.set("z", pp::Value(std::int64_t{2}));
  auto enumerated =
      ppo::enumerate_constrained(*f.program, f.input, f.params, z2);

  REQUIRE(enumerated.traces.size() == 3);
  CHECK(enumerated.total_prob() == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> aborted_reach;
  int feasible = 0;
  for (const auto& wt : enumerated.traces) {
    if (wt.trace.total_log_prob() == pp::kNegInf) {
      aborted_reach.push_back(std::exp(wt.log_prob));
    } else {
      ++feasible;
      CHECK(wt.trace.value_at("u") == pp::Value(std::int64_t{2}));
    }
  }
  CHECK(feasible == 1);
  REQUIRE(aborted_reach.size() == 2);
  std::sort(aborted_reach.begin(), aborted_reach.end());
  CHECK(aborted_reach[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(aborted_reach[1] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("point_mass is a single certain execution") {
  const auto& f = pp::fixtures::fixture_by_name("point_mass");
  auto enumerated = ppo::enumerate(*f.program, f.input, f.params);
  REQUIRE(enumerated.traces.size() == 1);
  CHECK(enumerated.traces[0].log_prob == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ppo::exact_marginal(enumerated, f.z_support[0], f.outputs) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("non-enumerable programs are rejected") {
  pp::ParamStore params;
  ContinuousChoice continuous;
  CHECK_THROWS_AS(ppo::enumerate(continuous, {}, params),
                  pp::NonEnumerableError);

  RawRandomness raw;
  CHECK_THROWS_AS(ppo::enumerate(raw, {}, params), pp::NonEnumerableError);

  const auto& f = pp::fixtures::fixture_by_name("four_state");
  ppo::EnumerateOptions tight;
  tight.max_traces = 2;
  CHECK_THROWS_AS(ppo::enumerate(*f.program, f.input, f.params, tight),
                  pp::BranchLimitError);
}

TEST_CASE("fixture_by_name rejects unknown names") {
  CHECK_THROWS_AS(pp::fixtures::fixture_by_name("no_such_fixture"),
                  pp::DomainError);
}

TEST_CASE("exact objectives match hand computation on two_coin") {
  const auto& f = pp::fixtures::fixture_by_name("two_coin");
  pp::ChoiceMap z_true;
  z_true.set("z", pp::Value(true));

  std::vector<ppo::WeightedPair> single = {{f.input, z_true, 1.0}};
  auto k1 = ppo::exact_objectives(*f.program, single, f.params, 1);
  CHECK(k1.objective == doctest::Approx(std::log(0.5)).epsilon(1e-13));
  CHECK(k1.lower_bound ==
        doctest::Approx(0.5 * std::log(0.9) + 0.5 * std::log(0.1))
            .epsilon(1e-13));

  auto k2 = ppo::exact_objectives(*f.program, single, f.params, 2);
  CHECK(k2.objective == doctest::Approx(std::log(0.5)).epsilon(1e-13));
  CHECK(k2.lower_bound ==
        doctest::Approx(0.25 * std::log(0.9) + 0.5 * std::log(0.5) +
                        0.25 * std::log(0.1))
            .epsilon(1e-13));
  CHECK(k2.lower_bound > k1.lower_bound);
  CHECK(k2.lower_bound < k2.objective);

  pp::ChoiceMap z_false;
  z_false.set("z", pp::Value(false));
  std::vector<ppo::WeightedPair> both = {{f.input, z_true, 0.5},
                                         {f.input, z_false, 0.5}};
  auto mixed = ppo::exact_objectives(*f.program, both, f.params, 1);
  CHECK(mixed.objective == doctest::Approx(std::log(0.5)).epsilon(1e-13));

  CHECK_THROWS_AS(ppo::exact_objectives(*f.program, single, f.params, 0),
                  pp::DomainError);
}

TEST_CASE("objectives collapse when there are no internal choices") {
  const auto& f = pp::fixtures::fixture_by_name("no_internal");
  for (const auto& z : f.z_support) {
    std::vector<ppo::WeightedPair> pairs = {{f.input, z, 1.0}};
    for (int k : {1, 3}) {
      auto obj = ppo::exact_objectives(*f.program, pairs, f.params, k);
      CHECK(std::fabs(obj.lower_bound - obj.objective) < 1e-12);
    }
  }
}

TEST_CASE("exact lower bound gradient matches finite differences") {
  auto program = pp::fixtures::param_two_coin_program();
  pp::ChoiceMap z;
  z.set("z", pp::Value(true));
  const double h = 1e-6;

  for (int k : {1, 2, 3}) {
    auto params = pp::fixtures::param_two_coin_params(0.3, -0.4);
    auto grad = ppo::exact_lower_bound_gradient(*program, {}, z, params, k);
    REQUIRE(grad.count("theta_u") == 1);
    REQUIRE(grad.count("theta_z") == 1);

    for (const char* name : {"theta_u", "theta_z"}) {
      double base = params.value(name).scalar_value();
      std::vector<ppo::WeightedPair> pairs = {{std::any{}, z, 1.0}};

      params.value(name).data()[0] = base + h;
      double up = ppo::exact_objectives(*program, pairs, params, k).lower_bound;
      params.value(name).data()[0] = base - h;
      double down =
          ppo::exact_objectives(*program, pairs, params, k).lower_bound;
      params.value(name).data()[0] = base;

      double fd = (up - down) / (2.0 * h);
      CHECK(grad.at(name).scalar_value() ==
            doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }

  CHECK_THROWS_AS(
      ppo::exact_lower_bound_gradient(
          *program, {}, z, pp::fixtures::param_two_coin_params(0.0, 0.0), 0),
      pp::DomainError);
}

TEST_CASE("chi-square goodness of fit closed forms") {
  auto exact = ppo::chi_square_gof({25, 25, 25, 25},
                                   {0.25, 0.25, 0.25, 0.25});
  CHECK(exact.statistic == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(exact.degrees_of_freedom == 3);
  CHECK(exact.p_value == doctest::Approx(1.0).epsilon(1e-12));

  auto df3 = ppo::chi_square_gof({30, 20, 25, 25}, {0.25, 0.25, 0.25, 0.25});
  CHECK(df3.statistic == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(df3.degrees_of_freedom == 3);
  CHECK(df3.p_value ==
        doctest::Approx(0.5724067044708798).epsilon(1e-12));

  auto df1 = ppo::chi_square_gof({55, 45}, {0.5, 0.5});
  CHECK(df1.statistic == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(df1.degrees_of_freedom == 1);
  CHECK(df1.p_value ==
        doctest::Approx(0.31731050786291415).epsilon(1e-12));

  auto df2 = ppo::chi_square_gof({60, 20, 20}, {0.5, 0.25, 0.25});
  CHECK(df2.statistic == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(df2.degrees_of_freedom == 2);
  CHECK(df2.p_value ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(ppo::chi_square_gof({10}, {1.0}), pp::DomainError);
  CHECK_THROWS_AS(ppo::chi_square_gof({10, 10}, {1.0, 0.0}), pp::DomainError);
  CHECK_THROWS_AS(ppo::chi_square_gof({10, -1}, {0.5, 0.5}), pp::DomainError);
  CHECK_THROWS_AS(ppo::chi_square_gof({0, 0}, {0.5, 0.5}), pp::DomainError);
}

TEST_CASE("regularized gamma tail and tv distance") {
  for (double x : {0.05, 0.5, 1.205, 2.5, 5.0}) {
    CHECK(ppo::regularized_gamma_q(0.5, x) ==
          doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-12));
    CHECK(ppo::regularized_gamma_q(1.0, x) ==
          doctest::Approx(std::exp(-x)).epsilon(1e-12));
    double y = std::sqrt(x);
    CHECK(ppo::regularized_gamma_q(1.5, x) ==
          doctest::Approx(std::erfc(y) +
                          2.0 / std::sqrt(M_PI) * y * std::exp(-x))
              .epsilon(1e-12));
  }
  CHECK_THROWS_AS(ppo::regularized_gamma_q(0.0, 1.0), pp::DomainError);
  CHECK_THROWS_AS(ppo::regularized_gamma_q(1.0, -1.0), pp::DomainError);

  CHECK(ppo::tv_distance({0.2, 0.8}, {0.5, 0.5}) ==
        doctest::Approx(0.3).epsilon(1e-15));
  CHECK(ppo::tv_distance({0.25, 0.75}, {0.25, 0.75}) == 0.0);
  CHECK_THROWS_AS(ppo::tv_distance({1.0}, {0.5, 0.5}), pp::DomainError);
}

TEST_CASE("serialized artifacts parse stably from disk") {
  auto frozen = load_frozen();

  std::string trace_json = frozen["trace_json"].get<std::string>();
  pp::Trace t = pp::trace_from_json(trace_json);
  REQUIRE(t.size() == 4);
  CHECK(t.value_at("flag") == pp::Value(true));
  CHECK(t.value_at("idx") == pp::Value(std::int64_t{3}));
  CHECK(t.value_at("x") == pp::Value(0.30000000000000004));
  CHECK(t.value_at("vec") ==
        pp::Value(std::vector<double>{1.5, -0.75}));
  CHECK(t.record_at("flag").log_prob ==
        doctest::Approx(std::log(0.25)).epsilon(1e-15));
  CHECK(pp::to_json(t) == trace_json);

  std::string map_json = frozen["choice_map_json"].get<std::string>();
  pp::ChoiceMap m = pp::choice_map_from_json(map_json);
  CHECK(m.size() == 2);
  CHECK(m.at("slope") == pp::Value(-0.30000000000000004));
  CHECK(m.at("outlier-2") == pp::Value(false));
  CHECK(pp::to_json(m) == map_json);
}
