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

#include <cstdio>
#include <fstream>
#include <string>

#include <doctest.h>

#include "propprog/cli_config.hpp"
#include "propprog/errors.hpp"
#include "propprog/linreg.hpp"
#include "propprog/trainer.hpp"

namespace pp = propprog;
namespace ppc = propprog::cli;

TEST_CASE("an empty object yields all defaults") {
  auto config = ppc::parse_config_json("{}");
  CHECK(config.seed == 0);
  CHECK(config.dataset.n_points == 20);
  CHECK(config.proposal.kind == "ransac_nn");
  CHECK(config.proposal.hidden_dim == 10);
  CHECK(config.proposal.iter_support == 10);
  CHECK(config.training.k_replicates == 20);
  CHECK(config.training.batch_size == 8);
  CHECK(config.training.iterations == 300);
  CHECK(config.training.optimizer == "adam");
  CHECK(config.training.adam.alpha == 1e-3);
  CHECK(config.training.adam.beta1 == 0.9);
  CHECK(config.training.adam.beta2 == 0.999);
  CHECK(config.training.adam.epsilon == 1e-8);
  CHECK(config.training.sgd.step_size == 1e-3);
  CHECK(config.inference.n_particles == 100);
  CHECK(config.inference.k_replicates == 10);
  CHECK(config.inference.rescale == 1.0);
  CHECK(config.output.dir == "out");
}

TEST_CASE("nested values are parsed") {
  auto config = ppc::parse_config_json(R"({
    "seed": 7,
    "dataset": {"n_points": 12},
    "proposal": {"kind": "nn", "hidden_dim": 4},
    "training": {"k_replicates": 3, "optimizer": "sgd",
                 "sgd": {"step_size": 0.25}},
    "inference": {"rescale": 100.0},
    "output": {"dir": "results"}
  })");
  CHECK(config.seed == 7);
  CHECK(config.dataset.n_points == 12);
  CHECK(config.proposal.kind == "nn");
  CHECK(config.proposal.hidden_dim == 4);
  CHECK(config.proposal.iter_support == 10);
  CHECK(config.training.k_replicates == 3);
  CHECK(config.training.optimizer == "sgd");
  CHECK(config.training.sgd.step_size == 0.25);
  CHECK(config.inference.rescale == 100.0);
  CHECK(config.output.dir == "results");
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(ppc::parse_config_json(R"({"sede": 1})"), pp::ConfigError);
  CHECK_THROWS_AS(ppc::parse_config_json(R"({"dataset": {"points": 5}})"),
                  pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"training": {"adam": {"gamma": 1}}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(ppc::parse_config_json("[]"), pp::ConfigError);
  CHECK_THROWS_AS(ppc::parse_config_json("{"), pp::ConfigError);
}

TEST_CASE("type and range errors are rejected") {
  CHECK_THROWS_AS(ppc::parse_config_json(R"({"seed": "zero"})"),
                  pp::ConfigError);
  CHECK_THROWS_AS(ppc::parse_config_json(R"({"seed": -1})"), pp::ConfigError);
  CHECK_THROWS_AS(ppc::parse_config_json(R"({"dataset": {"n_points": 1}})"),
                  pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"proposal": {"kind": "magic"}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"proposal": {"hidden_dim": 0}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"proposal": {"iter_support": 65}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"training": {"k_replicates": 1}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"training": {"batch_size": 0}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"training": {"iterations": -1}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"training": {"optimizer": "lbfgs"}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"training": {"adam": {"beta1": 1.0}}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"training": {"sgd": {"step_size": 0}}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"inference": {"n_particles": 0}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"inference": {"k_replicates": 0}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(
      ppc::parse_config_json(R"({"inference": {"rescale": -1.0}})"),
      pp::ConfigError);
  CHECK_THROWS_AS(ppc::parse_config_json(R"({"output": {"dir": ""}})"),
                  pp::ConfigError);
}

TEST_CASE("canonical form and hash are stable and sensitive") {
  auto a = ppc::parse_config_json("{}");
  auto b = ppc::parse_config_json(R"({"seed": 0, "dataset": {}})");
  CHECK(a.canonical() == b.canonical());
  CHECK(a.config_hash() == b.config_hash());
  CHECK(a.config_hash().size() == 16);
  for (char c : a.config_hash()) {
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    CHECK(hex);
  }

  auto c = ppc::parse_config_json(R"({"seed": 1})");
  CHECK(c.canonical() != a.canonical());
  CHECK(c.config_hash() != a.config_hash());

  auto d = ppc::parse_config_json(R"({"proposal": {"kind": "prior"}})");
  CHECK(d.config_hash() != a.config_hash());

  CHECK(a.canonical().find("ransac_nn") != std::string::npos);
  CHECK(a.canonical().find(' ') == std::string::npos);
}

TEST_CASE("load_config reads files and reports failures") {
  std::string path = "test_cli_config.json";
  std::ofstream out(path, std::ios::binary);
  out << R"({"seed": 3, "proposal": {"kind": "prior"}})";
  out.close();
  auto config = ppc::load_config(path);
  CHECK(config.seed == 3);
  CHECK(config.proposal.kind == "prior");
  std::remove(path.c_str());

  CHECK_THROWS_AS(ppc::load_config("no_such_config.json"), pp::ConfigError);
}

TEST_CASE("make_proposal builds each kind") {
  ppc::ProposalConfig ransac_config;
  ransac_config.kind = "ransac_nn";
  ransac_config.hidden_dim = 3;
  ransac_config.iter_support = 4;
  auto ransac = ppc::make_proposal(ransac_config, 5, 11);
  REQUIRE(ransac.program != nullptr);
  CHECK(ransac.params.has("eps_alpha"));
  CHECK(ransac.params.has("iter_logits"));
  CHECK(ransac.params.value("iter_logits").size() == 4);
  CHECK(ransac.params.has("scale_net/h_weights"));

  auto ransac_again = ppc::make_proposal(ransac_config, 5, 11);
  CHECK(ransac_again.params.value("scale_net/h_weights").data() ==
        ransac.params.value("scale_net/h_weights").data());

  ppc::ProposalConfig nn_config;
  nn_config.kind = "nn";
  nn_config.hidden_dim = 3;
  auto nn = ppc::make_proposal(nn_config, 5, 11);
  CHECK(nn.params.has("line_net/h_weights"));
  CHECK(!nn.params.has("eps_alpha"));

  ppc::ProposalConfig prior_config;
  prior_config.kind = "prior";
  auto prior = ppc::make_proposal(prior_config, 5, 11);
  REQUIRE(prior.program != nullptr);
  CHECK(prior.params.size() == 0);
}

TEST_CASE("make_optimizer maps both optimizers") {
  ppc::TrainingConfig adam_config;
  adam_config.optimizer = "adam";
  adam_config.adam.alpha = 0.02;
  adam_config.adam.epsilon = 1e-9;
  auto adam = ppc::make_optimizer(adam_config);
  CHECK(adam.kind == pp::trainer::Optimizer::Kind::kAdam);
  CHECK(adam.adam.alpha == 0.02);
  CHECK(adam.adam.eps == 1e-9);
  CHECK(adam.t == 0);

  ppc::TrainingConfig sgd_config;
  sgd_config.optimizer = "sgd";
  sgd_config.sgd.step_size = 0.5;
  auto sgd = ppc::make_optimizer(sgd_config);
  CHECK(sgd.kind == pp::trainer::Optimizer::Kind::kSgd);
  CHECK(sgd.step_size == 0.5);
}
