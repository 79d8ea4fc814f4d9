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

#include "propprog/fixtures.hpp"

#include <cmath>

#include "propprog/dist.hpp"
#include "propprog/errors.hpp"
#include "propprog/math.hpp"

namespace propprog::fixtures {

namespace {

using dist::Distribution;
using runtime::ExecutionContext;

class TwoCoinProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any&, const ParamStore&) const override {
    bool u = ctx.choice(Distribution::bernoulli(0.5), "u").as_boolean();
    ctx.choice(Distribution::bernoulli(u ? 0.9 : 0.1), "z");
  }
};

class FourStateProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any&, const ParamStore&) const override {
    bool u = ctx.choice(Distribution::bernoulli(0.5), "u").as_boolean();
    ctx.choice(Distribution::bernoulli(u ? 0.8 : 0.3), "z1");
    ctx.choice(Distribution::bernoulli(u ? 0.6 : 0.4), "z2");
  }
};

class ThreePathProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any&, const ParamStore&) const override {
    std::int64_t u =
        ctx.choice(Distribution::categorical({0.2, 0.3, 0.5}), "u").as_integer();
    ctx.choice(Distribution::uniform_discrete(0, u), "z");
  }
};

class OutChainProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any&, const ParamStore&) const override {
    bool z1 = ctx.choice(Distribution::bernoulli(0.4), "z1").as_boolean();
    bool u = ctx.choice(Distribution::bernoulli(z1 ? 0.3 : 0.6), "u").as_boolean();
    ctx.choice(Distribution::bernoulli(u != z1 ? 0.8 : 0.5), "z2");
  }
};

class StickyProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any& input,
           const ParamStore&) const override {
    bool anchor = false;
    if (input.has_value() && input.type() == typeid(ChoiceMap)) {
      const auto& prev = std::any_cast<const ChoiceMap&>(input);
      if (prev.has("z")) anchor = prev.at("z").as_boolean();
    }
    bool u = ctx.choice(Distribution::bernoulli(0.5), "u").as_boolean();
    ctx.choice(Distribution::bernoulli(u ? (anchor ? 0.8 : 0.2) : 0.5), "z");
  }
};

class NoInternalProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any&, const ParamStore&) const override {
    bool a = ctx.choice(Distribution::bernoulli(0.7), "a").as_boolean();
    ctx.choice(Distribution::bernoulli(a ? 0.9 : 0.4), "b");
  }
};

class PointMassProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any&, const ParamStore&) const override {
    ctx.choice(Distribution::bernoulli(1.0), "d1");
    ctx.choice(Distribution::uniform_discrete(2, 2), "d2");
  }
};

class ParamTwoCoinProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any&,
           const ParamStore& params) const override {
    double theta_u = params.value("theta_u").scalar_value();
    double theta_z = params.value("theta_z").scalar_value();
    bool u = ctx.choice(Distribution::bernoulli(sigmoid(theta_u)), "u",
                        [theta_u](const dist::ParamGrad& g, GradMap& sink) {
                          accumulate(sink, "theta_u",
                                     Tensor::scalar(g.at("p") * sigmoid_grad(theta_u)));
                        })
                 .as_boolean();
    double p_z = u ? sigmoid(theta_z) : 1.0 - sigmoid(theta_z);
    ctx.choice(Distribution::bernoulli(p_z), "z",
               [theta_z, u](const dist::ParamGrad& g, GradMap& sink) {
                 double dp = u ? sigmoid_grad(theta_z) : -sigmoid_grad(theta_z);
                 accumulate(sink, "theta_z", Tensor::scalar(g.at("p") * dp));
               });
  }
};

class LogisticProgram final : public runtime::ProposalProgram {
 public:
  void run(ExecutionContext& ctx, const std::any&,
           const ParamStore& params) const override {
    double theta = params.value("theta").scalar_value();
    ctx.choice(Distribution::bernoulli(sigmoid(theta)), "out",
               [theta](const dist::ParamGrad& g, GradMap& sink) {
                 accumulate(sink, "theta",
                            Tensor::scalar(g.at("p") * sigmoid_grad(theta)));
               });
  }
};

ChoiceMap bool_map(const char* a1, bool v1) {
  ChoiceMap m;
  m.set(a1, Value(v1));
  return m;
}

ChoiceMap bool_map2(const char* a1, bool v1, const char* a2, bool v2) {
  ChoiceMap m;
  m.set(a1, Value(v1));
  m.set(a2, Value(v2));
  return m;
}

}  // namespace

samplers::UnnormalizedTarget table_target(std::vector<ChoiceMap> zs,
                                          std::vector<double> unnormalized,
                                          std::string description) {
  if (zs.size() != unnormalized.size() || zs.empty()) {
    throw DomainError("table_target: table size mismatch");
  }
  for (double v : unnormalized) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("table_target: entries must be positive and finite");
    }
  }
  auto table = std::make_shared<std::vector<std::pair<ChoiceMap, double>>>();
  for (std::size_t i = 0; i < zs.size(); ++i) {
    table->emplace_back(std::move(zs[i]), std::log(unnormalized[i]));
  }
  samplers::UnnormalizedTarget target;
  target.description = std::move(description);
  target.log_density = [table](const ChoiceMap& z) {
    for (const auto& [entry, log_value] : *table) {
      if (entry == z) return log_value;
    }
    return kNegInf;
  };
  return target;
}

const Fixture& two_coin() {
  static const Fixture fixture = [] {
    Fixture f;
    f.name = "two_coin";
    f.program = std::make_shared<TwoCoinProgram>();
    f.outputs = OutputSelection::of({"z"});
    f.z_support = {bool_map("z", false), bool_map("z", true)};
    f.target = table_target(f.z_support, {0.1, 0.9}, "two_coin table target");
    f.target_probs = {0.1, 0.9};
    f.z0 = f.z_support[0];
    return f;
  }();
  return fixture;
}

const Fixture& four_state() {
  static const Fixture fixture = [] {
    Fixture f;
    f.name = "four_state";
    f.program = std::make_shared<FourStateProgram>();
    f.outputs = OutputSelection::of({"z1", "z2"});
    f.z_support = {bool_map2("z1", false, "z2", false), bool_map2("z1", false, "z2", true),
                   bool_map2("z1", true, "z2", false), bool_map2("z1", true, "z2", true)};
    f.target = table_target(f.z_support, {1.0, 2.0, 3.0, 4.0}, "four_state table target");
    f.target_probs = {0.1, 0.2, 0.3, 0.4};
    f.z0 = f.z_support[0];
    return f;
  }();
  return fixture;
}

const Fixture& three_path() {
  static const Fixture fixture = [] {
    Fixture f;
    f.name = "three_path";
    f.program = std::make_shared<ThreePathProgram>();
    f.outputs = OutputSelection::of({"z"});
    for (std::int64_t v = 0; v <= 2; ++v) {
      ChoiceMap z;
      z.set("z", Value(v));
      f.z_support.push_back(z);
    }
    f.target = table_target(f.z_support, {0.2, 0.5, 0.3}, "three_path table target");
    f.target_probs = {0.2, 0.5, 0.3};
    f.z0 = f.z_support[0];
    return f;
  }();
  return fixture;
}

const Fixture& out_chain() {
  static const Fixture fixture = [] {
    Fixture f;
    f.name = "out_chain";
    f.program = std::make_shared<OutChainProgram>();
    f.outputs = OutputSelection::of({"z1", "z2"});
    f.z_support = {bool_map2("z1", false, "z2", false), bool_map2("z1", false, "z2", true),
                   bool_map2("z1", true, "z2", false), bool_map2("z1", true, "z2", true)};
    f.target = table_target(f.z_support, {1.0, 1.0, 1.0, 1.0}, "out_chain table target");
    f.target_probs = {0.25, 0.25, 0.25, 0.25};
    f.z0 = f.z_support[0];
    return f;
  }();
  return fixture;
}

const Fixture& sticky() {
  static const Fixture fixture = [] {
    Fixture f;
    f.name = "sticky";
    f.program = std::make_shared<StickyProgram>();
    f.outputs = OutputSelection::of({"z"});
    f.z_support = {bool_map("z", false), bool_map("z", true)};
    f.target = table_target(f.z_support, {0.3, 0.7}, "sticky table target");
    f.target_probs = {0.3, 0.7};
    f.z0 = f.z_support[0];
    f.input = std::any(ChoiceMap());
    return f;
  }();
  return fixture;
}

const Fixture& no_internal() {
  static const Fixture fixture = [] {
    Fixture f;
    f.name = "no_internal";
    f.program = std::make_shared<NoInternalProgram>();
    f.outputs = OutputSelection::of({"a", "b"});
    f.z_support = {bool_map2("a", false, "b", false), bool_map2("a", false, "b", true),
                   bool_map2("a", true, "b", false), bool_map2("a", true, "b", true)};
    f.target =
        table_target(f.z_support, {0.18, 0.12, 0.07, 0.63}, "no_internal table target");
    f.target_probs = {0.18, 0.12, 0.07, 0.63};
    f.z0 = f.z_support[0];
    return f;
  }();
  return fixture;
}

const Fixture& point_mass() {
  static const Fixture fixture = [] {
    Fixture f;
    f.name = "point_mass";
    f.program = std::make_shared<PointMassProgram>();
    f.outputs = OutputSelection::of({"d1", "d2"});
    ChoiceMap z;
    z.set("d1", Value(true));
    z.set("d2", Value(std::int64_t{2}));
    f.z_support = {z};
    f.target = table_target(f.z_support, {1.0}, "point_mass table target");
    f.target_probs = {1.0};
    f.z0 = z;
    return f;
  }();
  return fixture;
}

std::shared_ptr<const runtime::ProposalProgram> param_two_coin_program() {
  static const auto program = std::make_shared<const ParamTwoCoinProgram>();
  return program;
}

ParamStore param_two_coin_params(double theta_u, double theta_z) {
  ParamStore params;
  params.add("theta_u", Tensor::scalar(theta_u));
  params.add("theta_z", Tensor::scalar(theta_z));
  return params;
}

std::shared_ptr<const runtime::ProposalProgram> logistic_program() {
  static const auto program = std::make_shared<const LogisticProgram>();
  return program;
}

ParamStore logistic_params(double theta) {
  ParamStore params;
  params.add("theta", Tensor::scalar(theta));
  return params;
}

const std::vector<const Fixture*>& all_fixtures() {
  static const std::vector<const Fixture*> fixtures = {
      &two_coin(), &four_state(),  &three_path(), &out_chain(),
      &sticky(),   &no_internal(), &point_mass()};
  return fixtures;
}

const Fixture& fixture_by_name(const std::string& name) {
  for (const Fixture* f : all_fixtures()) {
    if (f->name == name) return *f;
  }
  throw DomainError("unknown fixture: " + name);
}

}  // namespace propprog::fixtures
