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

#include "propprog/cli_config.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "propprog/errors.hpp"
#include "propprog/linreg.hpp"

namespace propprog::cli {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (allowed.count(item.key()) == 0) {
      throw ConfigError("unknown config key: " + path + item.key());
    }
  }
}

const json* section(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return nullptr;
  if (!it->is_object()) {
    throw ConfigError("config key " + path + key + " must be an object");
  }
  return &*it;
}

double read_double(const json& obj, const std::string& path, const char* key,
                   double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) {
    throw ConfigError("config key " + path + key + " must be a number");
  }
  return it->get<double>();
}

std::int64_t read_int(const json& obj, const std::string& path, const char* key,
                      std::int64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) {
    throw ConfigError("config key " + path + key + " must be an integer");
  }
  return it->get<std::int64_t>();
}

std::uint64_t read_uint(const json& obj, const std::string& path, const char* key,
                        std::uint64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
    throw ConfigError("config key " + path + key + " must be a nonnegative integer");
  }
  return it->get<std::uint64_t>();
}

std::string read_string(const json& obj, const std::string& path, const char* key,
                        const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) {
    throw ConfigError("config key " + path + key + " must be a string");
  }
  return it->get<std::string>();
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace

std::string CliConfig::canonical() const {
  json j;
  j["seed"] = seed;
  j["dataset"]["n_points"] = dataset.n_points;
  j["proposal"]["kind"] = proposal.kind;
  j["proposal"]["hidden_dim"] = proposal.hidden_dim;
  j["proposal"]["iter_support"] = proposal.iter_support;
  j["training"]["k_replicates"] = training.k_replicates;
  j["training"]["batch_size"] = training.batch_size;
  j["training"]["iterations"] = training.iterations;
  j["training"]["optimizer"] = training.optimizer;
  j["training"]["adam"]["alpha"] = training.adam.alpha;
  j["training"]["adam"]["beta1"] = training.adam.beta1;
  j["training"]["adam"]["beta2"] = training.adam.beta2;
  j["training"]["adam"]["epsilon"] = training.adam.epsilon;
  j["training"]["sgd"]["step_size"] = training.sgd.step_size;
  j["inference"]["n_particles"] = inference.n_particles;
  j["inference"]["k_replicates"] = inference.k_replicates;
  j["inference"]["rescale"] = inference.rescale;
  j["output"]["dir"] = output.dir;
  return j.dump();
}

std::string CliConfig::config_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

CliConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(root, "",
             {"seed", "dataset", "proposal", "training", "inference", "output"});

  CliConfig config;
  config.seed = read_uint(root, "", "seed", config.seed);

  if (const json* d = section(root, "", "dataset")) {
    check_keys(*d, "dataset.", {"n_points"});
    std::int64_t n =
        read_int(*d, "dataset.", "n_points", static_cast<std::int64_t>(config.dataset.n_points));
    require(n >= 2, "dataset.n_points must be at least 2");
    config.dataset.n_points = static_cast<std::size_t>(n);
  }

  if (const json* p = section(root, "", "proposal")) {
    check_keys(*p, "proposal.", {"kind", "hidden_dim", "iter_support"});
    config.proposal.kind = read_string(*p, "proposal.", "kind", config.proposal.kind);
    require(config.proposal.kind == "ransac_nn" || config.proposal.kind == "nn" ||
                config.proposal.kind == "prior",
            "proposal.kind must be one of ransac_nn, nn, prior");
    std::int64_t hidden = read_int(*p, "proposal.", "hidden_dim",
                                   static_cast<std::int64_t>(config.proposal.hidden_dim));
    require(hidden >= 1, "proposal.hidden_dim must be at least 1");
    config.proposal.hidden_dim = static_cast<std::size_t>(hidden);
    std::int64_t iters = read_int(*p, "proposal.", "iter_support",
                                  static_cast<std::int64_t>(config.proposal.iter_support));
    require(iters >= 1 && iters <= 64, "proposal.iter_support must be in [1, 64]");
    config.proposal.iter_support = static_cast<std::size_t>(iters);
  }

  if (const json* t = section(root, "", "training")) {
    check_keys(*t, "training.",
               {"k_replicates", "batch_size", "iterations", "optimizer", "adam", "sgd"});
    std::int64_t k = read_int(*t, "training.", "k_replicates", config.training.k_replicates);
    require(k >= 2, "training.k_replicates must be at least 2");
    config.training.k_replicates = static_cast<int>(k);
    std::int64_t batch = read_int(*t, "training.", "batch_size", config.training.batch_size);
    require(batch >= 1, "training.batch_size must be at least 1");
    config.training.batch_size = static_cast<int>(batch);
    std::int64_t iterations =
        read_int(*t, "training.", "iterations", config.training.iterations);
    require(iterations >= 0, "training.iterations must be nonnegative");
    config.training.iterations = iterations;
    config.training.optimizer =
        read_string(*t, "training.", "optimizer", config.training.optimizer);
    require(config.training.optimizer == "adam" || config.training.optimizer == "sgd",
            "training.optimizer must be adam or sgd");
    if (const json* a = section(*t, "training.", "adam")) {
      check_keys(*a, "training.adam.", {"alpha", "beta1", "beta2", "epsilon"});
      config.training.adam.alpha =
          read_double(*a, "training.adam.", "alpha", config.training.adam.alpha);
      config.training.adam.beta1 =
          read_double(*a, "training.adam.", "beta1", config.training.adam.beta1);
      config.training.adam.beta2 =
          read_double(*a, "training.adam.", "beta2", config.training.adam.beta2);
      config.training.adam.epsilon =
          read_double(*a, "training.adam.", "epsilon", config.training.adam.epsilon);
      require(config.training.adam.alpha > 0, "training.adam.alpha must be positive");
      require(config.training.adam.beta1 >= 0 && config.training.adam.beta1 < 1,
              "training.adam.beta1 must lie in [0, 1)");
      require(config.training.adam.beta2 >= 0 && config.training.adam.beta2 < 1,
              "training.adam.beta2 must lie in [0, 1)");
      require(config.training.adam.epsilon > 0, "training.adam.epsilon must be positive");
    }
    if (const json* s = section(*t, "training.", "sgd")) {
      check_keys(*s, "training.sgd.", {"step_size"});
      config.training.sgd.step_size =
          read_double(*s, "training.sgd.", "step_size", config.training.sgd.step_size);
      require(config.training.sgd.step_size > 0,
              "training.sgd.step_size must be positive");
    }
  }

  if (const json* i = section(root, "", "inference")) {
    check_keys(*i, "inference.", {"n_particles", "k_replicates", "rescale"});
    std::int64_t particles =
        read_int(*i, "inference.", "n_particles", config.inference.n_particles);
    require(particles >= 1, "inference.n_particles must be at least 1");
    config.inference.n_particles = static_cast<int>(particles);
    std::int64_t k = read_int(*i, "inference.", "k_replicates", config.inference.k_replicates);
    require(k >= 1, "inference.k_replicates must be at least 1");
    config.inference.k_replicates = static_cast<int>(k);
    config.inference.rescale =
        read_double(*i, "inference.", "rescale", config.inference.rescale);
    require(config.inference.rescale > 0, "inference.rescale must be positive");
  }

  if (const json* o = section(root, "", "output")) {
    check_keys(*o, "output.", {"dir"});
    config.output.dir = read_string(*o, "output.", "dir", config.output.dir);
    require(!config.output.dir.empty(), "output.dir must not be empty");
  }

  return config;
}

CliConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

ProposalBundle make_proposal(const ProposalConfig& config, std::size_t n_points,
                             std::uint64_t param_seed) {
  ProposalBundle bundle;
  if (config.kind == "ransac_nn") {
    auto p = std::make_shared<linreg::RansacNnProposal>(n_points, config.hidden_dim,
                                                        config.iter_support);
    p->init_params(bundle.params, param_seed);
    bundle.program = p;
  } else if (config.kind == "nn") {
    auto p = std::make_shared<linreg::NnProposal>(n_points, config.hidden_dim);
    p->init_params(bundle.params, param_seed);
    bundle.program = p;
  } else if (config.kind == "prior") {
    bundle.program = std::make_shared<linreg::PriorProposal>(n_points);
  } else {
    throw ConfigError("proposal.kind must be one of ransac_nn, nn, prior");
  }
  return bundle;
}

trainer::Optimizer make_optimizer(const TrainingConfig& config) {
  if (config.optimizer == "sgd") {
    return trainer::Optimizer::make_sgd(config.sgd.step_size);
  }
  trainer::AdamConfig adam;
  adam.alpha = config.adam.alpha;
  adam.beta1 = config.adam.beta1;
  adam.beta2 = config.adam.beta2;
  adam.eps = config.adam.epsilon;
  return trainer::Optimizer::make_adam(adam);
}

}  // namespace propprog::cli
