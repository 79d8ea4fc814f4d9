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

#include "propprog/trainer.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "propprog/errors.hpp"
#include "propprog/math.hpp"
#include "propprog/parallel.hpp"
#include "propprog/serialize.hpp"

namespace propprog::trainer {

namespace {

using nlohmann::json;

// Shifted exponentials exp(x_i - max), with zero for -inf entries.
std::vector<double> shifted_exps(const std::vector<double>& xs, double* max_out) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  std::vector<double> es(xs.size(), 0.0);
  if (m != kNegInf) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] != kNegInf) es[i] = std::exp(xs[i] - m);
    }
  }
  *max_out = m;
  return es;
}

json tensor_to_json(const Tensor& t) {
  json dims = json::array();
  if (t.rank() >= 1) dims.push_back(t.rows());
  if (t.rank() == 2) dims.push_back(t.cols());
  json out = json::array();
  out.push_back(dims);
  for (double v : t.data()) out.push_back(v);
  return out;
}

Tensor tensor_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw IoError("malformed tensor in checkpoint");
  }
  const json& dims = j[0];
  std::vector<double> data;
  for (std::size_t i = 1; i < j.size(); ++i) data.push_back(j[i].get<double>());
  if (dims.size() == 0) {
    if (data.size() != 1) throw IoError("scalar tensor needs exactly one value");
    return Tensor::scalar(data[0]);
  }
  if (dims.size() == 1) {
    if (data.size() != dims[0].get<std::size_t>()) {
      throw IoError("vector tensor size mismatch");
    }
    return Tensor::vector_of(std::move(data));
  }
  if (dims.size() == 2) {
    return Tensor::matrix_of(dims[0].get<std::size_t>(), dims[1].get<std::size_t>(),
                             std::move(data));
  }
  throw IoError("tensor rank above 2 in checkpoint");
}

json moments_to_json(const std::map<std::string, Tensor>& moments) {
  json out = json::object();
  for (const auto& [name, tensor] : moments) out[name] = tensor_to_json(tensor);
  return out;
}

std::map<std::string, Tensor> moments_from_json(const json& j) {
  std::map<std::string, Tensor> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out.emplace(it.key(), tensor_from_json(it.value()));
  }
  return out;
}

}  // namespace

std::vector<double> leave_one_out_log_means(const std::vector<double>& log_p_outputs) {
  std::size_t k = log_p_outputs.size();
  if (k < 2) throw DomainError("leave_one_out_log_means requires K >= 2");
  double m = 0.0;
  std::vector<double> es = shifted_exps(log_p_outputs, &m);
  std::vector<double> out(k, kNegInf);
  if (m == kNegInf) return out;
  double log_km1 = std::log(static_cast<double>(k - 1));
  for (std::size_t i = 0; i < k; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) sum += es[j];
    }
    out[i] = sum > 0.0 ? m + std::log(sum) - log_km1 : kNegInf;
  }
  return out;
}

GradMap combine_score_terms(const std::vector<double>& log_p_outputs,
                            const std::vector<GradMap>& internal_grads,
                            const std::vector<GradMap>& output_grads) {
  std::size_t k = log_p_outputs.size();
  if (k < 2) throw DomainError("combine_score_terms requires K >= 2");
  if (internal_grads.size() != k || output_grads.size() != k) {
    throw ShapeMismatchError("combine_score_terms: replicate count mismatch");
  }
  double m = 0.0;
  std::vector<double> es = shifted_exps(log_p_outputs, &m);
  if (m == kNegInf) {
    throw DegenerateBatchError("every replicate has zero output probability");
  }
  double total = 0.0;
  for (double e : es) total += e;
  double log_k = std::log(static_cast<double>(k));
  double log_km1 = std::log(static_cast<double>(k - 1));

  GradMap grad;
  for (std::size_t i = 0; i < k; ++i) {
    double rest = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) rest += es[j];
    }
    // log xi_hat - log xi_hat_without_i, with the common shift cancelled.
    double coeff = (std::log(total) - log_k) -
                   (rest > 0.0 ? std::log(rest) - log_km1
                               : kNegInf);
    accumulate(grad, internal_grads[i], coeff);
    double w = es[i] / total;
    if (w > 0.0) accumulate(grad, output_grads[i], w);
  }
  return grad;
}

GradientEstimate estimate_gradient(const runtime::ProposalProgram& p,
                                   const std::any& input, const ChoiceMap& z,
                                   const ParamStore& params, int k_replicates,
                                   std::uint64_t seed) {
  if (k_replicates < 2) throw DomainError("estimate_gradient requires K >= 2");
  OutputSelection sel = selection_of(z);
  std::size_t k = static_cast<std::size_t>(k_replicates);
  std::vector<double> log_p_outputs(k);
  std::vector<GradMap> internal_grads(k);
  std::vector<GradMap> output_grads(k);
  for (std::size_t i = 0; i < k; ++i) {
    runtime::GradRun run =
        runtime::run_constrained_grad(p, input, params, z, sel, derive_seed(seed, i));
    log_p_outputs[i] = run.log_p_output;
    internal_grads[i] = std::move(run.internal_grads);
    output_grads[i] = std::move(run.output_grads);
  }
  GradientEstimate out;
  out.grad = combine_score_terms(log_p_outputs, internal_grads, output_grads);
  out.log_xi_hat = log_mean_exp(log_p_outputs);
  return out;
}

Optimizer Optimizer::make_sgd(double step_size) {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw DomainError("sgd step size must be positive and finite");
  }
  Optimizer opt;
  opt.kind = Kind::kSgd;
  opt.step_size = step_size;
  return opt;
}

Optimizer Optimizer::make_adam(AdamConfig config) {
  if (!(config.alpha > 0.0) || !(config.beta1 >= 0.0 && config.beta1 < 1.0) ||
      !(config.beta2 >= 0.0 && config.beta2 < 1.0) || !(config.eps > 0.0)) {
    throw DomainError("invalid adam hyperparameters");
  }
  Optimizer opt;
  opt.kind = Kind::kAdam;
  opt.adam = config;
  return opt;
}

void Optimizer::ascend(ParamStore& params, const GradMap& mean_grad) {
  t += 1;
  for (const auto& name : params.names()) {
    Tensor& value = params.value(name);
    auto it = mean_grad.find(name);
    const Tensor* g = it != mean_grad.end() ? &it->second : nullptr;
    if (g != nullptr && !g->same_shape(value)) {
      throw ShapeMismatchError("gradient shape mismatch for " + name);
    }
    if (kind == Kind::kSgd) {
      if (g != nullptr) value.add_scaled(*g, step_size);
      continue;
    }
    Tensor& m1 = first_moments.try_emplace(name, Tensor::zeros_like(value)).first->second;
    Tensor& m2 = second_moments.try_emplace(name, Tensor::zeros_like(value)).first->second;
    double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(t));
    double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < value.size(); ++i) {
      double gi = g != nullptr ? g->data()[i] : 0.0;
      double& mi = m1.data()[i];
      double& vi = m2.data()[i];
      mi = adam.beta1 * mi + (1.0 - adam.beta1) * gi;
      vi = adam.beta2 * vi + (1.0 - adam.beta2) * gi * gi;
      double m_hat = mi / bc1;
      double v_hat = vi / bc2;
      value.data()[i] += adam.alpha * m_hat / (std::sqrt(v_hat) + adam.eps);
    }
  }
}

TrainResult train(const runtime::ProposalProgram& p, const PairDistribution& r,
                  ParamStore& params, Optimizer& opt, const TrainOptions& options) {
  if (options.k_replicates < 2) throw DomainError("train requires K >= 2");
  if (options.batch_size < 1) throw DomainError("train requires M >= 1");
  if (options.iterations < 0) throw DomainError("train requires iterations >= 0");

  TrainResult result;
  result.objective_log.reserve(static_cast<std::size_t>(options.iterations));
  std::size_t batch = static_cast<std::size_t>(options.batch_size);

  for (std::int64_t iter = 0; iter < options.iterations; ++iter) {
    std::uint64_t iter_seed =
        derive_seed(options.seed, static_cast<std::uint64_t>(iter));
    std::vector<GradientEstimate> estimates(batch);
    parallel_for(batch, [&](std::size_t m) {
      std::uint64_t elem_seed = derive_seed(iter_seed, m);
      TrainingPair pair = r.sample(derive_seed(elem_seed, 0));
      estimates[m] = estimate_gradient(p, pair.input, pair.z, params,
                                       options.k_replicates, derive_seed(elem_seed, 1));
    });

    // Deterministic reduction: element order, then name order within each
    // element's map.
    GradMap mean_grad;
    double mean_log_xi = 0.0;
    for (std::size_t m = 0; m < batch; ++m) {
      accumulate(mean_grad, estimates[m].grad);
      mean_log_xi += estimates[m].log_xi_hat;
    }
    for (auto& [name, tensor] : mean_grad) {
      for (double& v : tensor.data()) v /= static_cast<double>(batch);
    }
    mean_log_xi /= static_cast<double>(batch);

    if (!all_finite(mean_grad)) {
      throw NonFiniteGradientError("non-finite mean gradient at iteration " +
                                   std::to_string(iter));
    }
    params.zero_grads();
    params.accumulate_grads(mean_grad);
    opt.ascend(params, mean_grad);
    result.objective_log.push_back(mean_log_xi);
  }
  return result;
}

double objective_estimate(const runtime::ProposalProgram& p, const PairDistribution& r,
                          const ParamStore& params, int k_replicates, int n_outer,
                          std::uint64_t seed) {
  if (k_replicates < 1) throw DomainError("objective_estimate requires K >= 1");
  if (n_outer < 1) throw DomainError("objective_estimate requires n_outer >= 1");
  std::vector<double> values(static_cast<std::size_t>(n_outer));
  parallel_for(values.size(), [&](std::size_t i) {
    std::uint64_t elem_seed = derive_seed(seed, i);
    TrainingPair pair = r.sample(derive_seed(elem_seed, 0));
    runtime::AssessResult assessed =
        runtime::assess(p, pair.input, params, pair.z, k_replicates,
                        selection_of(pair.z), derive_seed(elem_seed, 1));
    values[i] = assessed.estimate.log_xi_hat;
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  return mean / static_cast<double>(values.size());
}

void save_checkpoint(const std::string& path, std::int64_t iteration,
                     const ParamStore& params, const Optimizer& opt,
                     const std::map<std::string, std::string>& extra) {
  json doc = json::object();
  doc["iteration"] = iteration;
  json jparams = json::object();
  for (const auto& name : params.names()) {
    jparams[name] = tensor_to_json(params.value(name));
  }
  doc["params"] = jparams;

  json jopt = json::object();
  jopt["kind"] = opt.kind == Optimizer::Kind::kSgd ? "sgd" : "adam";
  jopt["t"] = opt.t;
  if (opt.kind == Optimizer::Kind::kSgd) {
    jopt["step_size"] = opt.step_size;
  } else {
    jopt["alpha"] = opt.adam.alpha;
    jopt["beta1"] = opt.adam.beta1;
    jopt["beta2"] = opt.adam.beta2;
    jopt["eps"] = opt.adam.eps;
    jopt["first_moments"] = moments_to_json(opt.first_moments);
    jopt["second_moments"] = moments_to_json(opt.second_moments);
  }
  doc["opt_state"] = jopt;

  json jextra = json::object();
  for (const auto& [key, value] : extra) jextra[key] = value;
  doc["extra"] = jextra;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw IoError("invalid checkpoint JSON: " + path);

  Checkpoint out;
  out.iteration = doc.at("iteration").get<std::int64_t>();
  for (auto it = doc.at("params").begin(); it != doc.at("params").end(); ++it) {
    out.params.add(it.key(), tensor_from_json(it.value()));
  }
  const json& jopt = doc.at("opt_state");
  std::string kind = jopt.at("kind").get<std::string>();
  if (kind == "sgd") {
    out.opt = Optimizer::make_sgd(jopt.at("step_size").get<double>());
  } else if (kind == "adam") {
    AdamConfig config;
    config.alpha = jopt.at("alpha").get<double>();
    config.beta1 = jopt.at("beta1").get<double>();
    config.beta2 = jopt.at("beta2").get<double>();
    config.eps = jopt.at("eps").get<double>();
    out.opt = Optimizer::make_adam(config);
    out.opt.first_moments = moments_from_json(jopt.at("first_moments"));
    out.opt.second_moments = moments_from_json(jopt.at("second_moments"));
  } else {
    throw IoError("unknown optimizer kind in checkpoint: " + kind);
  }
  out.opt.t = jopt.at("t").get<std::int64_t>();
  if (doc.contains("extra")) {
    for (auto it = doc.at("extra").begin(); it != doc.at("extra").end(); ++it) {
      out.extra[it.key()] = it.value().get<std::string>();
    }
  }
  return out;
}

void write_objective_csv(const std::string& path, const std::vector<double>& objective_log,
                         const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& line : header_comments) out << "# " << line << "\n";
  out << "iteration,mean_log_xi_hat\n";
  for (std::size_t i = 0; i < objective_log.size(); ++i) {
    out << (i + 1) << ','
        << (objective_log[i] == kNegInf ? std::string("-inf")
                                        : format_real(objective_log[i]))
        << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace propprog::trainer
