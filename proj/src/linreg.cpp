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

#include "propprog/linreg.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "propprog/dist.hpp"
#include "propprog/errors.hpp"
#include "propprog/math.hpp"
#include "propprog/serialize.hpp"

namespace propprog::linreg {

namespace {

using dist::Distribution;

std::shared_ptr<const Dataset> dataset_from_input(const std::any& input,
                                                  std::size_t expected_points) {
  if (!input.has_value() || input.type() != typeid(std::shared_ptr<const Dataset>)) {
    throw TypeError("proposal input must be a shared_ptr<const Dataset>");
  }
  auto data = std::any_cast<std::shared_ptr<const Dataset>>(input);
  if (data == nullptr || data->size() != expected_points) {
    throw ShapeMismatchError("dataset size does not match the proposal");
  }
  return data;
}

std::vector<double> data_features(const Dataset& data) {
  std::vector<double> features;
  features.reserve(2 * data.size());
  features.insert(features.end(), data.xs.begin(), data.xs.end());
  features.insert(features.end(), data.ys.begin(), data.ys.end());
  return features;
}

}  // namespace

Dataset make_dataset(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size()) throw ShapeMismatchError("dataset: xs/ys size mismatch");
  if (xs.size() < 2) throw ShapeMismatchError("dataset: need at least 2 points");
  for (double x : xs) {
    if (!std::isfinite(x)) throw DomainError("dataset: non-finite x");
  }
  for (double y : ys) {
    if (!std::isfinite(y)) throw DomainError("dataset: non-finite y");
  }
  Dataset d;
  d.xs = std::move(xs);
  d.ys = std::move(ys);
  return d;
}

Address outlier_address(std::size_t i) { return "outlier-" + std::to_string(i); }

OutputSelection latent_selection() {
  OutputSelection sel;
  sel.add("slope");
  sel.add("intercept");
  sel.add_prefix("outlier-");
  return sel;
}

double model_log_joint(const Dataset& data, const ChoiceMap& latents) {
  std::size_t n = data.size();
  if (latents.size() != n + 2) {
    throw ShapeMismatchError("latent assignment has the wrong number of addresses");
  }
  double slope = latents.at("slope").as_real();
  double intercept = latents.at("intercept").as_real();
  double total = dist::normal_log_density(slope, 0.0, kSlopePriorStddev) +
                 dist::normal_log_density(intercept, 0.0, kInterceptPriorStddev);
  for (std::size_t i = 0; i < n; ++i) {
    bool outlier = latents.at(outlier_address(i + 1)).as_boolean();
    total += outlier ? std::log(kOutlierPrior) : std::log1p(-kOutlierPrior);
    double mu = slope * data.xs[i] + intercept;
    total += dist::normal_log_density(data.ys[i], mu,
                                      outlier ? kOutlierStddev : kInlierStddev);
  }
  return total;
}

samplers::UnnormalizedTarget posterior_target(std::shared_ptr<const Dataset> data) {
  if (data == nullptr) throw DomainError("posterior_target: null dataset");
  samplers::UnnormalizedTarget target;
  target.description = "linreg posterior over " + std::to_string(data->size()) +
                       " points";
  target.log_density = [data](const ChoiceMap& latents) {
    return model_log_joint(*data, latents);
  };
  return target;
}

LineHypothesis ransac(const Dataset& data, const RansacParams& params,
                      RandomStream& rng) {
  if (params.num_iters < 1) throw DomainError("ransac requires num_iters >= 1");
  if (!(params.epsilon > 0.0)) throw DomainError("ransac requires epsilon > 0");
  std::size_t n = data.size();
  LineHypothesis best;
  best.slope = std::numeric_limits<double>::quiet_NaN();
  best.intercept = std::numeric_limits<double>::quiet_NaN();
  int best_inliers = -1;

  for (int iter = 0; iter < params.num_iters; ++iter) {
    std::size_t i = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    std::size_t j = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(n) - 2));
    if (j >= i) ++j;
    if (data.xs[i] == data.xs[j]) continue;
    double slope = (data.ys[j] - data.ys[i]) / (data.xs[j] - data.xs[i]);
    double intercept = data.ys[i] - slope * data.xs[i];
    int inliers = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double residual = data.ys[k] - (slope * data.xs[k] + intercept);
      if (std::fabs(residual) < params.epsilon) ++inliers;
    }
    if (inliers > best_inliers) {
      best_inliers = inliers;
      best.slope = slope;
      best.intercept = intercept;
    }
  }
  return best;
}

double conditional_outlier_prob(double x, double y, const LineHypothesis& line) {
  double mu = line.slope * x + line.intercept;
  double log_outlier =
      std::log(kOutlierPrior) + dist::normal_log_density(y, mu, kOutlierStddev);
  double log_inlier =
      std::log1p(-kOutlierPrior) + dist::normal_log_density(y, mu, kInlierStddev);
  return sigmoid(log_outlier - log_inlier);
}

GeneratedPair generate_pair(std::size_t n_points, std::uint64_t seed) {
  if (n_points < 2) throw DomainError("generate_pair requires at least 2 points");
  RandomStream rng(seed);
  std::vector<double> xs(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    xs[i] = -5.0 + 10.0 * static_cast<double>(i) / static_cast<double>(n_points - 1);
  }
  double slope = kSlopePriorStddev * rng.normal();
  double intercept = kInterceptPriorStddev * rng.normal();
  ChoiceMap latents;
  latents.set("slope", Value(slope));
  latents.set("intercept", Value(intercept));
  std::vector<double> ys(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    bool outlier = rng.uniform() < kOutlierPrior;
    latents.set(outlier_address(i + 1), Value(outlier));
    double stddev = outlier ? kOutlierStddev : kInlierStddev;
    ys[i] = slope * xs[i] + intercept + stddev * rng.normal();
  }
  GeneratedPair out;
  out.data = make_dataset(std::move(xs), std::move(ys));
  out.latents = std::move(latents);
  return out;
}

trainer::PairDistribution pair_distribution(std::size_t n_points) {
  trainer::PairDistribution r;
  r.description = "linreg model pairs over " + std::to_string(n_points) + " points";
  r.sample = [n_points](std::uint64_t seed) {
    GeneratedPair pair = generate_pair(n_points, seed);
    trainer::TrainingPair out;
    out.input = std::any(std::make_shared<const Dataset>(std::move(pair.data)));
    out.z = std::move(pair.latents);
    return out;
  };
  return r;
}

RansacNnProposal::RansacNnProposal(std::size_t n_points, std::size_t hidden_dim,
                                   std::size_t iter_support)
    : n_points_(n_points),
      iter_support_(iter_support),
      scale_net_("scale_net/", 2 * n_points, hidden_dim, 2) {
  if (n_points_ < 2) throw ShapeMismatchError("proposal requires at least 2 points");
  if (iter_support_ < 1) throw DomainError("iter_support must be at least 1");
}

void RansacNnProposal::init_params(ParamStore& params, std::uint64_t seed) const {
  params.add("eps_alpha", Tensor::scalar(0.0));
  params.add("eps_beta", Tensor::scalar(0.0));
  params.add("iter_logits", Tensor::vector(iter_support_));
  RandomStream rng(seed);
  scale_net_.register_params(params, rng);
}

void RansacNnProposal::run(runtime::ExecutionContext& ctx, const std::any& input,
                           const ParamStore& params) const {
  auto data = dataset_from_input(input, n_points_);

  double eps_alpha = params.value("eps_alpha").scalar_value();
  double eps_beta = params.value("eps_beta").scalar_value();
  double shape = std::exp(eps_alpha);
  double scale = std::exp(eps_beta);
  double epsilon =
      ctx.choice(Distribution::gamma(shape, scale), "epsilon",
                 [shape, scale](const dist::ParamGrad& g, GradMap& sink) {
                   accumulate(sink, "eps_alpha", Tensor::scalar(g.at("shape") * shape));
                   accumulate(sink, "eps_beta", Tensor::scalar(g.at("scale") * scale));
                 })
          .as_real();

  std::vector<double> iter_probs = softmax(params.value("iter_logits").data());
  std::int64_t iter_index =
      ctx.choice(Distribution::categorical(iter_probs), "iters",
                 [iter_probs](const dist::ParamGrad& g, GradMap& sink) {
                   std::size_t n = iter_probs.size();
                   std::vector<double> s(n);
                   double s_total = 0.0;
                   for (std::size_t i = 0; i < n; ++i) {
                     s[i] = g.at("probs[" + std::to_string(i) + "]") * iter_probs[i];
                     s_total += s[i];
                   }
                   Tensor grad = Tensor::vector(n);
                   for (std::size_t j = 0; j < n; ++j) {
                     grad.at(j) = s[j] - iter_probs[j] * s_total;
                   }
                   accumulate(sink, "iter_logits", grad);
                 })
          .as_integer();

  RansacParams ransac_params;
  ransac_params.num_iters = static_cast<int>(iter_index) + 1;
  ransac_params.epsilon = epsilon;
  LineHypothesis rough = ransac(*data, ransac_params, ctx.raw_rng());

  nnet::Mlp::Cache cache;
  std::vector<double> scales =
      scale_net_.forward(params, data_features(*data), &cache);
  double slope_scale = std::exp(scales[0]);
  double intercept_scale = std::exp(scales[1]);

  double slope =
      ctx.choice(Distribution::cauchy(rough.slope, slope_scale), "slope",
                 [this, &params, cache, slope_scale](const dist::ParamGrad& g,
                                                     GradMap& sink) {
                   std::vector<double> og = {g.at("scale") * slope_scale, 0.0};
                   scale_net_.backward(params, cache, og, sink);
                 })
          .as_real();
  double intercept =
      ctx.choice(Distribution::cauchy(rough.intercept, intercept_scale), "intercept",
                 [this, &params, cache, intercept_scale](const dist::ParamGrad& g,
                                                         GradMap& sink) {
                   std::vector<double> og = {0.0, g.at("scale") * intercept_scale};
                   scale_net_.backward(params, cache, og, sink);
                 })
          .as_real();

  LineHypothesis line{slope, intercept};
  for (std::size_t i = 0; i < n_points_; ++i) {
    double p = conditional_outlier_prob(data->xs[i], data->ys[i], line);
    ctx.choice(Distribution::bernoulli(p), outlier_address(i + 1));
  }
}

NnProposal::NnProposal(std::size_t n_points, std::size_t hidden_dim)
    : n_points_(n_points), line_net_("line_net/", 2 + 2 * n_points, hidden_dim, 4) {
  if (n_points_ < 2) throw ShapeMismatchError("proposal requires at least 2 points");
}

void NnProposal::init_params(ParamStore& params, std::uint64_t seed) const {
  RandomStream rng(seed);
  line_net_.register_params(params, rng);
}

void NnProposal::run(runtime::ExecutionContext& ctx, const std::any& input,
                     const ParamStore& params) const {
  auto data = dataset_from_input(input, n_points_);

  std::vector<double> latent =
      ctx.choice(Distribution::mvnormal_iid(2), "latent").as_real_vector();

  std::vector<double> features;
  features.reserve(2 + 2 * n_points_);
  features.insert(features.end(), latent.begin(), latent.end());
  features.insert(features.end(), data->xs.begin(), data->xs.end());
  features.insert(features.end(), data->ys.begin(), data->ys.end());

  nnet::Mlp::Cache cache;
  std::vector<double> heads = line_net_.forward(params, features, &cache);
  double slope_scale = std::exp(heads[2]);
  double intercept_scale = std::exp(heads[3]);

  double slope =
      ctx.choice(Distribution::cauchy(heads[0], slope_scale), "slope",
                 [this, &params, cache, slope_scale](const dist::ParamGrad& g,
                                                     GradMap& sink) {
                   std::vector<double> og = {g.at("location"), 0.0,
                                             g.at("scale") * slope_scale, 0.0};
                   line_net_.backward(params, cache, og, sink);
                 })
          .as_real();
  double intercept =
      ctx.choice(Distribution::cauchy(heads[1], intercept_scale), "intercept",
                 [this, &params, cache, intercept_scale](const dist::ParamGrad& g,
                                                         GradMap& sink) {
                   std::vector<double> og = {0.0, g.at("location"), 0.0,
                                             g.at("scale") * intercept_scale};
                   line_net_.backward(params, cache, og, sink);
                 })
          .as_real();

  LineHypothesis line{slope, intercept};
  for (std::size_t i = 0; i < n_points_; ++i) {
    double p = conditional_outlier_prob(data->xs[i], data->ys[i], line);
    ctx.choice(Distribution::bernoulli(p), outlier_address(i + 1));
  }
}

PriorProposal::PriorProposal(std::size_t n_points) : n_points_(n_points) {
  if (n_points_ < 2) throw ShapeMismatchError("proposal requires at least 2 points");
}

void PriorProposal::run(runtime::ExecutionContext& ctx, const std::any& input,
                        const ParamStore&) const {
  dataset_from_input(input, n_points_);
  ctx.choice(Distribution::normal(0.0, kSlopePriorStddev), "slope");
  ctx.choice(Distribution::normal(0.0, kInterceptPriorStddev), "intercept");
  for (std::size_t i = 0; i < n_points_; ++i) {
    ctx.choice(Distribution::bernoulli(kOutlierPrior), outlier_address(i + 1));
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<std::string>& header_comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const auto& line : header_comments) out << "# " << line << "\n";
  out << "x,y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << format_real(data.xs[i]) << ',' << format_real(data.ys[i]) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<double> xs;
  std::vector<double> ys;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "x,y") throw IoError("dataset CSV must start with header x,y");
      header_seen = true;
      continue;
    }
    std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed dataset row: " + line);
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      ys.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw IoError("malformed dataset row: " + line);
    }
  }
  if (!header_seen) throw IoError("dataset CSV missing header");
  return make_dataset(std::move(xs), std::move(ys));
}

}  // namespace propprog::linreg
