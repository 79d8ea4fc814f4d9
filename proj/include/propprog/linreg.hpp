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

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "propprog/nnet.hpp"
#include "propprog/runtime.hpp"
#include "propprog/samplers.hpp"
#include "propprog/trainer.hpp"

namespace propprog::linreg {

// Robust Bayesian linear regression with outliers:
//   slope ~ Normal(0, 1); intercept ~ Normal(0, 2);
//   outlier-i ~ Bernoulli(0.1) for 1 <= i <= N;
//   y_i ~ Normal(slope * x_i + intercept, outlier-i ? 5.8 : 1).
// Latent assignments are ChoiceMaps over the addresses "slope",
// "intercept", and "outlier-1" .. "outlier-N".

struct Dataset {
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t size() const { return xs.size(); }
};

Dataset make_dataset(std::vector<double> xs, std::vector<double> ys);

inline constexpr double kOutlierPrior = 0.1;
inline constexpr double kOutlierStddev = 5.8;
inline constexpr double kInlierStddev = 1.0;
inline constexpr double kSlopePriorStddev = 1.0;
inline constexpr double kInterceptPriorStddev = 2.0;

Address outlier_address(std::size_t i);  // 1-based
OutputSelection latent_selection();

// Log joint density of the model at a full latent assignment, given the
// dataset. The assignment must contain exactly the latent addresses.
double model_log_joint(const Dataset& data, const ChoiceMap& latents);

// The model joint as an unnormalized posterior target over latents.
samplers::UnnormalizedTarget posterior_target(std::shared_ptr<const Dataset> data);

struct LineHypothesis {
  double slope = 0.0;
  double intercept = 0.0;
};

struct RansacParams {
  int num_iters = 1;
  double epsilon = 1.0;
};

// Random sample consensus: num_iters times, pick two distinct points, fit
// the line through them, and count inliers within epsilon; the first line
// with a strictly larger inlier count is kept. Iterations that draw two
// points with equal x are skipped.
LineHypothesis ransac(const Dataset& data, const RansacParams& params,
                      RandomStream& rng);

// Posterior probability that point (x, y) is an outlier given the line:
// the two-component Bayes ratio between the outlier and inlier noise
// models.
double conditional_outlier_prob(double x, double y, const LineHypothesis& line);

// Evenly spaced x grid on [-5, 5] and model-sampled latents and ys.
struct GeneratedPair {
  Dataset data;
  ChoiceMap latents;
};
GeneratedPair generate_pair(std::size_t n_points, std::uint64_t seed);

// The training pair distribution: datasets of n_points drawn from the
// model with latents as the supervision targets.
trainer::PairDistribution pair_distribution(std::size_t n_points);

// Proposal families. Inputs are shared_ptr<const Dataset>.

// RANSAC driven proposal with trained parameters: epsilon ~
// Gamma(exp(eps_alpha), exp(eps_beta)) and iters ~
// Categorical(softmax(iter_logits)) feed a RANSAC rough fit; a network
// reads the data and emits Cauchy scales around the rough line; outliers
// follow the conditional outlier probability under the proposed line.
class RansacNnProposal final : public runtime::ProposalProgram {
 public:
  RansacNnProposal(std::size_t n_points, std::size_t hidden_dim, std::size_t iter_support);

  void run(runtime::ExecutionContext& ctx, const std::any& input,
           const ParamStore& params) const override;

  void init_params(ParamStore& params, std::uint64_t seed) const;

  std::size_t n_points() const { return n_points_; }
  std::size_t iter_support() const { return iter_support_; }

 private:
  std::size_t n_points_;
  std::size_t iter_support_;
  nnet::Mlp scale_net_;
};

// Pure network proposal: an auxiliary 2-dimensional standard normal latent
// and the data feed a network that emits Cauchy locations and scales for
// the line; outliers follow the conditional outlier probability.
class NnProposal final : public runtime::ProposalProgram {
 public:
  NnProposal(std::size_t n_points, std::size_t hidden_dim);

  void run(runtime::ExecutionContext& ctx, const std::any& input,
           const ParamStore& params) const override;

  void init_params(ParamStore& params, std::uint64_t seed) const;

  std::size_t n_points() const { return n_points_; }

 private:
  std::size_t n_points_;
  nnet::Mlp line_net_;
};

// Samples latents from the model prior; no trainable parameters.
class PriorProposal final : public runtime::ProposalProgram {
 public:
  explicit PriorProposal(std::size_t n_points);

  void run(runtime::ExecutionContext& ctx, const std::any& input,
           const ParamStore& params) const override;

  std::size_t n_points() const { return n_points_; }

 private:
  std::size_t n_points_;
};

// Dataset CSV with header "x,y", one point per line; "# "-prefixed comment
// lines are ignored on read.
void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<std::string>& header_comments);
Dataset read_dataset_csv(const std::string& path);

}  // namespace propprog::linreg
