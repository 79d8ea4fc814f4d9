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

#include <map>
#include <string>
#include <vector>

#include "propprog/rng.hpp"
#include "propprog/value.hpp"

namespace propprog::dist {

// Partial derivatives of a log density with respect to the distribution's
// own parameters, keyed by parameter name ("mean", "stddev", "p",
// "probs[i]", "location", "scale", "shape"). Distributions with no
// differentiable parameters return an empty map.
struct ParamGrad {
  std::map<std::string, double> partials;

  double at(const std::string& name) const;
  bool has(const std::string& name) const { return partials.count(name) > 0; }
};

enum class Kind {
  kBernoulli,
  kCategorical,
  kUniformDiscrete,
  kNormal,
  kCauchy,
  kGamma,
  kMvNormalIid,
};

// A fixed-parameter primitive distribution: the vocabulary from which
// proposal programs draw their addressed choices. Construction validates
// parameters (InvalidParamsError). log_density returns -inf for values
// outside the support or with a mismatched type tag.
class Distribution {
 public:
  static Distribution bernoulli(double p);
  static Distribution categorical(std::vector<double> probs);
  static Distribution uniform_discrete(std::int64_t lo, std::int64_t hi);
  static Distribution normal(double mean, double stddev);
  static Distribution cauchy(double location, double scale);
  // Shape-scale parameterization: density x^(shape-1) exp(-x/scale) /
  // (Gamma(shape) scale^shape) on x > 0.
  static Distribution gamma(double shape, double scale);
  // dim independent standard normal coordinates as one real-vector value.
  static Distribution mvnormal_iid(int dim);

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }

  Value sample(RandomStream& rng) const;
  double log_density(const Value& value) const;

  // Gradient of log_density at an in-support value; throws
  // OutOfSupportError otherwise.
  ParamGrad grad_log_density(const Value& value) const;

  bool has_finite_support() const;
  // Values with positive probability, for exhaustive enumeration. Throws
  // NonEnumerableError for continuous distributions.
  std::vector<Value> support() const;

  std::string describe() const;

 private:
  Distribution(Kind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {}

  Kind kind_;
  std::vector<double> params_;
};

// Digamma function psi(x) = d/dx log Gamma(x) for x > 0, by argument shift
// to x >= 8 and an asymptotic tail.
double digamma(double x);

double normal_log_density(double x, double mean, double stddev);

}  // namespace propprog::dist
