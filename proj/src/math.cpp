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

#include "propprog/math.hpp"

#include <algorithm>

#include "propprog/errors.hpp"

namespace propprog {

double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : xs) {
    if (x != kNegInf) sum += std::exp(x - m);
  }
  return m + std::log(sum);
}

double log_mean_exp(const std::vector<double>& xs) {
  if (xs.empty()) throw DomainError("log_mean_exp of empty input");
  return log_sum_exp(xs) - std::log(static_cast<double>(xs.size()));
}

double log_sum_exp_excluding(const std::vector<double>& xs, std::size_t skip) {
  double m = kNegInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != skip) m = std::max(m, xs[i]);
  }
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i != skip && xs[i] != kNegInf) sum += std::exp(xs[i] - m);
  }
  return m + std::log(sum);
}

std::vector<double> softmax(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) throw DomainError("softmax of all -inf input");
  std::vector<double> out(xs.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] != kNegInf) {
      out[i] = std::exp(xs[i] - m);
      sum += out[i];
    }
  }
  for (double& w : out) w /= sum;
  return out;
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

double sigmoid_grad(double x) {
  double s = sigmoid(x);
  return s * (1.0 - s);
}

}  // namespace propprog
