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

#include <cmath>
#include <limits>
#include <vector>

namespace propprog {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum_i exp(x[i])) with max shifting. Entries equal to -inf contribute
// nothing; an empty or all -inf input yields -inf.
double log_sum_exp(const std::vector<double>& xs);

// log((1/n) sum_i exp(x[i])) over all n entries.
double log_mean_exp(const std::vector<double>& xs);

// log(sum over all i != skip of exp(x[i])).
double log_sum_exp_excluding(const std::vector<double>& xs, std::size_t skip);

// Normalized weights exp(x[i]) / sum_j exp(x[j]), computed with max
// shifting. Entries equal to -inf map to weight zero. At least one entry
// must be finite.
std::vector<double> softmax(const std::vector<double>& xs);

double sigmoid(double x);

// Derivative of sigmoid, sigmoid(x) * (1 - sigmoid(x)).
double sigmoid_grad(double x);

}  // namespace propprog
