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

#include <string>
#include <vector>

#include "propprog/param_store.hpp"
#include "propprog/rng.hpp"

namespace propprog::nnet {

// A single-hidden-layer perceptron with sigmoid hidden units and a linear
// output layer. Parameters live in a ParamStore under the names
// <prefix>h_weights (hidden x input), <prefix>h_biases (hidden),
// <prefix>out_weights (output x hidden), <prefix>out_biases (output).
// Gradients are computed by hand-rolled reverse accumulation; there is no
// autodiff tape anywhere in the library.
class Mlp {
 public:
  Mlp(std::string prefix, std::size_t input_dim, std::size_t hidden_dim,
      std::size_t output_dim);

  // Registers parameters: weights drawn Normal(0, 1/sqrt(fan_in)), biases
  // zero.
  void register_params(ParamStore& params, RandomStream& rng) const;

  struct Cache {
    std::vector<double> input;
    std::vector<double> hidden;
  };

  std::vector<double> forward(const ParamStore& params, const std::vector<double>& input,
                              Cache* cache = nullptr) const;

  // Accumulates d(loss)/d(params) into sink given d(loss)/d(output);
  // returns d(loss)/d(input).
  std::vector<double> backward(const ParamStore& params, const Cache& cache,
                               const std::vector<double>& output_grad,
                               GradMap& sink) const;

  const std::string& prefix() const { return prefix_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_dim() const { return hidden_dim_; }
  std::size_t output_dim() const { return output_dim_; }

  std::string weight_name(const std::string& suffix) const { return prefix_ + suffix; }

 private:
  std::string prefix_;
  std::size_t input_dim_;
  std::size_t hidden_dim_;
  std::size_t output_dim_;
};

}  // namespace propprog::nnet
