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

#include "propprog/nnet.hpp"

#include <cmath>

#include "propprog/errors.hpp"
#include "propprog/math.hpp"

namespace propprog::nnet {

Mlp::Mlp(std::string prefix, std::size_t input_dim, std::size_t hidden_dim,
         std::size_t output_dim)
    : prefix_(std::move(prefix)),
      input_dim_(input_dim),
      hidden_dim_(hidden_dim),
      output_dim_(output_dim) {
  if (input_dim_ == 0 || hidden_dim_ == 0 || output_dim_ == 0) {
    throw ShapeMismatchError("mlp dimensions must be positive");
  }
}

void Mlp::register_params(ParamStore& params, RandomStream& rng) const {
  Tensor hw = Tensor::matrix(hidden_dim_, input_dim_);
  double h_scale = 1.0 / std::sqrt(static_cast<double>(input_dim_));
  for (double& w : hw.data()) w = h_scale * rng.normal();
  Tensor ow = Tensor::matrix(output_dim_, hidden_dim_);
  double o_scale = 1.0 / std::sqrt(static_cast<double>(hidden_dim_));
  for (double& w : ow.data()) w = o_scale * rng.normal();
  params.add(weight_name("h_weights"), std::move(hw));
  params.add(weight_name("h_biases"), Tensor::vector(hidden_dim_));
  params.add(weight_name("out_weights"), std::move(ow));
  params.add(weight_name("out_biases"), Tensor::vector(output_dim_));
}

std::vector<double> Mlp::forward(const ParamStore& params,
                                 const std::vector<double>& input, Cache* cache) const {
  if (input.size() != input_dim_) throw ShapeMismatchError("mlp input size mismatch");
  const Tensor& hw = params.value(weight_name("h_weights"));
  const Tensor& hb = params.value(weight_name("h_biases"));
  const Tensor& ow = params.value(weight_name("out_weights"));
  const Tensor& ob = params.value(weight_name("out_biases"));
  if (hw.rows() != hidden_dim_ || hw.cols() != input_dim_ || hb.rows() != hidden_dim_ ||
      ow.rows() != output_dim_ || ow.cols() != hidden_dim_ || ob.rows() != output_dim_) {
    throw ShapeMismatchError("mlp parameter shape mismatch");
  }

  std::vector<double> hidden(hidden_dim_);
  for (std::size_t i = 0; i < hidden_dim_; ++i) {
    double acc = hb.at(i);
    for (std::size_t j = 0; j < input_dim_; ++j) acc += hw.at(i, j) * input[j];
    hidden[i] = sigmoid(acc);
  }
  std::vector<double> output(output_dim_);
  for (std::size_t i = 0; i < output_dim_; ++i) {
    double acc = ob.at(i);
    for (std::size_t j = 0; j < hidden_dim_; ++j) acc += ow.at(i, j) * hidden[j];
    output[i] = acc;
  }
  if (cache != nullptr) {
    cache->input = input;
    cache->hidden = hidden;
  }
  return output;
}

std::vector<double> Mlp::backward(const ParamStore& params, const Cache& cache,
                                  const std::vector<double>& output_grad,
                                  GradMap& sink) const {
  if (output_grad.size() != output_dim_ || cache.input.size() != input_dim_ ||
      cache.hidden.size() != hidden_dim_) {
    throw ShapeMismatchError("mlp backward size mismatch");
  }
  const Tensor& hw = params.value(weight_name("h_weights"));
  const Tensor& ow = params.value(weight_name("out_weights"));

  Tensor g_ow = Tensor::matrix(output_dim_, hidden_dim_);
  Tensor g_ob = Tensor::vector(output_dim_);
  for (std::size_t i = 0; i < output_dim_; ++i) {
    g_ob.at(i) = output_grad[i];
    for (std::size_t j = 0; j < hidden_dim_; ++j) {
      g_ow.at(i, j) = output_grad[i] * cache.hidden[j];
    }
  }

  // Pre-activation gradient: (W_out^T output_grad) * h * (1 - h).
  std::vector<double> g_pre(hidden_dim_);
  for (std::size_t j = 0; j < hidden_dim_; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < output_dim_; ++i) acc += ow.at(i, j) * output_grad[i];
    g_pre[j] = acc * cache.hidden[j] * (1.0 - cache.hidden[j]);
  }

  Tensor g_hw = Tensor::matrix(hidden_dim_, input_dim_);
  Tensor g_hb = Tensor::vector(hidden_dim_);
  for (std::size_t j = 0; j < hidden_dim_; ++j) {
    g_hb.at(j) = g_pre[j];
    for (std::size_t k = 0; k < input_dim_; ++k) {
      g_hw.at(j, k) = g_pre[j] * cache.input[k];
    }
  }

  std::vector<double> input_grad(input_dim_);
  for (std::size_t k = 0; k < input_dim_; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < hidden_dim_; ++j) acc += hw.at(j, k) * g_pre[j];
    input_grad[k] = acc;
  }

  accumulate(sink, weight_name("h_weights"), g_hw);
  accumulate(sink, weight_name("h_biases"), g_hb);
  accumulate(sink, weight_name("out_weights"), g_ow);
  accumulate(sink, weight_name("out_biases"), g_ob);
  return input_grad;
}

}  // namespace propprog::nnet
