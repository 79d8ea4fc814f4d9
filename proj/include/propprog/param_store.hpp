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

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace propprog {

// Dense row-major tensor of rank 0, 1, or 2.
class Tensor {
 public:
  Tensor() : rank_(0), rows_(1), cols_(1), data_(1, 0.0) {}

  static Tensor scalar(double x);
  static Tensor vector(std::size_t n, double fill = 0.0);
  static Tensor vector_of(std::vector<double> data);
  static Tensor matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  static Tensor matrix_of(std::size_t rows, std::size_t cols, std::vector<double> data);
  static Tensor zeros_like(const Tensor& other);

  int rank() const { return rank_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double scalar_value() const;
  double& at(std::size_t i);
  double at(std::size_t i) const;
  double& at(std::size_t i, std::size_t j);
  double at(std::size_t i, std::size_t j) const;

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void fill(double x);
  bool same_shape(const Tensor& other) const;
  // this += c * other; shapes must agree.
  void add_scaled(const Tensor& other, double c);
  bool all_finite() const;

 private:
  int rank_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// A named gradient accumulation, shaped like a subset of a ParamStore.
using GradMap = std::map<std::string, Tensor>;

// dst[name] += c * contribution, creating the entry as zeros if absent.
void accumulate(GradMap& dst, const std::string& name, const Tensor& contribution,
                double c = 1.0);

// dst[name] += c * src[name] for every entry of src.
void accumulate(GradMap& dst, const GradMap& src, double c = 1.0);

bool all_finite(const GradMap& grads);

// Named parameter tensors, each paired with a gradient accumulator of the
// same shape. Iteration order is lexicographic by name, which fixes the
// reduction order everywhere gradients are summed.
class ParamStore {
 public:
  void add(const std::string& name, Tensor init);
  bool has(const std::string& name) const;

  Tensor& value(const std::string& name);
  const Tensor& value(const std::string& name) const;
  Tensor& grad(const std::string& name);
  const Tensor& grad(const std::string& name) const;

  void zero_grads();
  // grads += c * src for every entry of src; unknown names throw.
  void accumulate_grads(const GradMap& src, double c = 1.0);

  std::vector<std::string> names() const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    Tensor value;
    Tensor grad;
  };
  std::map<std::string, Entry> entries_;
};

}  // namespace propprog
