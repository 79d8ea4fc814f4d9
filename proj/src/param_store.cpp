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

#include "propprog/param_store.hpp"

#include <cmath>

#include "propprog/errors.hpp"

namespace propprog {

Tensor Tensor::scalar(double x) {
  Tensor t;
  t.data_[0] = x;
  return t;
}

Tensor Tensor::vector(std::size_t n, double fill) {
  Tensor t;
  t.rank_ = 1;
  t.rows_ = n;
  t.cols_ = 1;
  t.data_.assign(n, fill);
  return t;
}

Tensor Tensor::vector_of(std::vector<double> data) {
  Tensor t;
  t.rank_ = 1;
  t.rows_ = data.size();
  t.cols_ = 1;
  t.data_ = std::move(data);
  return t;
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, double fill) {
  Tensor t;
  t.rank_ = 2;
  t.rows_ = rows;
  t.cols_ = cols;
  t.data_.assign(rows * cols, fill);
  return t;
}

Tensor Tensor::matrix_of(std::size_t rows, std::size_t cols, std::vector<double> data) {
  if (data.size() != rows * cols) throw ShapeMismatchError("matrix_of: data size mismatch");
  Tensor t;
  t.rank_ = 2;
  t.rows_ = rows;
  t.cols_ = cols;
  t.data_ = std::move(data);
  return t;
}

Tensor Tensor::zeros_like(const Tensor& other) {
  Tensor t = other;
  t.fill(0.0);
  return t;
}

double Tensor::scalar_value() const {
  if (rank_ != 0) throw ShapeMismatchError("scalar_value on a non-scalar tensor");
  return data_[0];
}

double& Tensor::at(std::size_t i) {
  if (i >= data_.size()) throw ShapeMismatchError("tensor index out of range");
  return data_[i];
}

double Tensor::at(std::size_t i) const {
  if (i >= data_.size()) throw ShapeMismatchError("tensor index out of range");
  return data_[i];
}

double& Tensor::at(std::size_t i, std::size_t j) {
  if (rank_ != 2 || i >= rows_ || j >= cols_) {
    throw ShapeMismatchError("matrix index out of range");
  }
  return data_[i * cols_ + j];
}

double Tensor::at(std::size_t i, std::size_t j) const {
  if (rank_ != 2 || i >= rows_ || j >= cols_) {
    throw ShapeMismatchError("matrix index out of range");
  }
  return data_[i * cols_ + j];
}

void Tensor::fill(double x) {
  for (double& v : data_) v = x;
}

bool Tensor::same_shape(const Tensor& other) const {
  return rank_ == other.rank_ && rows_ == other.rows_ && cols_ == other.cols_;
}

void Tensor::add_scaled(const Tensor& other, double c) {
  if (!same_shape(other)) throw ShapeMismatchError("add_scaled: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += c * other.data_[i];
}

bool Tensor::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void accumulate(GradMap& dst, const std::string& name, const Tensor& contribution,
                double c) {
  auto it = dst.find(name);
  if (it == dst.end()) {
    it = dst.emplace(name, Tensor::zeros_like(contribution)).first;
  }
  it->second.add_scaled(contribution, c);
}

void accumulate(GradMap& dst, const GradMap& src, double c) {
  for (const auto& [name, tensor] : src) accumulate(dst, name, tensor, c);
}

bool all_finite(const GradMap& grads) {
  for (const auto& [name, tensor] : grads) {
    if (!tensor.all_finite()) return false;
  }
  return true;
}

void ParamStore::add(const std::string& name, Tensor init) {
  if (has(name)) throw DuplicateAddressError("parameter already registered: " + name);
  Entry e;
  e.grad = Tensor::zeros_like(init);
  e.value = std::move(init);
  entries_.emplace(name, std::move(e));
}

bool ParamStore::has(const std::string& name) const { return entries_.count(name) > 0; }

Tensor& ParamStore::value(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DomainError("unknown parameter: " + name);
  return it->second.value;
}

const Tensor& ParamStore::value(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DomainError("unknown parameter: " + name);
  return it->second.value;
}

Tensor& ParamStore::grad(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DomainError("unknown parameter: " + name);
  return it->second.grad;
}

const Tensor& ParamStore::grad(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw DomainError("unknown parameter: " + name);
  return it->second.grad;
}

void ParamStore::zero_grads() {
  for (auto& [name, entry] : entries_) entry.grad.fill(0.0);
}

void ParamStore::accumulate_grads(const GradMap& src, double c) {
  for (const auto& [name, tensor] : src) grad(name).add_scaled(tensor, c);
}

std::vector<std::string> ParamStore::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

}  // namespace propprog
