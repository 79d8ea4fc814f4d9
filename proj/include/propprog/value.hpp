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
#include <string>
#include <variant>
#include <vector>

namespace propprog {

// Random choices are identified by string addresses.
using Address = std::string;

enum class ValueTag { kBoolean, kInteger, kReal, kRealVector };

// The value of a single random choice. Equality is tag-sensitive: values of
// different tags never compare equal and are never coerced.
class Value {
 public:
  Value() : data_(false) {}
  Value(bool b) : data_(b) {}
  Value(std::int64_t i) : data_(i) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(double r) : data_(r) {}
  Value(std::vector<double> v) : data_(std::move(v)) {}

  ValueTag tag() const { return static_cast<ValueTag>(data_.index()); }

  bool is_boolean() const { return tag() == ValueTag::kBoolean; }
  bool is_integer() const { return tag() == ValueTag::kInteger; }
  bool is_real() const { return tag() == ValueTag::kReal; }
  bool is_real_vector() const { return tag() == ValueTag::kRealVector; }

  // Accessors throw TypeError when the tag does not match.
  bool as_boolean() const;
  std::int64_t as_integer() const;
  double as_real() const;
  const std::vector<double>& as_real_vector() const;

  bool operator==(const Value& other) const { return data_ == other.data_; }
  bool operator!=(const Value& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  std::variant<bool, std::int64_t, double, std::vector<double>> data_;
};

}  // namespace propprog
