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

#include "propprog/value.hpp"

#include <cstdio>

#include "propprog/errors.hpp"

namespace propprog {

bool Value::as_boolean() const {
  if (!is_boolean()) throw TypeError("value is not a boolean");
  return std::get<bool>(data_);
}

std::int64_t Value::as_integer() const {
  if (!is_integer()) throw TypeError("value is not an integer");
  return std::get<std::int64_t>(data_);
}

double Value::as_real() const {
  if (!is_real()) throw TypeError("value is not a real");
  return std::get<double>(data_);
}

const std::vector<double>& Value::as_real_vector() const {
  if (!is_real_vector()) throw TypeError("value is not a real vector");
  return std::get<std::vector<double>>(data_);
}

std::string Value::to_string() const {
  char buf[64];
  switch (tag()) {
    case ValueTag::kBoolean:
      return std::get<bool>(data_) ? "true" : "false";
    case ValueTag::kInteger:
      std::snprintf(buf, sizeof(buf), "%lld",
                    static_cast<long long>(std::get<std::int64_t>(data_)));
      return buf;
    case ValueTag::kReal:
      std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(data_));
      return buf;
    case ValueTag::kRealVector: {
      std::string out = "[";
      const auto& v = std::get<std::vector<double>>(data_);
      for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
        if (i > 0) out += ", ";
        out += buf;
      }
      return out + "]";
    }
  }
  return "";
}

}  // namespace propprog
