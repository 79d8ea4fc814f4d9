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

#include "propprog/trace.hpp"

namespace propprog {

// Reals are printed with 17 significant digits so that round trips
// reproduce every double bit-identically. Non-finite numbers are rejected;
// persisted artifacts carry finite probabilities and values only.
std::string format_real(double x);

// Trace JSON:
//   {"choices":[{"addr":...,"value":{"t":...,"v":...},"lp":...}],
//    "total_lp":...}
// Value tags: "b" boolean, "i" integer, "r" real, "v" real vector.
std::string to_json(const Trace& trace);
Trace trace_from_json(const std::string& text);

// ChoiceMap JSON: {"choices":[{"addr":...,"value":{...}}]}, entries in
// address order.
std::string to_json(const ChoiceMap& map);
ChoiceMap choice_map_from_json(const std::string& text);

}  // namespace propprog
