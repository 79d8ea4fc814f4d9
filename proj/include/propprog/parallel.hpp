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
#include <functional>

namespace propprog {

// Worker thread cap: the PROPOSAL_PROGRAMS_THREADS environment variable if
// set to a positive integer, otherwise hardware concurrency.
unsigned max_threads();

// Runs fn(i) for every i in [0, n), possibly across threads. Each call must
// write only to its own result slot; callers combine slots afterwards in
// index order, so results never depend on the thread count or schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace propprog
