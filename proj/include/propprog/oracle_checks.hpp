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

namespace propprog::oracle_checks {

// One named correctness check over the enumeration oracle, the samplers,
// and the trainer, run against the built-in discrete fixtures. Exact
// checks compare against enumerated ground truth at tight tolerances;
// smoke checks run fixed-seed Monte Carlo at standard-error tolerances.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The names of every registered check, in execution order:
//   enumeration-totals   exhaustive enumerations sum to probability one
//   support-coverage     positive-target outputs have positive proposal mass
//   is-weight-identity   extended-space importance weights integrate to the
//                        unnormalized target, tuple by tuple at K = 2;
//                        infeasible constrained mass shrinks the integral
//                        by the exactly pinned factor (1 - a^2)
//   mh-detailed-balance  the estimated-ratio MH kernel is reversible for
//                        the exact target, enumerated over all K = 2 tuples
//   objective-ordering   the K-replicate objective increases with K and
//                        stays below the exact log marginal
//   gof-machinery        chi-square tails against closed forms at small
//                        degrees of freedom; total variation hand values
//   unbiasedness-smoke   Monte Carlo means of probability estimates match
//                        exact marginals within standard error
//   mh-smoke             a short chain's occupancy matches the target
//   gradient-smoke       averaged gradient estimates match the enumerated
//                        exact gradient within standard error
const std::vector<std::string>& check_names();

// Runs one check by name; unknown names raise ConfigError. A check that
// throws is reported as failed with the exception message as detail.
CheckResult run_check(const std::string& name);

// Runs the named checks in order; an empty list means all of them.
std::vector<CheckResult> run_suite(const std::vector<std::string>& names);

}  // namespace propprog::oracle_checks
