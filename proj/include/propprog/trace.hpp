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

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "propprog/value.hpp"

namespace propprog {

// One addressed random choice made during an execution.
struct ChoiceRecord {
  Address address;
  Value value;
  double log_prob = 0.0;
  // Zero-based visit order within the execution.
  int position = 0;
};

// The complete record of one program execution: every addressed choice in
// visit order, with its log probability under the distribution it was drawn
// from or scored against. Immutable once constructed. Addresses are unique;
// total_log_prob is the sum of per-choice log probabilities and is -inf
// exactly when some choice was scored out of support.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<ChoiceRecord> records);

  const std::vector<ChoiceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  double total_log_prob() const { return total_log_prob_; }

  bool has(const Address& address) const;
  const ChoiceRecord& record_at(const Address& address) const;
  const Value& value_at(const Address& address) const;

 private:
  std::vector<ChoiceRecord> records_;
  std::unordered_map<Address, std::size_t> index_;
  double total_log_prob_ = 0.0;
};

// A set of (address, value) pairs with no execution-order information; the
// constrained-input and output-trace type. Map semantics: set() overwrites.
class ChoiceMap {
 public:
  ChoiceMap() = default;

  ChoiceMap& set(const Address& address, Value value);
  bool has(const Address& address) const;
  const Value& at(const Address& address) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Deterministic (lexicographic by address) iteration order.
  const std::map<Address, Value>& entries() const { return entries_; }

  bool operator==(const ChoiceMap& other) const { return entries_ == other.entries_; }
  bool operator!=(const ChoiceMap& other) const { return !(*this == other); }

 private:
  std::map<Address, Value> entries_;
};

// Designates which addresses of a program are outputs: an explicit address
// set plus any number of string prefixes. Prefix matching is plain string
// prefix comparison.
class OutputSelection {
 public:
  OutputSelection() = default;

  OutputSelection& add(const Address& address);
  OutputSelection& add_prefix(const std::string& prefix);

  static OutputSelection of(std::initializer_list<Address> addresses);

  bool contains(const Address& address) const;

  const std::set<Address>& explicit_addresses() const { return addresses_; }
  const std::vector<std::string>& prefixes() const { return prefixes_; }
  bool purely_explicit() const { return prefixes_.empty(); }

 private:
  std::set<Address> addresses_;
  std::vector<std::string> prefixes_;
};

// The output trace of an execution: the restriction of the trace to the
// selected addresses. Throws MissingOutputError if an explicitly selected
// address was not realized.
ChoiceMap restrict(const Trace& trace, const OutputSelection& outputs);

// Whether the trace agrees with z on the selected addresses: the trace
// realizes every address of z that the selection covers with an equal value,
// and realizes no selected address outside z. z must lie within the
// selection.
bool agrees(const Trace& trace, const ChoiceMap& z, const OutputSelection& outputs);

// Splits total_log_prob into the output part (records whose address the
// selection contains) and the internal part. The two components sum to
// total_log_prob.
std::pair<double, double> split_log_prob(const Trace& trace, const OutputSelection& outputs);

// Restriction of a ChoiceMap to the selected addresses.
ChoiceMap restrict_map(const ChoiceMap& map, const OutputSelection& outputs);

// Copy of base with every entry of overlay inserted or overwritten.
ChoiceMap merge(const ChoiceMap& base, const ChoiceMap& overlay);

// The explicit selection consisting of exactly the addresses of z.
OutputSelection selection_of(const ChoiceMap& z);

}  // namespace propprog
