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

#include "propprog/trace.hpp"

#include <cmath>

#include "propprog/errors.hpp"
#include "propprog/math.hpp"

namespace propprog {

Trace::Trace(std::vector<ChoiceRecord> records) : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (!index_.emplace(r.address, i).second) {
      throw DuplicateAddressError("duplicate address in trace: " + r.address);
    }
    total_log_prob_ += r.log_prob;
  }
  if (std::isnan(total_log_prob_)) total_log_prob_ = kNegInf;
}

bool Trace::has(const Address& address) const { return index_.count(address) > 0; }

const ChoiceRecord& Trace::record_at(const Address& address) const {
  auto it = index_.find(address);
  if (it == index_.end()) throw MissingOutputError("no choice at address: " + address);
  return records_[it->second];
}

const Value& Trace::value_at(const Address& address) const {
  return record_at(address).value;
}

ChoiceMap& ChoiceMap::set(const Address& address, Value value) {
  entries_[address] = std::move(value);
  return *this;
}

bool ChoiceMap::has(const Address& address) const { return entries_.count(address) > 0; }

const Value& ChoiceMap::at(const Address& address) const {
  auto it = entries_.find(address);
  if (it == entries_.end()) throw MissingOutputError("no value at address: " + address);
  return it->second;
}

OutputSelection& OutputSelection::add(const Address& address) {
  addresses_.insert(address);
  return *this;
}

OutputSelection& OutputSelection::add_prefix(const std::string& prefix) {
  prefixes_.push_back(prefix);
  return *this;
}

OutputSelection OutputSelection::of(std::initializer_list<Address> addresses) {
  OutputSelection sel;
  for (const auto& a : addresses) sel.add(a);
  return sel;
}

bool OutputSelection::contains(const Address& address) const {
  if (addresses_.count(address) > 0) return true;
  for (const auto& p : prefixes_) {
    if (address.compare(0, p.size(), p) == 0) return true;
  }
  return false;
}

ChoiceMap restrict(const Trace& trace, const OutputSelection& outputs) {
  ChoiceMap out;
  for (const auto& r : trace.records()) {
    if (outputs.contains(r.address)) out.set(r.address, r.value);
  }
  for (const auto& a : outputs.explicit_addresses()) {
    if (!out.has(a)) {
      throw MissingOutputError("selected output address not realized: " + a);
    }
  }
  return out;
}

bool agrees(const Trace& trace, const ChoiceMap& z, const OutputSelection& outputs) {
  for (const auto& [address, value] : z.entries()) {
    if (!outputs.contains(address)) {
      throw SelectionMismatchError("output trace address outside selection: " + address);
    }
    if (!trace.has(address) || trace.value_at(address) != value) return false;
  }
  for (const auto& r : trace.records()) {
    if (outputs.contains(r.address) && !z.has(r.address)) return false;
  }
  return true;
}

std::pair<double, double> split_log_prob(const Trace& trace, const OutputSelection& outputs) {
  double output_part = 0.0;
  double internal_part = 0.0;
  for (const auto& r : trace.records()) {
    if (outputs.contains(r.address)) {
      output_part += r.log_prob;
    } else {
      internal_part += r.log_prob;
    }
  }
  return {output_part, internal_part};
}

ChoiceMap restrict_map(const ChoiceMap& map, const OutputSelection& outputs) {
  ChoiceMap out;
  for (const auto& [address, value] : map.entries()) {
    if (outputs.contains(address)) out.set(address, value);
  }
  return out;
}

ChoiceMap merge(const ChoiceMap& base, const ChoiceMap& overlay) {
  ChoiceMap out = base;
  for (const auto& [address, value] : overlay.entries()) out.set(address, value);
  return out;
}

OutputSelection selection_of(const ChoiceMap& z) {
  OutputSelection sel;
  for (const auto& [address, value] : z.entries()) sel.add(address);
  return sel;
}

}  // namespace propprog
