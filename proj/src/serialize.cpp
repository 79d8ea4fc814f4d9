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

#include "propprog/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "propprog/errors.hpp"

namespace propprog {

namespace {

using nlohmann::json;

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void append_value(std::string& out, const Value& v) {
  switch (v.tag()) {
    case ValueTag::kBoolean:
      out += "{\"t\":\"b\",\"v\":";
      out += v.as_boolean() ? "true" : "false";
      out += '}';
      break;
    case ValueTag::kInteger:
      out += "{\"t\":\"i\",\"v\":" + std::to_string(v.as_integer()) + "}";
      break;
    case ValueTag::kReal:
      out += "{\"t\":\"r\",\"v\":" + format_real(v.as_real()) + "}";
      break;
    case ValueTag::kRealVector: {
      out += "{\"t\":\"v\",\"v\":[";
      const auto& xs = v.as_real_vector();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ',';
        out += format_real(xs[i]);
      }
      out += "]}";
      break;
    }
  }
}

Value value_from_json(const json& j) {
  if (!j.is_object() || !j.contains("t") || !j.contains("v")) {
    throw IoError("malformed value object in JSON");
  }
  const std::string tag = j.at("t").get<std::string>();
  const json& v = j.at("v");
  if (tag == "b") return Value(v.get<bool>());
  if (tag == "i") return Value(v.get<std::int64_t>());
  if (tag == "r") return Value(v.get<double>());
  if (tag == "v") return Value(v.get<std::vector<double>>());
  throw IoError("unknown value tag in JSON: " + tag);
}

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("invalid JSON");
  return j;
}

}  // namespace

std::string format_real(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot serialize non-finite real");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string to_json(const Trace& trace) {
  std::string out = "{\"choices\":[";
  bool first = true;
  for (const auto& r : trace.records()) {
    if (!first) out += ',';
    first = false;
    out += "{\"addr\":";
    append_escaped(out, r.address);
    out += ",\"value\":";
    append_value(out, r.value);
    out += ",\"lp\":" + format_real(r.log_prob) + "}";
  }
  out += "],\"total_lp\":" + format_real(trace.total_log_prob()) + "}";
  return out;
}

Trace trace_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || !j.contains("choices")) throw IoError("malformed trace JSON");
  std::vector<ChoiceRecord> records;
  int position = 0;
  for (const auto& c : j.at("choices")) {
    ChoiceRecord r;
    r.address = c.at("addr").get<std::string>();
    r.value = value_from_json(c.at("value"));
    r.log_prob = c.at("lp").get<double>();
    r.position = position++;
    records.push_back(std::move(r));
  }
  return Trace(std::move(records));
}

std::string to_json(const ChoiceMap& map) {
  std::string out = "{\"choices\":[";
  bool first = true;
  for (const auto& [address, value] : map.entries()) {
    if (!first) out += ',';
    first = false;
    out += "{\"addr\":";
    append_escaped(out, address);
    out += ",\"value\":";
    append_value(out, value);
    out += '}';
  }
  out += "]}";
  return out;
}

ChoiceMap choice_map_from_json(const std::string& text) {
  json j = parse(text);
  if (!j.is_object() || !j.contains("choices")) throw IoError("malformed choice map JSON");
  ChoiceMap out;
  for (const auto& c : j.at("choices")) {
    out.set(c.at("addr").get<std::string>(), value_from_json(c.at("value")));
  }
  return out;
}

}  // namespace propprog
