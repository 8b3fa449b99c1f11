// Copyright 2026 The replayfuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "replayfuzz/payloads.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

namespace {

Payload repeated(PayloadClass cls, std::string_view unit, std::size_t count) {
  std::string text;
  text.reserve(unit.size() * count);
  for (std::size_t i = 0; i < count; ++i) text += unit;
  return Payload(cls, std::string(unit) + "*" + std::to_string(count), to_bytes(text));
}

}  // namespace

std::string_view to_string(PayloadClass cls) {
  switch (cls) {
    case PayloadClass::kStringOverflow: return "string_overflow";
    case PayloadClass::kFormatString: return "format_string";
    case PayloadClass::kIntegerBoundary: return "integer_boundary";
  }
  return "string_overflow";
}

PayloadClass payload_class_from_string(std::string_view name) {
  if (name == "string_overflow") return PayloadClass::kStringOverflow;
  if (name == "format_string") return PayloadClass::kFormatString;
  if (name == "integer_boundary") return PayloadClass::kIntegerBoundary;
  throw Error(ErrorCode::kInvalidConfig, "unknown payload class " + std::string(name));
}

std::string GeneratorConfig::hash() const {
  std::string canon = "lengths=";
  for (std::size_t n : string_lengths) canon += std::to_string(n) + ",";
  canon += ";percent_n=" + std::to_string(enable_percent_n);
  canon += ";verbs=" + std::to_string(mutate_verbs);
  return hex64(fnv1a64(canon));
}

std::vector<Payload> string_overflow_schedule(const GeneratorConfig& config) {
  std::set<std::size_t> seen;
  std::vector<Payload> out;
  for (std::size_t n : config.string_lengths) {
    if (n == 0) throw Error(ErrorCode::kInvalidConfig, "string length must be positive");
    if (n > kMaxStringLength) {
      throw Error(ErrorCode::kInvalidConfig, "string length " + std::to_string(n) + " exceeds 16 MiB");
    }
    if (!seen.insert(n).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate string length " + std::to_string(n));
    }
    out.push_back(repeated(PayloadClass::kStringOverflow, "A", n));
  }
  return out;
}

std::vector<Payload> format_string_payloads(const GeneratorConfig& config) {
  std::vector<Payload> out;
  out.push_back(repeated(PayloadClass::kFormatString, "%x", 8));
  out.push_back(repeated(PayloadClass::kFormatString, "%s", 8));
  if (config.enable_percent_n) out.push_back(repeated(PayloadClass::kFormatString, "%n", 4));
  out.emplace_back(PayloadClass::kFormatString, "NotLikely%x%x.txt", to_bytes("NotLikely%x%x.txt"));
  return out;
}

std::vector<Payload> integer_boundary_payloads() {
  static constexpr std::string_view kValues[] = {
      "0",     "-1",         "32767",      "32768",      "65535",      "65536",
      "2147483647", "2147483648", "4294967295", "4294967296", "-2147483648"};
  std::vector<Payload> out;
  for (std::string_view v : kValues) {
    out.emplace_back(PayloadClass::kIntegerBoundary, std::string(v), to_bytes(v));
  }
  return out;
}

Bytes payload_bytes_from_label(PayloadClass cls, std::string_view label) {
  if (cls != PayloadClass::kIntegerBoundary) {
    const auto star = label.rfind('*');
    if (star != std::string_view::npos && star > 0) {
      std::size_t count = 0;
      const auto digits = label.substr(star + 1);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), count);
      if (ec == std::errc() && p == digits.data() + digits.size() && count <= kMaxStringLength) {
        return repeated(cls, label.substr(0, star), count).bytes();
      }
    }
  }
  return to_bytes(label);
}

}  // namespace replayfuzz
