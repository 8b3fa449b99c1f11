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

#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "replayfuzz/bytes.hpp"

namespace replayfuzz {

enum class PayloadClass { kStringOverflow, kFormatString, kIntegerBoundary };

std::string_view to_string(PayloadClass cls);
PayloadClass payload_class_from_string(std::string_view name);

// Payload bytes are shared between every test case that uses them, so a
// campaign holds each 64K string once no matter how many fields it targets.
class Payload {
 public:
  Payload(PayloadClass cls, std::string label, Bytes bytes)
      : class_(cls), label_(std::move(label)),
        bytes_(std::make_shared<const Bytes>(std::move(bytes))) {}

  PayloadClass payload_class() const { return class_; }
  const std::string& label() const { return label_; }
  const Bytes& bytes() const { return *bytes_; }
  std::size_t size() const { return bytes_->size(); }

 private:
  PayloadClass class_;
  std::string label_;
  std::shared_ptr<const Bytes> bytes_;
};

struct GeneratorConfig {
  std::vector<std::size_t> string_lengths{127, 128, 255, 256, 32767, 32768, 32769, 65535, 65536};
  bool enable_percent_n = true;
  bool mutate_verbs = true;

  // Stable digest of the schedule-affecting settings.
  std::string hash() const;
  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

// Longest string_overflow payload a schedule may request.
inline constexpr std::size_t kMaxStringLength = std::size_t{16} << 20;

// 'A' repeated to each scheduled length. Throws Error{kInvalidConfig} for
// zero, duplicate or oversized lengths.
std::vector<Payload> string_overflow_schedule(const GeneratorConfig& config = {});

// "%x"x8, "%s"x8, "%n"x4 (unless disabled), "NotLikely%x%x.txt".
std::vector<Payload> format_string_payloads(const GeneratorConfig& config = {});

// Decimal values either side of the 16-, 32-bit sign flips and wraps.
std::vector<Payload> integer_boundary_payloads();

// Rebuilds payload bytes from a manifest label ("A*65535", "%x*8", literal).
Bytes payload_bytes_from_label(PayloadClass cls, std::string_view label);

}  // namespace replayfuzz
