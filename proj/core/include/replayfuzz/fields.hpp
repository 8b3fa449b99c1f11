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
#include <string_view>
#include <vector>

#include "replayfuzz/bytes.hpp"
#include "replayfuzz/flow.hpp"

namespace replayfuzz {

enum class FieldType { kString, kInteger };

std::string_view to_string(FieldType type);

struct FieldSpan {
  FlowKey flow_key;
  std::size_t message_index = 0;
  std::size_t field_index = 0;
  std::size_t start = 0;  // byte offset within the message
  std::size_t end = 0;    // exclusive
  FieldType field_type = FieldType::kString;
  Bytes original_bytes;

  friend bool operator==(const FieldSpan&, const FieldSpan&) = default;
};

// Integer iff an optional sign followed by one or more ASCII digits.
FieldType classify_token(ByteView token);

// Maximal runs of non-space bytes in the message body (terminator excluded).
std::vector<FieldSpan> tokenize_message(const Message& message);

}  // namespace replayfuzz
