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

#include "replayfuzz/fields.hpp"

namespace replayfuzz {

std::string_view to_string(FieldType type) {
  return type == FieldType::kInteger ? "integer" : "string";
}

FieldType classify_token(ByteView token) {
  std::size_t i = 0;
  if (!token.empty() && (token[0] == '+' || token[0] == '-')) i = 1;
  if (i == token.size()) return FieldType::kString;
  for (; i < token.size(); ++i) {
    if (token[i] < '0' || token[i] > '9') return FieldType::kString;
  }
  return FieldType::kInteger;
}

std::vector<FieldSpan> tokenize_message(const Message& message) {
  std::vector<FieldSpan> spans;
  const std::size_t body = message.bytes.size() - message.terminator_length();
  std::size_t i = 0;
  while (i < body) {
    if (message.bytes[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < body && message.bytes[j] != ' ') ++j;
    FieldSpan span;
    span.flow_key = message.flow_key;
    span.message_index = message.message_index;
    span.field_index = spans.size();
    span.start = i;
    span.end = j;
    span.original_bytes.assign(message.bytes.begin() + static_cast<std::ptrdiff_t>(i),
                               message.bytes.begin() + static_cast<std::ptrdiff_t>(j));
    span.field_type = classify_token(span.original_bytes);
    spans.push_back(std::move(span));
    i = j;
  }
  return spans;
}

}  // namespace replayfuzz
