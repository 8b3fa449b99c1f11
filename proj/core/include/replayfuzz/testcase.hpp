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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "replayfuzz/corpus.hpp"
#include "replayfuzz/payloads.hpp"

namespace replayfuzz {

struct TestCase {
  std::size_t test_id = 0;
  FlowKey flow_key;
  std::size_t message_index = 0;
  FieldSpan field;
  Payload payload;
  Message message;                       // the unmutated target message
  std::vector<Message> prefix_messages;  // earlier client messages, unmutated
  bool server_speaks_first = false;      // the captured flow opened with a server message
};

// Canonical order: flows, client messages, fields left to right, payload
// classes, payloads. String fields get string_overflow then format_string;
// integer fields get integer_boundary then string_overflow.
// Throws Error{kEmptyCorpus} when there is nothing to mutate.
std::vector<TestCase> generate_testcases(const Corpus& corpus, const GeneratorConfig& config = {});

// original[0, start) + payload + original[end, size).
// Throws Error{kSpanMismatch} if the field no longer matches the message.
Bytes render_mutated_message(const TestCase& tc, const Message& original);
Bytes render_mutated_message(const TestCase& tc);

// Manifest line for one test case (JSON Lines, one object per case).
inline constexpr std::size_t kManifestInlinePayloadLimit = 64;
nlohmann::json manifest_entry_json(const TestCase& tc);
std::string render_manifest(const std::vector<TestCase>& cases);

// What the report needs back out of a manifest line.
struct ManifestEntry {
  std::size_t test_id = 0;
  nlohmann::json flow;
  std::size_t message_index = 0;
  std::size_t field_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  FieldType field_type = FieldType::kString;
  Bytes original;
  PayloadClass payload_class = PayloadClass::kStringOverflow;
  std::string label;
  std::size_t payload_length = 0;
  Bytes message;

  Bytes payload_bytes() const;
  Bytes mutated_message() const;
};

// Throws Error{kManifestMismatch} on unparsable lines.
std::vector<ManifestEntry> parse_manifest(std::string_view text);

}  // namespace replayfuzz
