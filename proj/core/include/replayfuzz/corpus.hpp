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
#include <vector>

#include <nlohmann/json.hpp>

#include "replayfuzz/fields.hpp"
#include "replayfuzz/flow.hpp"

namespace replayfuzz {

// One flow's messages with the field spans of each client message.
struct FlowCorpus {
  TcpFlow flow;
  std::vector<Message> messages;
  std::vector<std::vector<FieldSpan>> fields;  // parallel to messages; empty for server

  std::vector<const Message*> client_messages() const;
};

struct Corpus {
  std::vector<FlowCorpus> flows;

  std::size_t client_message_count() const;
};

Corpus build_corpus(std::vector<TcpFlow> flows);

// Whole pipeline from a capture file image to a corpus.
Corpus load_corpus(ByteView capture_bytes);

nlohmann::json flow_key_json(const FlowKey& key);
nlohmann::json field_json(const FieldSpan& field);

// The `extract` document: one object per flow with key, flags, and messages
// (client messages carry their spans).
nlohmann::json corpus_to_json(const Corpus& corpus);

}  // namespace replayfuzz
