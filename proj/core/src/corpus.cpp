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

#include "replayfuzz/corpus.hpp"

#include "replayfuzz/pcap.hpp"

namespace replayfuzz {

std::vector<const Message*> FlowCorpus::client_messages() const {
  std::vector<const Message*> out;
  for (const Message& m : messages) {
    if (m.is_client()) out.push_back(&m);
  }
  return out;
}

std::size_t Corpus::client_message_count() const {
  std::size_t n = 0;
  for (const FlowCorpus& f : flows) n += f.client_messages().size();
  return n;
}

Corpus build_corpus(std::vector<TcpFlow> flows) {
  Corpus corpus;
  corpus.flows.reserve(flows.size());
  for (TcpFlow& flow : flows) {
    FlowCorpus fc;
    fc.messages = extract_messages(flow);
    fc.fields.reserve(fc.messages.size());
    for (const Message& m : fc.messages) {
      fc.fields.push_back(m.is_client() ? tokenize_message(m) : std::vector<FieldSpan>{});
    }
    fc.flow = std::move(flow);
    corpus.flows.push_back(std::move(fc));
  }
  return corpus;
}

Corpus load_corpus(ByteView capture_bytes) {
  return build_corpus(assemble_flows(decode_all(parse_capture(capture_bytes))));
}

nlohmann::json flow_key_json(const FlowKey& key) {
  return {{"sip", key.sip.to_string()}, {"sp", key.sp}, {"dip", key.dip.to_string()},
          {"dp", key.dp}, {"protocol", "tcp"}};
}

nlohmann::json field_json(const FieldSpan& field) {
  return {{"index", field.field_index},
          {"start", field.start},
          {"end", field.end},
          {"type", to_string(field.field_type)},
          {"original", escape_bytes(field.original_bytes)}};
}

nlohmann::json corpus_to_json(const Corpus& corpus) {
  nlohmann::json flows = nlohmann::json::array();
  for (const FlowCorpus& fc : corpus.flows) {
    nlohmann::json messages = nlohmann::json::array();
    for (std::size_t i = 0; i < fc.messages.size(); ++i) {
      const Message& m = fc.messages[i];
      nlohmann::json jm = {{"message_index", m.message_index},
                           {"direction", to_string(m.direction)},
                           {"offset", m.stream_offset},
                           {"length", m.bytes.size()},
                           {"preview", preview_bytes(m.bytes)}};
      if (m.is_client()) {
        nlohmann::json fields = nlohmann::json::array();
        for (const FieldSpan& f : fc.fields[i]) fields.push_back(field_json(f));
        jm["fields"] = std::move(fields);
      }
      messages.push_back(std::move(jm));
    }
    flows.push_back({{"key", flow_key_json(fc.flow.key)},
                     {"handshake_seen", fc.flow.handshake_seen},
                     {"sequence_gap", fc.flow.sequence_gap()},
                     {"overlap_seen", fc.flow.overlap_seen},
                     {"client_bytes", fc.flow.client_stream.size()},
                     {"server_bytes", fc.flow.server_stream.size()},
                     {"messages", std::move(messages)}});
  }
  return {{"flows", std::move(flows)}};
}

}  // namespace replayfuzz
