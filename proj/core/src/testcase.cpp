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

#include "replayfuzz/testcase.hpp"

#include <algorithm>
#include <array>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

std::vector<TestCase> generate_testcases(const Corpus& corpus, const GeneratorConfig& config) {
  const std::vector<Payload> overflow = string_overflow_schedule(config);
  const std::vector<Payload> format = format_string_payloads(config);
  const std::vector<Payload> integer = integer_boundary_payloads();

  std::vector<TestCase> cases;
  for (const FlowCorpus& fc : corpus.flows) {
    std::vector<Message> prefix;
    const bool banner = !fc.messages.empty() && !fc.messages.front().is_client();
    for (std::size_t mi = 0; mi < fc.messages.size(); ++mi) {
      const Message& message = fc.messages[mi];
      if (!message.is_client()) continue;  // server data is never mutated
      for (const FieldSpan& field : fc.fields[mi]) {
        if (field.field_index == 0 && !config.mutate_verbs) continue;
        const auto classes = field.field_type == FieldType::kInteger
                                 ? std::array{&integer, &overflow}
                                 : std::array{&overflow, &format};
        for (const std::vector<Payload>* group : classes) {
          for (const Payload& payload : *group) {
            cases.push_back(TestCase{.test_id = cases.size(),
                                     .flow_key = fc.flow.key,
                                     .message_index = message.message_index,
                                     .field = field,
                                     .payload = payload,
                                     .message = message,
                                     .prefix_messages = prefix,
                                     .server_speaks_first = banner});
          }
        }
      }
      prefix.push_back(message);
    }
  }
  if (cases.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no client message fields to mutate");
  }
  return cases;
}

Bytes render_mutated_message(const TestCase& tc, const Message& original) {
  const FieldSpan& f = tc.field;
  const Bytes& m = original.bytes;
  if (f.start >= f.end || f.end > m.size() ||
      !std::equal(f.original_bytes.begin(), f.original_bytes.end(),
                  m.begin() + static_cast<std::ptrdiff_t>(f.start),
                  m.begin() + static_cast<std::ptrdiff_t>(f.end))) {
    throw Error(ErrorCode::kSpanMismatch, "test " + std::to_string(tc.test_id) +
                                              ": field bytes differ from the message");
  }
  Bytes out;
  out.reserve(m.size() - (f.end - f.start) + tc.payload.size());
  out.insert(out.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(f.start));
  out.insert(out.end(), tc.payload.bytes().begin(), tc.payload.bytes().end());
  out.insert(out.end(), m.begin() + static_cast<std::ptrdiff_t>(f.end), m.end());
  return out;
}

Bytes render_mutated_message(const TestCase& tc) { return render_mutated_message(tc, tc.message); }

nlohmann::json manifest_entry_json(const TestCase& tc) {
  nlohmann::json payload = {{"class", to_string(tc.payload.payload_class())},
                            {"label", tc.payload.label()},
                            {"length", tc.payload.size()}};
  if (tc.payload.size() <= kManifestInlinePayloadLimit) {
    payload["bytes"] = escape_bytes(tc.payload.bytes());
  }
  return {{"test_id", tc.test_id},
          {"flow", flow_key_json(tc.flow_key)},
          {"message_index", tc.message_index},
          {"field", field_json(tc.field)},
          {"payload", std::move(payload)},
          {"message", escape_bytes(tc.message.bytes)}};
}

std::string render_manifest(const std::vector<TestCase>& cases) {
  std::string out;
  for (const TestCase& tc : cases) {
    out += manifest_entry_json(tc).dump();
    out += '\n';
  }
  return out;
}

Bytes ManifestEntry::payload_bytes() const { return payload_bytes_from_label(payload_class, label); }

Bytes ManifestEntry::mutated_message() const {
  const Bytes payload = payload_bytes();
  if (end > message.size() || start >= end) {
    throw Error(ErrorCode::kSpanMismatch, "test " + std::to_string(test_id) + ": span outside message");
  }
  Bytes out(message.begin(), message.begin() + static_cast<std::ptrdiff_t>(start));
  out.insert(out.end(), payload.begin(), payload.end());
  out.insert(out.end(), message.begin() + static_cast<std::ptrdiff_t>(end), message.end());
  return out;
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestEntry e;
      e.test_id = j.at("test_id").get<std::size_t>();
      e.flow = j.at("flow");
      e.message_index = j.at("message_index").get<std::size_t>();
      const auto& f = j.at("field");
      e.field_index = f.at("index").get<std::size_t>();
      e.start = f.at("start").get<std::size_t>();
      e.end = f.at("end").get<std::size_t>();
      e.field_type = f.at("type").get<std::string>() == "integer" ? FieldType::kInteger : FieldType::kString;
      e.original = unescape_bytes(f.at("original").get<std::string>());
      const auto& p = j.at("payload");
      e.payload_class = payload_class_from_string(p.at("class").get<std::string>());
      e.label = p.at("label").get<std::string>();
      e.payload_length = p.at("length").get<std::size_t>();
      e.message = unescape_bytes(j.at("message").get<std::string>());
      entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::kManifestMismatch,
                  "manifest line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const Error& ex) {
      throw Error(ErrorCode::kManifestMismatch,
                  "manifest line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return entries;
}

}  // namespace replayfuzz
