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

#include <gtest/gtest.h>

#include <regex>

#include "replayfuzz/corpus.hpp"
#include "replayfuzz/fields.hpp"
#include "support/fixtures.hpp"

namespace replayfuzz {
namespace {

Message client_message(std::string_view text) {
  Message m;
  m.bytes = to_bytes(text);
  return m;
}

TEST(FieldsTest, SpecExamples) {
  auto spans = tokenize_message(client_message("USER anonymous\r\n"));
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].start, 0u);
  EXPECT_EQ(spans[0].end, 4u);
  EXPECT_EQ(spans[1].start, 5u);
  EXPECT_EQ(spans[1].end, 14u);
  EXPECT_EQ(to_string(spans[1].original_bytes), "anonymous");
  EXPECT_EQ(spans[1].field_type, FieldType::kString);

  spans = tokenize_message(client_message("REST 1024\r\n"));
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[1].field_type, FieldType::kInteger);
  EXPECT_EQ(spans[1].field_index, 1u);

  EXPECT_EQ(classify_token(to_bytes("-42")), FieldType::kInteger);
  EXPECT_EQ(classify_token(to_bytes("+7")), FieldType::kInteger);
  EXPECT_EQ(classify_token(to_bytes("0")), FieldType::kInteger);
  EXPECT_EQ(classify_token(to_bytes("NotLikely.txt")), FieldType::kString);
  EXPECT_EQ(classify_token(to_bytes("12a")), FieldType::kString);
  EXPECT_EQ(classify_token(to_bytes("10,0,0,1,4,1")), FieldType::kString);
  EXPECT_EQ(classify_token(to_bytes("-")), FieldType::kString);
  EXPECT_EQ(classify_token(to_bytes("1-")), FieldType::kString);
}

TEST(FieldsTest, RunsOfSpacesAndEmptyBodies) {
  auto spans = tokenize_message(client_message("  A   BB \r\n"));
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].start, 2u);
  EXPECT_EQ(spans[1].start, 6u);
  EXPECT_EQ(spans[1].end, 8u);
  EXPECT_TRUE(tokenize_message(client_message("\r\n")).empty());
  EXPECT_TRUE(tokenize_message(client_message("   \n")).empty());
  EXPECT_EQ(tokenize_message(client_message("NOOP")).size(), 1u);
}

// Every token over a small alphabet up to length 4, against the regex rule.
TEST(FieldsTest, ExhaustiveShortTokens) {
  const std::string alphabet = "+-09a.%";
  const std::regex rule("[+-]?[0-9]+");
  std::vector<std::string> tokens = {""};
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::string> next;
    for (const std::string& t : tokens) {
      for (char c : alphabet) next.push_back(t + c);
    }
    for (const std::string& t : next) {
      const FieldType want = std::regex_match(t, rule) ? FieldType::kInteger : FieldType::kString;
      ASSERT_EQ(classify_token(to_bytes(t)), want) << t;
    }
    tokens = std::move(next);
  }
}

TEST(FieldsTest, CoverageRebuildsMessage) {
  for (std::string_view text : {"USER anonymous\r\n", "  PORT 10,0,0,1,4,1\n", "A B  C", "X\r\n"}) {
    const Message m = client_message(text);
    const auto spans = tokenize_message(m);
    std::string rebuilt(m.bytes.size(), ' ');
    for (const FieldSpan& s : spans) {
      for (std::size_t i = s.start; i < s.end; ++i) rebuilt[i] = static_cast<char>(s.original_bytes[i - s.start]);
    }
    const std::size_t body = m.bytes.size() - m.terminator_length();
    for (std::size_t i = body; i < m.bytes.size(); ++i) rebuilt[i] = static_cast<char>(m.bytes[i]);
    EXPECT_EQ(rebuilt, std::string(text));
    for (std::size_t i = 1; i < spans.size(); ++i) EXPECT_LT(spans[i - 1].end, spans[i].start);
  }
}

TEST(FieldsTest, FixtureMessagesMatchOracle) {
  for (const char* name : {"ftp_basic", "ftp_full"}) {
    SCOPED_TRACE(name);
    const Corpus corpus = load_corpus(testing::read_fixture(std::string(name) + ".pcap"));
    ASSERT_EQ(corpus.flows.size(), 1u);
    const FlowCorpus& fc = corpus.flows[0];
    const auto& want = testing::expected()[name]["fields"];
    std::size_t checked = 0;
    for (const auto& entry : want) {
      const std::size_t mi = entry["message_index"];
      ASSERT_LT(mi, fc.fields.size());
      const auto& spans = fc.fields[mi];
      ASSERT_EQ(spans.size(), entry["fields"].size()) << mi;
      for (std::size_t i = 0; i < spans.size(); ++i) {
        const auto& f = entry["fields"][i];
        EXPECT_EQ(spans[i].start, f["start"].get<std::size_t>());
        EXPECT_EQ(spans[i].end, f["end"].get<std::size_t>());
        EXPECT_EQ(to_string(spans[i].field_type), f["type"].get<std::string>());
        EXPECT_EQ(to_string(spans[i].original_bytes), f["original"].get<std::string>());
        EXPECT_EQ(spans[i].message_index, mi);
        ++checked;
      }
    }
    EXPECT_GT(checked, 0u);
    // Server messages carry no fields.
    for (std::size_t i = 0; i < fc.messages.size(); ++i) {
      if (!fc.messages[i].is_client()) {
        EXPECT_TRUE(fc.fields[i].empty());
      }
    }
  }
}

}  // namespace
}  // namespace replayfuzz
