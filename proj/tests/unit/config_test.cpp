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

#include "replayfuzz/config.hpp"
#include "replayfuzz/error.hpp"
#include "support/fixtures.hpp"
#include "support/process.hpp"

namespace replayfuzz {
namespace {

TEST(ConfigTest, RoundTrip) {
  CampaignConfig c;
  c.pcap_path = "ftp.pcap";
  c.output_dir = "out";
  c.resume = true;
  c.target.host = "192.168.56.10";
  c.target.port = 2121;
  c.target.hang_timeout_ms = 1500;
  c.target.restart_every_case = true;
  c.schedules.string_lengths = {10, 20};
  c.schedules.enable_percent_n = false;
  EXPECT_EQ(campaign_config_from_json(to_json(c)), c);
  EXPECT_EQ(campaign_config_from_json(nlohmann::json::parse(to_json(c).dump())), c);
}

TEST(ConfigTest, MissingKeysKeepDefaults) {
  const auto c = campaign_config_from_json(nlohmann::json::parse(R"({"target": {"port": 2121}})"));
  EXPECT_EQ(c.target.port, 2121);
  EXPECT_EQ(c.target.host, "127.0.0.1");
  EXPECT_EQ(c.target.hang_timeout_ms, 10000);
  EXPECT_EQ(c.schedules, GeneratorConfig{});
}

TEST(ConfigTest, WrongTypesAreInvalidConfig) {
  for (const char* text : {R"([])", R"({"target": {"port": "ftp"}})", R"({"schedules": {"string_lengths": 5}})",
                           R"({"resume": "yes"})"}) {
    try {
      campaign_config_from_json(nlohmann::json::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig) << text;
    }
  }
}

TEST(ConfigTest, TargetValidation) {
  TargetConfig t;
  EXPECT_NO_THROW(t.validate());
  t.hang_timeout_ms = 0;
  EXPECT_THROW(t.validate(), Error);
  t = {};
  t.port = 0;
  EXPECT_THROW(t.validate(), Error);
  t = {};
  t.response_timeout_ms = -1;
  EXPECT_THROW(t.validate(), Error);
}

TEST(ConfigTest, LoadFromFile) {
  testing::TempDir dir;
  const auto path = dir.path() / "c.json";
  const std::string text = R"({"pcap": "x.pcap", "target": {"port": 2121}})";
  testing::write_bytes(path, to_bytes(text));
  EXPECT_EQ(load_campaign_config(path).pcap_path, "x.pcap");
  testing::write_bytes(path, to_bytes("{not json"));
  EXPECT_THROW(load_campaign_config(path), Error);
  EXPECT_THROW(load_campaign_config(dir.path() / "missing.json"), Error);
}

}  // namespace
}  // namespace replayfuzz
