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

#include "replayfuzz/config.hpp"

#include <fstream>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

nlohmann::json to_json(const CampaignConfig& c) {
  const TargetConfig& t = c.target;
  return {{"pcap", c.pcap_path},
          {"output_dir", c.output_dir},
          {"resume", c.resume},
          {"target",
           {{"host", t.host},
            {"port", t.port},
            {"monitor_host", t.monitor_host},
            {"monitor_port", t.monitor_port},
            {"response_timeout_ms", t.response_timeout_ms},
            {"hang_timeout_ms", t.hang_timeout_ms},
            {"settle_delay_ms", t.settle_delay_ms},
            {"restart_every_case", t.restart_every_case}}},
          {"schedules",
           {{"string_lengths", c.schedules.string_lengths},
            {"enable_percent_n", c.schedules.enable_percent_n},
            {"mutate_verbs", c.schedules.mutate_verbs}}}};
}

CampaignConfig campaign_config_from_json(const nlohmann::json& j) {
  CampaignConfig c;
  try {
    if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
    c.pcap_path = j.value("pcap", c.pcap_path);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.resume = j.value("resume", c.resume);
    if (j.contains("target")) {
      const auto& t = j.at("target");
      TargetConfig& out = c.target;
      out.host = t.value("host", out.host);
      out.port = t.value("port", out.port);
      out.monitor_host = t.value("monitor_host", out.monitor_host);
      out.monitor_port = t.value("monitor_port", out.monitor_port);
      out.response_timeout_ms = t.value("response_timeout_ms", out.response_timeout_ms);
      out.hang_timeout_ms = t.value("hang_timeout_ms", out.hang_timeout_ms);
      out.settle_delay_ms = t.value("settle_delay_ms", out.settle_delay_ms);
      out.restart_every_case = t.value("restart_every_case", out.restart_every_case);
    }
    if (j.contains("schedules")) {
      const auto& s = j.at("schedules");
      c.schedules.string_lengths = s.value("string_lengths", c.schedules.string_lengths);
      c.schedules.enable_percent_n = s.value("enable_percent_n", c.schedules.enable_percent_n);
      c.schedules.mutate_verbs = s.value("mutate_verbs", c.schedules.mutate_verbs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  return c;
}

CampaignConfig load_campaign_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidConfig, "cannot read config " + path.string());
  try {
    return campaign_config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
  }
}

}  // namespace replayfuzz
