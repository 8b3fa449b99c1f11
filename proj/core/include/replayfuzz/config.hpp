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

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "replayfuzz/injector.hpp"
#include "replayfuzz/payloads.hpp"

namespace replayfuzz {

struct CampaignConfig {
  std::string pcap_path;
  TargetConfig target;
  GeneratorConfig schedules;
  std::string output_dir = ".";
  bool resume = false;

  friend bool operator==(const CampaignConfig&, const CampaignConfig&) = default;
};

nlohmann::json to_json(const CampaignConfig& config);
// Missing keys keep their defaults. Throws Error{kInvalidConfig}.
CampaignConfig campaign_config_from_json(const nlohmann::json& j);
CampaignConfig load_campaign_config(const std::filesystem::path& path);

}  // namespace replayfuzz
