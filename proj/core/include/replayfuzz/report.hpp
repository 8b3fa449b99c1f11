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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "replayfuzz/injector.hpp"
#include "replayfuzz/status_file.hpp"
#include "replayfuzz/testcase.hpp"

namespace replayfuzz {

// Reproductions up to this payload size are inlined into the report.
inline constexpr std::size_t kInlineReproductionLimit = 1024;

struct Finding {
  ManifestEntry entry;
  Verdict verdict = Verdict::kCrash;
  MonitorStatus monitor_status = MonitorStatus::kUnknown;
  std::string detail;
  std::size_t reproduction_length = 0;
  std::string reproduction_hash;  // fnv1a64 of the mutated message
  std::optional<Bytes> reproduction;  // inlined when the payload is small
};

struct CampaignSummary {
  std::map<Verdict, std::size_t> totals;
  std::map<std::string, std::size_t> findings_per_field;
  std::optional<std::size_t> first_crash_test_id;
  std::int64_t duration_ms = 0;
  std::size_t executed = 0;
  std::size_t manifest_count = 0;
  nlohmann::json config;
};

struct Report {
  std::string pcap;
  std::string campaign_id;
  std::string manifest_hash;
  std::string schedule_hash;
  std::vector<Finding> findings;
  CampaignSummary summary;
  nlohmann::json reassembly_notes = nlohmann::json::array();
};

// Joins outcomes to manifest lines by test_id. Only CRASH and HANG become
// findings. Throws Error{kManifestMismatch} on an unknown test_id or when
// the status header's manifest hash does not match `manifest_text`.
Report build_report(std::string_view manifest_text, const StatusFile& status);

nlohmann::json report_to_json(const Report& report);
std::string report_to_text(const Report& report);

}  // namespace replayfuzz
