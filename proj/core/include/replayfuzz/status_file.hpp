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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "replayfuzz/bytes.hpp"
#include "replayfuzz/monitor.hpp"

namespace replayfuzz {

enum class Verdict { kOk, kCrash, kHang, kRefused, kError };

std::string_view to_string(Verdict verdict);
Verdict verdict_from_string(std::string_view name);

struct InjectionOutcome {
  std::size_t test_id = 0;
  Verdict verdict = Verdict::kError;
  Bytes response_excerpt;  // first 256 bytes of the reply
  MonitorStatus monitor_status = MonitorStatus::kUnknown;
  std::int64_t elapsed_ms = 0;
  std::string detail;
  std::int64_t started_at_ms = 0;  // wall clock, ms since epoch
  std::int64_t ended_at_ms = 0;
};

inline constexpr std::size_t kResponseExcerptLimit = 256;

// Status file: JSON Lines. Line one is the campaign header, then one line
// per outcome, appended as each test case is classified.
struct StatusHeader {
  std::string campaign_id;
  std::string pcap;
  std::string target;
  std::string started_at;  // ISO-8601 UTC
  std::size_t testcase_count = 0;
  std::string manifest_hash;
  std::string schedule_hash;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json reassembly_notes = nlohmann::json::array();
};

struct StatusFile {
  StatusHeader header;
  std::vector<InjectionOutcome> outcomes;
  bool truncated_tail = false;  // last line was incomplete and ignored
};

nlohmann::json to_json(const StatusHeader& header);
StatusHeader status_header_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InjectionOutcome& outcome);
InjectionOutcome outcome_from_json(const nlohmann::json& j);

// Throws Error{kIo} when unreadable and Error{kManifestMismatch} when the
// header line is missing or malformed.
StatusFile read_status_file(const std::filesystem::path& path);
StatusFile parse_status(std::string_view text);

// The file with timestamps and elapsed times removed; equal for two runs
// that classified the same cases the same way.
std::string status_without_timestamps(const StatusFile& status);

}  // namespace replayfuzz
