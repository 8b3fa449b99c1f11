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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "replayfuzz/monitor.hpp"
#include "replayfuzz/status_file.hpp"
#include "replayfuzz/testcase.hpp"

namespace replayfuzz {

struct TargetConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 21;
  std::string monitor_host = "127.0.0.1";
  std::uint16_t monitor_port = kDefaultMonitorPort;
  int response_timeout_ms = 2000;
  int hang_timeout_ms = 10000;
  int settle_delay_ms = 200;
  bool restart_every_case = false;

  void validate() const;  // Throws Error{kInvalidConfig}
  std::string endpoint() const { return host + ":" + std::to_string(port); }
  friend bool operator==(const TargetConfig&, const TargetConfig&) = default;
};

enum class ConnectProbe { kOk, kRefused, kTimeout };

struct Evidence {
  bool reply_received = false;
  ConnectProbe fresh_connect = ConnectProbe::kOk;
  MonitorStatus monitor = MonitorStatus::kUnknown;
  bool hang_window_elapsed = false;  // waited the full hang timeout without a reply
};

// CRASH when the monitor saw the target down or a fresh connection was
// refused; HANG when it is running but silent for the whole hang window;
// OK on a reply plus a successful fresh connection; ERROR otherwise.
Verdict classify_verdict(const Evidence& evidence);

// One test case against the target: replay prefix, send the mutation,
// observe, probe, query the monitor. REFUSED when the very first connect is
// refused (the mutation was never sent).
InjectionOutcome execute_testcase(const TestCase& tc, const TargetConfig& target,
                                  MonitorClient& monitor);

struct CampaignOptions {
  std::filesystem::path status_path;
  bool resume = false;
  std::optional<std::size_t> max_cases;  // stop after this many new outcomes
  StatusHeader header;                   // testcase_count is filled in
  std::function<void(const InjectionOutcome&)> on_outcome;
  std::function<void(std::chrono::milliseconds)> sleep;  // injectable for tests
};

// Executes the cases strictly in order, appending each outcome to the
// status file. Resumes after the last recorded test_id when asked.
// Throws Error{kMonitorUnreachable | kTargetNeverUp | kManifestMismatch}.
std::vector<InjectionOutcome> run_campaign(const std::vector<TestCase>& cases,
                                           const TargetConfig& target,
                                           const CampaignOptions& options);

}  // namespace replayfuzz
