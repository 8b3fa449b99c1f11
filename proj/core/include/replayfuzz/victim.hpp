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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace replayfuzz {

// Seeded faults of the FTP-subset victim. Each checks the space-separated
// arguments of a command line (never the verb), in the order below.
struct FaultConfig {
  bool fault_overflow = false;  // abort when an argument has >= overflow_threshold bytes
  std::size_t overflow_threshold = 256;
  bool fault_format = false;    // spin forever when an argument contains "%x" or "%n"
  bool fault_integer = false;   // abort when a digits-only argument is >= 2^31

  void validate() const;  // Throws Error{kInvalidConfig}
};

inline constexpr std::string_view kHarnessBanner = "220 harness ready\r\n";
// Exit status of the abort path (what a shell reports for SIGABRT).
inline constexpr int kHarnessAbortExit = 134;

enum class HarnessAction { kReply, kAbort, kHang };

struct HarnessResponse {
  HarnessAction action = HarnessAction::kReply;
  std::string reply;
  bool close_after = false;  // QUIT
  std::string_view fault;    // "overflow", "format" or "integer" when triggered
};

// Pure decision for one command line (terminator optional).
HarnessResponse respond_to_line(std::string_view line, const FaultConfig& faults);

struct HarnessOptions {
  std::uint16_t port = 2121;
  std::string bind_address = "0.0.0.0";
  std::filesystem::path pid_file;
  const std::atomic<bool>* stop = nullptr;
  std::function<void(std::uint16_t)> on_listening;
};

// Serves one connection at a time until *stop. Fault triggers terminate the
// process (abort) or never return (hang).
void serve_ftp_subset(const HarnessOptions& options, const FaultConfig& faults);

}  // namespace replayfuzz
