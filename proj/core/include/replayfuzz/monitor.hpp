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

#include <sys/types.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "replayfuzz/net.hpp"

namespace replayfuzz {

enum class MonitorStatus { kRunning, kDown, kUnknown };

std::string_view to_string(MonitorStatus status);
MonitorStatus monitor_status_from_string(std::string_view name);

inline constexpr std::uint16_t kDefaultMonitorPort = 9911;
inline constexpr std::chrono::milliseconds kKillGrace{1000};

struct ChildState {
  bool running = false;
  std::optional<int> exit_code;    // set after a normal exit
  std::optional<int> term_signal;  // set after death by signal
};

// Launches and supervises one target process. Liveness is read from the
// kernel (waitpid) on every query.
class Supervisor {
 public:
  explicit Supervisor(std::vector<std::string> command);
  ~Supervisor();

  Supervisor(const Supervisor&) = delete;
  Supervisor& operator=(const Supervisor&) = delete;

  // Throws Error{kSpawnFailure} if the command cannot be executed.
  void launch();
  ChildState poll();
  // SIGTERM, then SIGKILL once `grace` has passed.
  void kill(std::chrono::milliseconds grace = kKillGrace);
  void restart();

  int restarts() const { return restarts_; }
  pid_t pid() const { return pid_; }
  const std::vector<std::string>& command() const { return command_; }

 private:
  std::vector<std::string> command_;
  pid_t pid_ = -1;
  ChildState last_;
  int restarts_ = 0;
};

// The control protocol: LF-terminated ASCII verbs, one reply line each.
//   STATUS  -> "OK RUNNING" | "OK DOWN <exit>" | "OK DOWN signaled"
//   RESTART -> "OK RESTARTED <n>"
//   KILL    -> "OK KILLED"
//   other   -> "ERR unknown command"
class MonitorAgent {
 public:
  explicit MonitorAgent(Supervisor& supervisor) : supervisor_(supervisor) {}

  // Never throws; failures become "ERR ..." replies. No trailing LF.
  std::string handle_command(std::string_view line);

 private:
  Supervisor& supervisor_;
};

struct ControlOptions {
  std::uint16_t port = kDefaultMonitorPort;
  std::string bind_address = "0.0.0.0";
  const std::atomic<bool>* stop = nullptr;
  std::function<void(std::uint16_t)> on_listening;
};

inline constexpr std::size_t kMaxControlLine = 4096;

// Spawns the target, then serves one control connection at a time until
// *stop becomes true. Throws Error{kSpawnFailure | kBindFailure} at startup.
void serve_control(const ControlOptions& options, std::vector<std::string> target_command);

// Injector-side handle on a monitor agent.
class MonitorClient {
 public:
  // Throws Error{kMonitorUnreachable}.
  MonitorClient(std::string host, std::uint16_t port,
                std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

  // Sends one verb and returns the reply line without its LF. Reconnects
  // once on a dropped connection; throws Error{kMonitorUnreachable} after.
  std::string request(std::string_view verb);

  // UNKNOWN on a reply that is neither RUNNING nor DOWN. These throw
  // Error{kMonitorUnreachable} like request().
  MonitorStatus status();
  bool restart();
  bool kill();

 private:
  void connect();

  std::string host_;
  std::uint16_t port_;
  std::chrono::milliseconds timeout_;
  net::Socket socket_;
  std::unique_ptr<net::LineReader> reader_;
};

}  // namespace replayfuzz
