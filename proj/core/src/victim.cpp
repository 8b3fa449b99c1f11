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

#include "replayfuzz/victim.hpp"

#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <vector>

#include "replayfuzz/error.hpp"
#include "replayfuzz/net.hpp"

namespace replayfuzz {

void FaultConfig::validate() const {
  if (overflow_threshold < 1) throw Error(ErrorCode::kInvalidConfig, "overflow threshold must be >= 1");
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t j = line.find(' ', i);
    if (j == std::string_view::npos) j = line.size();
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool digits_at_least_2_31(std::string_view arg) {
  if (arg.empty() || !std::all_of(arg.begin(), arg.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  arg.remove_prefix(std::min(arg.find_first_not_of('0'), arg.size()));
  if (arg.size() != 10) return arg.size() > 10;
  return arg >= "2147483648";
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

HarnessResponse reply(std::string text, bool close_after = false) {
  HarnessResponse r;
  r.reply = std::move(text);
  r.close_after = close_after;
  return r;
}

}  // namespace

HarnessResponse respond_to_line(std::string_view line, const FaultConfig& faults) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  const auto tokens = split_spaces(line);
  const std::span<const std::string_view> args =
      tokens.empty() ? std::span<const std::string_view>{} : std::span(tokens).subspan(1);

  if (faults.fault_overflow &&
      std::any_of(args.begin(), args.end(),
                  [&](std::string_view a) { return a.size() >= faults.overflow_threshold; })) {
    return {HarnessAction::kAbort, {}, false, "overflow"};
  }
  if (faults.fault_format &&
      std::any_of(args.begin(), args.end(), [](std::string_view a) {
        return a.find("%x") != std::string_view::npos || a.find("%n") != std::string_view::npos;
      })) {
    return {HarnessAction::kHang, {}, false, "format"};
  }
  if (faults.fault_integer && std::any_of(args.begin(), args.end(), digits_at_least_2_31)) {
    return {HarnessAction::kAbort, {}, false, "integer"};
  }

  const std::string verb = tokens.empty() ? std::string() : upper(tokens.front());
  if (verb == "USER") return reply("331 ok\r\n", false);
  if (verb == "PASS") return reply("230 ok\r\n", false);
  if (verb == "CWD") return reply("250 ok\r\n", false);
  if (verb == "RETR") return reply("550 not found\r\n", false);
  if (verb == "REST") return reply("350 ok\r\n", false);
  if (verb == "QUIT") return reply("221 bye\r\n", true);
  return reply("502 no\r\n", false);
}

namespace {

[[noreturn]] void abort_harness(std::string_view why) {
  std::fprintf(stderr, "victim: %.*s fault triggered, aborting\n", static_cast<int>(why.size()), why.data());
  std::fflush(stderr);
  std::_Exit(kHarnessAbortExit);
}

[[noreturn]] void spin_forever() {
  std::fprintf(stderr, "victim: format fault triggered, spinning\n");
  std::fflush(stderr);
  volatile std::uint64_t spins = 0;
  for (;;) spins = spins + 1;
}

bool stopping(const std::atomic<bool>* stop) { return stop && stop->load(); }

// Returns after the client disconnects or sends QUIT.
void serve_session(const net::Socket& conn, const FaultConfig& faults, const std::atomic<bool>* stop) {
  if (!net::send_all(conn, kHarnessBanner)) return;
  net::LineReader reader(conn);
  Bytes line;
  while (!stopping(stop)) {
    const auto st = reader.read_line(net::Clock::now() + std::chrono::milliseconds(200), line);
    if (st == net::ReadStatus::kTimeout) continue;
    if (st != net::ReadStatus::kLine && st != net::ReadStatus::kTooLong) return;
    const HarnessResponse r = respond_to_line(as_text(line), faults);
    switch (r.action) {
      case HarnessAction::kAbort:
        abort_harness(r.fault);
      case HarnessAction::kHang:
        spin_forever();
      case HarnessAction::kReply:
        break;
    }
    if (!net::send_all(conn, r.reply) || r.close_after) return;
  }
}

}  // namespace

void serve_ftp_subset(const HarnessOptions& options, const FaultConfig& faults) {
  faults.validate();
  net::Socket listener = net::listen_tcp(options.port, options.bind_address);
  const std::uint16_t port = net::local_port(listener);
  if (!options.pid_file.empty()) {
    const auto tmp = options.pid_file.string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << ::getpid() << "\n";
      if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp);
    }
    std::rename(tmp.c_str(), options.pid_file.c_str());
  }
  if (options.on_listening) options.on_listening(port);

  while (!stopping(options.stop)) {
    pollfd pfd{listener.fd(), POLLIN, 0};
    if (::poll(&pfd, 1, 200) <= 0) continue;
    net::Socket conn(::accept4(listener.fd(), nullptr, nullptr, SOCK_CLOEXEC));
    if (conn.valid()) serve_session(conn, faults, options.stop);
  }
}

}  // namespace replayfuzz
