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
#include <string>

#include "replayfuzz/bytes.hpp"

namespace replayfuzz::net {

using Clock = std::chrono::steady_clock;

// Owning file descriptor for a socket.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() { close(); }

  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() noexcept;
  void close() noexcept;

 private:
  int fd_ = -1;
};

enum class ConnectResult { kOk, kRefused, kTimeout, kError };

struct ConnectAttempt {
  ConnectResult result = ConnectResult::kError;
  Socket socket;
  std::string detail;
};

ConnectAttempt connect_tcp(const std::string& host, std::uint16_t port,
                           std::chrono::milliseconds timeout);

// Throws Error{kBindFailure}. Port 0 picks an ephemeral port.
Socket listen_tcp(std::uint16_t port, const std::string& bind_address = "0.0.0.0",
                  int backlog = 16);
std::uint16_t local_port(const Socket& socket);

// Blocking; false if the peer went away.
bool send_all(const Socket& socket, ByteView bytes);
inline bool send_all(const Socket& socket, std::string_view text) {
  return send_all(socket, ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

enum class ReadStatus { kLine, kEof, kTimeout, kError, kTooLong };

// Buffered line reader over a borrowed socket.
class LineReader {
 public:
  explicit LineReader(const Socket& socket, std::size_t max_line = std::size_t{1} << 22)
      : socket_(socket), max_line_(max_line) {}

  // Reads until a full LF-terminated line is buffered, the peer closes, or
  // the deadline passes. On kLine, `line` holds the line including LF. On
  // other statuses it holds whatever partial bytes arrived.
  ReadStatus read_line(Clock::time_point deadline, Bytes& line);

  // Waits for any bytes at all (buffered or new) until the deadline.
  ReadStatus wait_readable(Clock::time_point deadline);

  // Drops everything currently buffered.
  void clear() { buffer_.clear(); }

  // Bytes received so far that have not been returned as lines.
  const Bytes& pending() const { return buffer_; }

 private:
  ReadStatus fill(Clock::time_point deadline);

  const Socket& socket_;
  std::size_t max_line_;
  Bytes buffer_;
};

// Ignore SIGPIPE process-wide; writes to dead peers then report errors.
void ignore_sigpipe();

}  // namespace replayfuzz::net
