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

#include "replayfuzz/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <csignal>
#include <cstring>

#include "replayfuzz/error.hpp"

namespace replayfuzz::net {

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.release();
  }
  return *this;
}

int Socket::release() noexcept {
  int fd = fd_;
  fd_ = -1;
  return fd;
}

void Socket::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

namespace {

int remaining_ms(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return static_cast<int>(std::clamp<long long>(left, 0, 1 << 30));
}

bool resolve(const std::string& host, std::uint16_t port, sockaddr_in& addr, std::string& detail) {
  std::memset(&addr, 0, sizeof addr);
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return true;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  int rc = getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || !res) {
    detail = "cannot resolve " + host + ": " + gai_strerror(rc);
    return false;
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  freeaddrinfo(res);
  return true;
}

}  // namespace

ConnectAttempt connect_tcp(const std::string& host, std::uint16_t port,
                           std::chrono::milliseconds timeout) {
  ConnectAttempt out;
  sockaddr_in addr;
  if (!resolve(host, port, addr, out.detail)) return out;
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC | SOCK_NONBLOCK, 0));
  if (!s.valid()) {
    out.detail = std::string("socket: ") + std::strerror(errno);
    return out;
  }
  const auto deadline = Clock::now() + timeout;
  int rc = ::connect(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  int err = rc == 0 ? 0 : errno;
  if (err == EINPROGRESS) {
    pollfd pfd{s.fd(), POLLOUT, 0};
    int ready;
    do {
      ready = ::poll(&pfd, 1, remaining_ms(deadline));
    } while (ready < 0 && errno == EINTR);
    if (ready == 0) {
      out.result = ConnectResult::kTimeout;
      out.detail = "connect timed out";
      return out;
    }
    socklen_t len = sizeof err;
    ::getsockopt(s.fd(), SOL_SOCKET, SO_ERROR, &err, &len);
  }
  if (err == ECONNREFUSED) {
    out.result = ConnectResult::kRefused;
    out.detail = "connection refused";
    return out;
  }
  if (err != 0) {
    out.detail = std::string("connect: ") + std::strerror(err);
    return out;
  }
  ::fcntl(s.fd(), F_SETFL, ::fcntl(s.fd(), F_GETFL) & ~O_NONBLOCK);
  int one = 1;
  ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  out.result = ConnectResult::kOk;
  out.socket = std::move(s);
  return out;
}

Socket listen_tcp(std::uint16_t port, const std::string& bind_address, int backlog) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, bind_address.c_str(), &addr.sin_addr) != 1) {
    throw Error(ErrorCode::kBindFailure, "bad bind address " + bind_address);
  }
  Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!s.valid()) throw Error(ErrorCode::kBindFailure, std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(s.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(s.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw Error(ErrorCode::kBindFailure, "bind " + bind_address + ":" + std::to_string(port) + ": " +
                                             std::strerror(errno));
  }
  if (::listen(s.fd(), backlog) != 0) {
    throw Error(ErrorCode::kBindFailure, std::string("listen: ") + std::strerror(errno));
  }
  return s;
}

std::uint16_t local_port(const Socket& socket) {
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  ::getsockname(socket.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

bool send_all(const Socket& socket, ByteView bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    ssize_t n = ::send(socket.fd(), bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

ReadStatus LineReader::fill(Clock::time_point deadline) {
  pollfd pfd{socket_.fd(), POLLIN, 0};
  int ready;
  do {
    ready = ::poll(&pfd, 1, remaining_ms(deadline));
  } while (ready < 0 && errno == EINTR);
  if (ready == 0) return ReadStatus::kTimeout;
  if (ready < 0) return ReadStatus::kError;
  std::uint8_t buf[16384];
  ssize_t n;
  do {
    n = ::recv(socket_.fd(), buf, sizeof buf, 0);
  } while (n < 0 && errno == EINTR);
  if (n == 0) return ReadStatus::kEof;
  if (n < 0) return errno == ECONNRESET ? ReadStatus::kEof : ReadStatus::kError;
  buffer_.insert(buffer_.end(), buf, buf + n);
  return ReadStatus::kLine;  // "made progress"
}

ReadStatus LineReader::read_line(Clock::time_point deadline, Bytes& line) {
  std::size_t scanned = 0;
  for (;;) {
    auto lf = std::find(buffer_.begin() + static_cast<std::ptrdiff_t>(scanned), buffer_.end(), '\n');
    if (lf != buffer_.end()) {
      line.assign(buffer_.begin(), lf + 1);
      buffer_.erase(buffer_.begin(), lf + 1);
      return ReadStatus::kLine;
    }
    scanned = buffer_.size();
    if (buffer_.size() > max_line_) {
      line = std::move(buffer_);
      buffer_.clear();
      return ReadStatus::kTooLong;
    }
    ReadStatus st = fill(deadline);
    if (st != ReadStatus::kLine) {
      line = buffer_;
      return st;
    }
  }
}

ReadStatus LineReader::wait_readable(Clock::time_point deadline) {
  if (!buffer_.empty()) return ReadStatus::kLine;
  return fill(deadline);
}

void ignore_sigpipe() { std::signal(SIGPIPE, SIG_IGN); }

}  // namespace replayfuzz::net
