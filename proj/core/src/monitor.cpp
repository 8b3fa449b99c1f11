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

#include "replayfuzz/monitor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/prctl.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

std::string_view to_string(MonitorStatus status) {
  switch (status) {
    case MonitorStatus::kRunning: return "RUNNING";
    case MonitorStatus::kDown: return "DOWN";
    case MonitorStatus::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

MonitorStatus monitor_status_from_string(std::string_view name) {
  if (name == "RUNNING") return MonitorStatus::kRunning;
  if (name == "DOWN") return MonitorStatus::kDown;
  return MonitorStatus::kUnknown;
}

Supervisor::Supervisor(std::vector<std::string> command) : command_(std::move(command)) {}

Supervisor::~Supervisor() {
  try {
    kill(std::chrono::milliseconds(200));
  } catch (...) {
  }
}

void Supervisor::launch() {
  if (command_.empty()) throw Error(ErrorCode::kSpawnFailure, "empty target command");
  if (poll().running) return;

  int pipefd[2];
  if (::pipe2(pipefd, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kSpawnFailure, std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<char*> argv;
  for (std::string& arg : command_) argv.push_back(arg.data());
  argv.push_back(nullptr);

  const pid_t parent = ::getpid();
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    throw Error(ErrorCode::kSpawnFailure, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::prctl(PR_SET_PDEATHSIG, SIGKILL);
    if (::getppid() != parent) ::_exit(127);
    ::signal(SIGPIPE, SIG_DFL);
    ::execvp(argv[0], argv.data());
    int err = errno;
    [[maybe_unused]] auto n = ::write(pipefd[1], &err, sizeof err);
    ::_exit(127);
  }
  ::close(pipefd[1]);
  int child_errno = 0;
  ssize_t n;
  do {
    n = ::read(pipefd[0], &child_errno, sizeof child_errno);
  } while (n < 0 && errno == EINTR);
  ::close(pipefd[0]);
  if (n == static_cast<ssize_t>(sizeof child_errno)) {
    ::waitpid(pid, nullptr, 0);
    throw Error(ErrorCode::kSpawnFailure,
                "cannot execute " + command_.front() + ": " + std::strerror(child_errno));
  }
  pid_ = pid;
  last_ = ChildState{};
  last_.running = true;
}

ChildState Supervisor::poll() {
  if (pid_ < 0) return last_;
  int status = 0;
  const pid_t rc = ::waitpid(pid_, &status, WNOHANG);
  last_ = ChildState{};
  if (rc == 0) {
    last_.running = true;
    return last_;
  }
  if (rc == pid_) {
    if (WIFEXITED(status)) last_.exit_code = WEXITSTATUS(status);
    if (WIFSIGNALED(status)) last_.term_signal = WTERMSIG(status);
  }
  pid_ = -1;
  return last_;
}

void Supervisor::kill(std::chrono::milliseconds grace) {
  if (!poll().running) return;
  const pid_t pid = pid_;
  auto signal_child = [pid](int sig) {
    if (::kill(-pid, sig) != 0) ::kill(pid, sig);
  };
  signal_child(SIGTERM);
  const auto deadline = std::chrono::steady_clock::now() + grace;
  while (std::chrono::steady_clock::now() < deadline) {
    if (!poll().running) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  signal_child(SIGKILL);
  int status = 0;
  pid_t rc;
  do {
    rc = ::waitpid(pid, &status, 0);
  } while (rc < 0 && errno == EINTR);
  last_ = ChildState{};
  if (rc == pid && WIFSIGNALED(status)) last_.term_signal = WTERMSIG(status);
  if (rc == pid && WIFEXITED(status)) last_.exit_code = WEXITSTATUS(status);
  pid_ = -1;
}

void Supervisor::restart() {
  kill();
  launch();
  ++restarts_;
}

std::string MonitorAgent::handle_command(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  try {
    if (line == "STATUS") {
      const ChildState st = supervisor_.poll();
      if (st.running) return "OK RUNNING";
      if (st.term_signal) return "OK DOWN signaled";
      if (st.exit_code) return "OK DOWN " + std::to_string(*st.exit_code);
      return "OK DOWN";
    }
    if (line == "RESTART") {
      supervisor_.restart();
      return "OK RESTARTED " + std::to_string(supervisor_.restarts());
    }
    if (line == "KILL") {
      supervisor_.kill();
      return "OK KILLED";
    }
  } catch (const std::exception& e) {
    return std::string("ERR ") + e.what();
  }
  return "ERR unknown command";
}

namespace {

bool stopping(const std::atomic<bool>* stop) { return stop && stop->load(); }

void serve_session(const net::Socket& conn, MonitorAgent& agent, const std::atomic<bool>* stop) {
  net::LineReader reader(conn, kMaxControlLine);
  bool skipping = false;  // inside the tail of an over-long line
  Bytes line;
  while (!stopping(stop)) {
    const auto st = reader.read_line(net::Clock::now() + std::chrono::milliseconds(200), line);
    if (st == net::ReadStatus::kTimeout) continue;
    if (st == net::ReadStatus::kTooLong) {
      if (!skipping && !net::send_all(conn, std::string_view("ERR line too long\n"))) return;
      skipping = true;
      continue;
    }
    if (st != net::ReadStatus::kLine) return;
    if (skipping) {
      skipping = false;
      continue;
    }
    const std::string reply = agent.handle_command(as_text(line)) + "\n";
    if (!net::send_all(conn, reply)) return;
  }
}

}  // namespace

void serve_control(const ControlOptions& options, std::vector<std::string> target_command) {
  Supervisor supervisor(std::move(target_command));
  supervisor.launch();
  net::Socket listener = net::listen_tcp(options.port, options.bind_address, 4);
  if (options.on_listening) options.on_listening(net::local_port(listener));
  MonitorAgent agent(supervisor);

  while (!stopping(options.stop)) {
    pollfd pfd{listener.fd(), POLLIN, 0};
    if (::poll(&pfd, 1, 200) <= 0) continue;
    net::Socket conn(::accept4(listener.fd(), nullptr, nullptr, SOCK_CLOEXEC));
    if (!conn.valid()) continue;
    serve_session(conn, agent, options.stop);
  }
}

MonitorClient::MonitorClient(std::string host, std::uint16_t port, std::chrono::milliseconds timeout)
    : host_(std::move(host)), port_(port), timeout_(timeout) {
  connect();
}

void MonitorClient::connect() {
  reader_.reset();
  auto attempt = net::connect_tcp(host_, port_, timeout_);
  if (attempt.result != net::ConnectResult::kOk) {
    throw Error(ErrorCode::kMonitorUnreachable,
                "monitor " + host_ + ":" + std::to_string(port_) + ": " + attempt.detail);
  }
  socket_ = std::move(attempt.socket);
  reader_ = std::make_unique<net::LineReader>(socket_, kMaxControlLine);
}

std::string MonitorClient::request(std::string_view verb) {
  const std::string wire = std::string(verb) + "\n";
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (!reader_) connect();
    Bytes line;
    if (net::send_all(socket_, wire) &&
        reader_->read_line(net::Clock::now() + timeout_ + kKillGrace, line) == net::ReadStatus::kLine) {
      std::string reply = to_string(line);
      while (!reply.empty() && (reply.back() == '\n' || reply.back() == '\r')) reply.pop_back();
      return reply;
    }
    reader_.reset();
    socket_.close();
  }
  throw Error(ErrorCode::kMonitorUnreachable, "monitor " + host_ + ":" + std::to_string(port_) +
                                                  " stopped answering " + std::string(verb));
}

MonitorStatus MonitorClient::status() {
  const std::string reply = request("STATUS");
  if (reply == "OK RUNNING") return MonitorStatus::kRunning;
  if (reply.starts_with("OK DOWN")) return MonitorStatus::kDown;
  return MonitorStatus::kUnknown;
}

bool MonitorClient::restart() { return request("RESTART").starts_with("OK RESTARTED"); }

bool MonitorClient::kill() { return request("KILL") == "OK KILLED"; }

}  // namespace replayfuzz
