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

#include "replayfuzz/injector.hpp"

#include <fstream>
#include <set>
#include <thread>

#include "replayfuzz/error.hpp"
#include "replayfuzz/net.hpp"

namespace replayfuzz {

void TargetConfig::validate() const {
  if (response_timeout_ms <= 0 || hang_timeout_ms <= 0 || settle_delay_ms < 0) {
    throw Error(ErrorCode::kInvalidConfig, "timeouts must be positive");
  }
  if (hang_timeout_ms < response_timeout_ms) {
    throw Error(ErrorCode::kInvalidConfig, "hang_timeout_ms must be >= response_timeout_ms");
  }
  if (host.empty() || monitor_host.empty()) throw Error(ErrorCode::kInvalidConfig, "empty host");
  if (port == 0 || monitor_port == 0) throw Error(ErrorCode::kInvalidConfig, "port 0 is not a target");
}

Verdict classify_verdict(const Evidence& e) {
  if (e.monitor == MonitorStatus::kDown || e.fresh_connect == ConnectProbe::kRefused) {
    return Verdict::kCrash;
  }
  if (e.monitor == MonitorStatus::kRunning && !e.reply_received && e.hang_window_elapsed) {
    return Verdict::kHang;
  }
  if (e.reply_received && e.fresh_connect == ConnectProbe::kOk) return Verdict::kOk;
  return Verdict::kError;
}

namespace {

using std::chrono::milliseconds;

std::int64_t wall_ms() {
  return std::chrono::duration_cast<milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

MonitorStatus query_monitor(MonitorClient& monitor, std::string& detail) {
  try {
    return monitor.status();
  } catch (const Error& e) {
    detail += (detail.empty() ? "" : "; ") + std::string("monitor query failed");
    return MonitorStatus::kUnknown;
  }
}

ConnectProbe probe(const TargetConfig& target) {
  auto attempt = net::connect_tcp(target.host, target.port, milliseconds(target.response_timeout_ms));
  switch (attempt.result) {
    case net::ConnectResult::kOk: return ConnectProbe::kOk;
    case net::ConnectResult::kRefused: return ConnectProbe::kRefused;
    default: return ConnectProbe::kTimeout;
  }
}

std::string_view to_string(ConnectProbe p) {
  switch (p) {
    case ConnectProbe::kOk: return "ok";
    case ConnectProbe::kRefused: return "refused";
    case ConnectProbe::kTimeout: return "timeout";
  }
  return "timeout";
}

}  // namespace

InjectionOutcome execute_testcase(const TestCase& tc, const TargetConfig& target,
                                  MonitorClient& monitor) {
  InjectionOutcome out;
  out.test_id = tc.test_id;
  out.started_at_ms = wall_ms();
  const auto t0 = net::Clock::now();
  const milliseconds response_timeout(target.response_timeout_ms);
  auto finish = [&](InjectionOutcome& o) -> InjectionOutcome {
    o.ended_at_ms = std::max(wall_ms(), o.started_at_ms);
    o.elapsed_ms = std::chrono::duration_cast<milliseconds>(net::Clock::now() - t0).count();
    return std::move(o);
  };

  auto attempt = net::connect_tcp(target.host, target.port, response_timeout);
  if (attempt.result != net::ConnectResult::kOk) {
    out.verdict = attempt.result == net::ConnectResult::kRefused ? Verdict::kRefused : Verdict::kError;
    out.detail = "connect before injection: " + attempt.detail;
    out.monitor_status = query_monitor(monitor, out.detail);
    return finish(out);
  }

  bool sent = false;
  bool reply = false;
  bool hang_window = false;
  std::string detail;
  {
    net::Socket conn = std::move(attempt.socket);
    net::LineReader reader(conn);
    Bytes line;
    if (tc.server_speaks_first) {
      reader.read_line(net::Clock::now() + response_timeout, line);
    }
    bool alive = true;
    for (const Message& m : tc.prefix_messages) {
      if (!net::send_all(conn, m.bytes)) {
        alive = false;
        break;
      }
      const auto st = reader.read_line(net::Clock::now() + response_timeout, line);
      if (st == net::ReadStatus::kEof || st == net::ReadStatus::kError) {
        alive = false;
        break;
      }
    }
    reader.clear();
    if (!alive) {
      detail = "connection lost during prefix replay";
    } else {
      sent = net::send_all(conn, render_mutated_message(tc));
      if (!sent) detail = "send of mutated message failed";
    }

    if (sent) {
      const auto sent_at = net::Clock::now();
      auto st = reader.read_line(sent_at + response_timeout, line);
      if (st == net::ReadStatus::kTimeout && line.empty()) {
        st = reader.read_line(sent_at + milliseconds(target.hang_timeout_ms), line);
      }
      reply = !line.empty();
      if (reply) {
        out.response_excerpt.assign(line.begin(),
                                    line.begin() + static_cast<std::ptrdiff_t>(
                                                       std::min(line.size(), kResponseExcerptLimit)));
      } else if (st == net::ReadStatus::kTimeout) {
        hang_window = true;
        detail = "no reply within hang timeout";
      } else {
        detail = "connection closed without reply";
      }
    }
  }

  Evidence ev{.reply_received = reply, .fresh_connect = probe(target), .hang_window_elapsed = hang_window};
  ev.monitor = query_monitor(monitor, detail);
  // A closed connection without reply usually means the target is dying;
  // give the kernel a moment to finish tearing it down before deciding.
  if (sent && !reply && !hang_window) {
    for (int i = 0; i < 10 && ev.monitor == MonitorStatus::kRunning && ev.fresh_connect == ConnectProbe::kOk;
         ++i) {
      std::this_thread::sleep_for(milliseconds(50));
      ev.fresh_connect = probe(target);
      ev.monitor = query_monitor(monitor, detail);
    }
  }
  out.monitor_status = ev.monitor;
  out.verdict = classify_verdict(ev);
  if (out.verdict == Verdict::kHang) {
    const bool killed = [&] {
      try {
        return monitor.kill();
      } catch (const Error&) {
        return false;
      }
    }();
    detail += killed ? "; killed by monitor" : "; monitor kill failed";
  }
  if (out.verdict == Verdict::kError && detail.empty()) {
    detail = "inconsistent evidence: fresh connect " + std::string(to_string(ev.fresh_connect)) +
             ", monitor " + std::string(replayfuzz::to_string(ev.monitor));
  }
  out.detail = std::move(detail);
  return finish(out);
}

namespace {

void append_line(const std::filesystem::path& path, const nlohmann::json& j, bool truncate = false) {
  std::ofstream out(path, truncate ? std::ios::binary | std::ios::trunc : std::ios::binary | std::ios::app);
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

}  // namespace

std::vector<InjectionOutcome> run_campaign(const std::vector<TestCase>& cases, const TargetConfig& target,
                                           const CampaignOptions& options) {
  target.validate();
  auto sleep = options.sleep ? options.sleep : [](milliseconds d) { std::this_thread::sleep_for(d); };
  StatusHeader header = options.header;
  header.testcase_count = cases.size();

  std::vector<InjectionOutcome> outcomes;
  std::set<std::size_t> done;
  if (options.resume && std::filesystem::exists(options.status_path)) {
    StatusFile existing = read_status_file(options.status_path);
    if (!header.manifest_hash.empty() && existing.header.manifest_hash != header.manifest_hash) {
      throw Error(ErrorCode::kManifestMismatch, "status file belongs to a different manifest");
    }
    if (existing.truncated_tail) {
      // Rewrite without the partial line so appends stay line-aligned.
      append_line(options.status_path, to_json(existing.header), true);
      for (const auto& o : existing.outcomes) append_line(options.status_path, to_json(o));
    }
    for (auto& o : existing.outcomes) {
      done.insert(o.test_id);
      outcomes.push_back(std::move(o));
    }
  } else {
    append_line(options.status_path, to_json(header), true);
  }

  std::vector<const TestCase*> pending;
  for (const TestCase& tc : cases) {
    if (!done.contains(tc.test_id)) pending.push_back(&tc);
  }
  if (pending.empty()) return outcomes;

  const milliseconds settle(target.settle_delay_ms);
  MonitorClient monitor(target.monitor_host, target.monitor_port);
  // An interrupted run may have left the target mid-case, so a resume starts it fresh.
  if (!done.empty() || monitor.status() != MonitorStatus::kRunning) {
    monitor.restart();
    sleep(settle);
    if (monitor.status() != MonitorStatus::kRunning) {
      throw Error(ErrorCode::kTargetNeverUp, "target not running after one restart");
    }
  }

  std::size_t executed = 0;
  for (const TestCase* tc : pending) {
    if (options.max_cases && executed >= *options.max_cases) break;
    if (target.restart_every_case && executed > 0) {
      monitor.restart();
      sleep(settle);
    }
    InjectionOutcome o = execute_testcase(*tc, target, monitor);
    if (o.verdict == Verdict::kRefused) {
      // The previous case left the target down; restart and retry once.
      monitor.restart();
      sleep(settle);
      o = execute_testcase(*tc, target, monitor);
    }
    append_line(options.status_path, to_json(o));
    if (o.verdict != Verdict::kOk) {
      monitor.restart();
      sleep(settle);
    }
    if (options.on_outcome) options.on_outcome(o);
    outcomes.push_back(std::move(o));
    ++executed;
  }
  return outcomes;
}

}  // namespace replayfuzz
