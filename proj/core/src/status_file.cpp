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

#include "replayfuzz/status_file.hpp"

#include <fstream>
#include <iterator>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kOk: return "OK";
    case Verdict::kCrash: return "CRASH";
    case Verdict::kHang: return "HANG";
    case Verdict::kRefused: return "REFUSED";
    case Verdict::kError: return "ERROR";
  }
  return "ERROR";
}

Verdict verdict_from_string(std::string_view name) {
  if (name == "OK") return Verdict::kOk;
  if (name == "CRASH") return Verdict::kCrash;
  if (name == "HANG") return Verdict::kHang;
  if (name == "REFUSED") return Verdict::kRefused;
  if (name == "ERROR") return Verdict::kError;
  throw Error(ErrorCode::kIo, "unknown verdict " + std::string(name));
}

nlohmann::json to_json(const StatusHeader& h) {
  return {{"campaign_id", h.campaign_id},   {"pcap", h.pcap},
          {"target", h.target},             {"started_at", h.started_at},
          {"testcase_count", h.testcase_count}, {"manifest_hash", h.manifest_hash},
          {"schedule_hash", h.schedule_hash},   {"config", h.config},
          {"reassembly_notes", h.reassembly_notes}};
}

StatusHeader status_header_from_json(const nlohmann::json& j) {
  StatusHeader h;
  h.campaign_id = j.at("campaign_id").get<std::string>();
  h.pcap = j.value("pcap", "");
  h.target = j.value("target", "");
  h.started_at = j.value("started_at", "");
  h.testcase_count = j.value("testcase_count", std::size_t{0});
  h.manifest_hash = j.value("manifest_hash", "");
  h.schedule_hash = j.value("schedule_hash", "");
  h.config = j.value("config", nlohmann::json::object());
  h.reassembly_notes = j.value("reassembly_notes", nlohmann::json::array());
  return h;
}

nlohmann::json to_json(const InjectionOutcome& o) {
  return {{"test_id", o.test_id},
          {"verdict", to_string(o.verdict)},
          {"monitor_status", to_string(o.monitor_status)},
          {"elapsed_ms", o.elapsed_ms},
          {"detail", o.detail},
          {"started_at_ms", o.started_at_ms},
          {"ended_at_ms", o.ended_at_ms},
          {"response_excerpt", escape_bytes(o.response_excerpt)}};
}

InjectionOutcome outcome_from_json(const nlohmann::json& j) {
  InjectionOutcome o;
  o.test_id = j.at("test_id").get<std::size_t>();
  o.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  o.monitor_status = monitor_status_from_string(j.value("monitor_status", "UNKNOWN"));
  o.elapsed_ms = j.value("elapsed_ms", std::int64_t{0});
  o.detail = j.value("detail", "");
  o.started_at_ms = j.value("started_at_ms", std::int64_t{0});
  o.ended_at_ms = j.value("ended_at_ms", std::int64_t{0});
  o.response_excerpt = unescape_bytes(j.value("response_excerpt", ""));
  return o;
}

StatusFile parse_status(std::string_view text) {
  StatusFile out;
  bool have_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const bool terminated = nl != std::string_view::npos;
    const std::string_view line = text.substr(0, nl);
    text = terminated ? text.substr(nl + 1) : std::string_view{};
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!have_header) {
        out.header = status_header_from_json(j);
        have_header = true;
      } else {
        out.outcomes.push_back(outcome_from_json(j));
      }
    } catch (const std::exception& e) {
      if (!terminated && have_header) {
        out.truncated_tail = true;  // interrupted mid-write
        break;
      }
      throw Error(have_header ? ErrorCode::kIo : ErrorCode::kManifestMismatch,
                  "status line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw Error(ErrorCode::kManifestMismatch, "status file has no campaign header");
  return out;
}

StatusFile read_status_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_status(text);
}

std::string status_without_timestamps(const StatusFile& status) {
  nlohmann::json header = to_json(status.header);
  header.erase("started_at");
  std::string out = header.dump() + "\n";
  for (const InjectionOutcome& o : status.outcomes) {
    nlohmann::json j = to_json(o);
    j.erase("started_at_ms");
    j.erase("ended_at_ms");
    j.erase("elapsed_ms");
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace replayfuzz
