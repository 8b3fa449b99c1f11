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

#include "replayfuzz/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

namespace {

std::string field_key(const ManifestEntry& e) {
  return e.flow.value("sip", "?") + ":" + std::to_string(e.flow.value("sp", 0)) + " msg " +
         std::to_string(e.message_index) + " field " + std::to_string(e.field_index);
}

}  // namespace

Report build_report(std::string_view manifest_text, const StatusFile& status) {
  Report report;
  report.manifest_hash = hex64(fnv1a64(manifest_text));
  if (!status.header.manifest_hash.empty() && status.header.manifest_hash != report.manifest_hash) {
    throw Error(ErrorCode::kManifestMismatch, "status header manifest hash " + status.header.manifest_hash +
                                                  " != " + report.manifest_hash);
  }
  report.pcap = status.header.pcap;
  report.campaign_id = status.header.campaign_id;
  report.schedule_hash = status.header.schedule_hash;
  report.reassembly_notes = status.header.reassembly_notes;

  std::map<std::size_t, ManifestEntry> by_id;
  for (ManifestEntry& e : parse_manifest(manifest_text)) by_id.emplace(e.test_id, std::move(e));

  CampaignSummary& s = report.summary;
  s.manifest_count = by_id.size();
  s.config = status.header.config;
  std::int64_t first_start = 0;
  std::int64_t last_end = 0;
  for (const InjectionOutcome& o : status.outcomes) {
    auto it = by_id.find(o.test_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kManifestMismatch, "test_id " + std::to_string(o.test_id) + " not in manifest");
    }
    ++s.totals[o.verdict];
    ++s.executed;
    if (s.executed == 1 || o.started_at_ms < first_start) first_start = o.started_at_ms;
    last_end = std::max(last_end, o.ended_at_ms);
    if (o.verdict != Verdict::kCrash && o.verdict != Verdict::kHang) continue;

    Finding f;
    f.entry = it->second;
    f.verdict = o.verdict;
    f.monitor_status = o.monitor_status;
    f.detail = o.detail;
    const Bytes mutated = f.entry.mutated_message();
    f.reproduction_length = mutated.size();
    f.reproduction_hash = hex64(fnv1a64(mutated));
    if (f.entry.payload_length <= kInlineReproductionLimit) f.reproduction = mutated;
    ++s.findings_per_field[field_key(f.entry)];
    if (o.verdict == Verdict::kCrash &&
        (!s.first_crash_test_id || o.test_id < *s.first_crash_test_id)) {
      s.first_crash_test_id = o.test_id;
    }
    report.findings.push_back(std::move(f));
  }
  s.duration_ms = s.executed ? std::max<std::int64_t>(0, last_end - first_start) : 0;
  std::sort(report.findings.begin(), report.findings.end(),
            [](const Finding& a, const Finding& b) { return a.entry.test_id < b.entry.test_id; });
  return report;
}

nlohmann::json report_to_json(const Report& report) {
  const CampaignSummary& s = report.summary;
  nlohmann::json totals = nlohmann::json::object();
  for (const auto& [verdict, n] : s.totals) totals[std::string(to_string(verdict))] = n;
  nlohmann::json per_field = nlohmann::json::object();
  for (const auto& [key, n] : s.findings_per_field) per_field[key] = n;

  nlohmann::json findings = nlohmann::json::array();
  for (const Finding& f : report.findings) {
    const ManifestEntry& e = f.entry;
    nlohmann::json reproduction = {{"pcap", report.pcap},
                                   {"test_id", e.test_id},
                                   {"schedule_hash", report.schedule_hash},
                                   {"length", f.reproduction_length},
                                   {"fnv1a64", f.reproduction_hash}};
    if (f.reproduction) reproduction["bytes"] = escape_bytes(*f.reproduction);
    findings.push_back({{"test_id", e.test_id},
                        {"flow", e.flow},
                        {"message_index", e.message_index},
                        {"field",
                         {{"index", e.field_index},
                          {"start", e.start},
                          {"end", e.end},
                          {"type", to_string(e.field_type)},
                          {"original_preview", preview_bytes(e.original)}}},
                        {"payload",
                         {{"class", to_string(e.payload_class)}, {"label", e.label}, {"length", e.payload_length}}},
                        {"verdict", to_string(f.verdict)},
                        {"monitor_status", to_string(f.monitor_status)},
                        {"detail", f.detail},
                        {"reproduction", std::move(reproduction)}});
  }
  return {{"pcap", report.pcap},
          {"campaign_id", report.campaign_id},
          {"manifest_hash", report.manifest_hash},
          {"schedule_hash", report.schedule_hash},
          {"reassembly_notes", report.reassembly_notes},
          {"summary",
           {{"totals", std::move(totals)},
            {"executed", s.executed},
            {"manifest_count", s.manifest_count},
            {"first_crash_test_id", s.first_crash_test_id ? nlohmann::json(*s.first_crash_test_id) : nlohmann::json()},
            {"duration_ms", s.duration_ms},
            {"findings_per_field", std::move(per_field)},
            {"config", s.config}}},
          {"findings", std::move(findings)}};
}

std::string report_to_text(const Report& report) {
  const CampaignSummary& s = report.summary;
  std::ostringstream out;
  out << "Vulnerability report\n"
      << "====================\n\n"
      << "capture:     " << report.pcap << "\n"
      << "campaign:    " << report.campaign_id << "\n"
      << "test cases:  " << s.executed << " executed of " << s.manifest_count << "\n"
      << "duration:    " << s.duration_ms << " ms\n"
      << "verdicts:   ";
  for (const auto& [verdict, n] : s.totals) out << " " << to_string(verdict) << "=" << n;
  out << "\n";
  if (s.first_crash_test_id) out << "first crash: test " << *s.first_crash_test_id << "\n";
  if (!report.reassembly_notes.empty()) {
    out << "reassembly:  " << report.reassembly_notes.dump() << "\n";
  }
  out << "\n" << report.findings.size() << " finding(s)\n";

  for (const Finding& f : report.findings) {
    const ManifestEntry& e = f.entry;
    out << "\n[" << to_string(f.verdict) << "] test " << e.test_id << ": " << to_string(e.payload_class)
        << " payload " << e.label << " (" << e.payload_length << " bytes) in " << to_string(e.field_type)
        << " field " << e.field_index << " [" << e.start << "," << e.end << ") \""
        << preview_bytes(e.original) << "\" of message " << e.message_index << " on "
        << e.flow.value("sip", "?") << ":" << e.flow.value("sp", 0) << " -> " << e.flow.value("dip", "?")
        << ":" << e.flow.value("dp", 0) << ".\n"
        << "  monitor: " << to_string(f.monitor_status);
    if (!f.detail.empty()) out << " (" << f.detail << ")";
    out << "\n  mutated message: " << f.reproduction_length << " bytes, fnv1a64 " << f.reproduction_hash;
    if (f.reproduction) out << ", \"" << preview_bytes(*f.reproduction, 96) << "\"";
    out << "\n  reproduce: replayfuzz fuzz --pcap " << report.pcap << " --only " << e.test_id << "\n";
  }
  return out.str();
}

}  // namespace replayfuzz
