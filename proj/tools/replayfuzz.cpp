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

// replayfuzz: learn a session from a capture, mutate it, inject it, report.

#include <csignal>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "replayfuzz/bytes.hpp"
#include "replayfuzz/config.hpp"
#include "replayfuzz/corpus.hpp"
#include "replayfuzz/error.hpp"
#include "replayfuzz/injector.hpp"
#include "replayfuzz/monitor.hpp"
#include "replayfuzz/net.hpp"
#include "replayfuzz/report.hpp"
#include "replayfuzz/testcase.hpp"
#include "replayfuzz/victim.hpp"

namespace fs = std::filesystem;
using namespace replayfuzz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEmptyCorpus = 3;
constexpr int kExitMonitorUnreachable = 4;
constexpr int kExitTargetNeverUp = 5;
constexpr int kExitManifestMismatch = 6;

std::atomic<bool> g_stop{false};
bool g_verbose = false;

void on_signal(int) { g_stop = true; }

void install_stop_handlers() {
  struct sigaction sa {};
  sa.sa_handler = on_signal;
  sigemptyset(&sa.sa_mask);
  sigaction(SIGINT, &sa, nullptr);
  sigaction(SIGTERM, &sa, nullptr);
}

void log(const std::string& line) {
  if (g_verbose) std::cerr << "replayfuzz: " << line << "\n";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return kExitUsage;
    case ErrorCode::kEmptyCorpus: return kExitEmptyCorpus;
    case ErrorCode::kMonitorUnreachable: return kExitMonitorUnreachable;
    case ErrorCode::kTargetNeverUp: return kExitTargetNeverUp;
    case ErrorCode::kManifestMismatch: return kExitManifestMismatch;
    default: return kExitInput;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, std::string_view text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

Corpus corpus_from_file(const fs::path& pcap) {
  if (!fs::exists(pcap)) throw Error(ErrorCode::kIo, "no such file: " + pcap.string());
  const std::string bytes = read_file(pcap);
  return load_corpus(ByteView(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Settings shared by generate and fuzz; flags override the config file.
struct Settings {
  std::string config_path;
  std::string output_dir;
  std::string pcap;
  std::string lengths_text;
  bool no_percent_n = false;
  bool no_mutate_verbs = false;

  // fuzz
  TargetConfig target;
  bool resume = false;
  std::optional<std::size_t> max_cases;
  std::optional<std::size_t> only;
};

struct FlagSet {
  CLI::Option* output_dir = nullptr;
  CLI::Option* pcap = nullptr;
  CLI::Option* lengths = nullptr;
  CLI::Option* no_percent_n = nullptr;
  CLI::Option* no_mutate_verbs = nullptr;
  CLI::Option* host = nullptr;
  CLI::Option* port = nullptr;
  CLI::Option* monitor_host = nullptr;
  CLI::Option* monitor_port = nullptr;
  CLI::Option* response_timeout = nullptr;
  CLI::Option* hang_timeout = nullptr;
  CLI::Option* settle_delay = nullptr;
  CLI::Option* restart_every_case = nullptr;
  CLI::Option* resume = nullptr;
};

std::vector<std::size_t> parse_lengths(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || item[0] == '-') {
      throw Error(ErrorCode::kInvalidConfig, "--lengths: not a length: '" + item + "'");
    }
    out.push_back(static_cast<std::size_t>(value));
    pos = comma + 1;
  }
  return out;
}

bool given(const CLI::Option* opt) { return opt && opt->count() > 0; }

CampaignConfig resolve_config(const Settings& s, const FlagSet& f) {
  CampaignConfig c;
  if (!s.config_path.empty()) c = load_campaign_config(s.config_path);
  if (given(f.output_dir)) c.output_dir = s.output_dir;
  if (given(f.pcap)) c.pcap_path = s.pcap;
  if (given(f.lengths)) c.schedules.string_lengths = parse_lengths(s.lengths_text);
  if (given(f.no_percent_n)) c.schedules.enable_percent_n = false;
  if (given(f.no_mutate_verbs)) c.schedules.mutate_verbs = false;
  if (given(f.host)) c.target.host = s.target.host;
  if (given(f.port)) c.target.port = s.target.port;
  if (given(f.monitor_host)) c.target.monitor_host = s.target.monitor_host;
  if (given(f.monitor_port)) c.target.monitor_port = s.target.monitor_port;
  if (given(f.response_timeout)) c.target.response_timeout_ms = s.target.response_timeout_ms;
  if (given(f.hang_timeout)) c.target.hang_timeout_ms = s.target.hang_timeout_ms;
  if (given(f.settle_delay)) c.target.settle_delay_ms = s.target.settle_delay_ms;
  if (given(f.restart_every_case)) c.target.restart_every_case = true;
  if (given(f.resume)) c.resume = true;
  if (c.pcap_path.empty()) throw Error(ErrorCode::kInvalidConfig, "no capture file given (--pcap)");
  // Validates the schedule before anything is written.
  string_overflow_schedule(c.schedules);
  return c;
}

int cmd_extract(const std::string& pcap, const std::string& out_path) {
  const Corpus corpus = corpus_from_file(pcap);
  const std::string doc = corpus_to_json(corpus).dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << doc;
  } else {
    write_file(out_path, doc);
    log("wrote " + out_path);
  }
  return kExitOk;
}

int cmd_generate(const CampaignConfig& c, const std::string& out_path, std::optional<std::size_t> show) {
  const Corpus corpus = corpus_from_file(c.pcap_path);
  const std::vector<TestCase> cases = generate_testcases(corpus, c.schedules);
  if (show) {
    if (*show >= cases.size()) {
      throw Error(ErrorCode::kInvalidConfig, "no test case " + std::to_string(*show));
    }
    const Bytes mutated = render_mutated_message(cases[*show]);
    std::cout.write(reinterpret_cast<const char*>(mutated.data()), static_cast<std::streamsize>(mutated.size()));
    return kExitOk;
  }
  const fs::path path = out_path.empty() ? fs::path(c.output_dir) / "manifest.jsonl" : fs::path(out_path);
  write_file(path, render_manifest(cases));
  log("wrote " + std::to_string(cases.size()) + " test cases to " + path.string());
  return kExitOk;
}

nlohmann::json reassembly_notes(const Corpus& corpus) {
  nlohmann::json notes = nlohmann::json::array();
  for (const FlowCorpus& fc : corpus.flows) {
    if (!fc.flow.sequence_gap() && !fc.flow.overlap_seen) continue;
    notes.push_back({{"flow", fc.flow.key.to_string()},
                     {"sequence_gap", fc.flow.sequence_gap()},
                     {"overlap_seen", fc.flow.overlap_seen}});
  }
  return notes;
}

int cmd_fuzz(const CampaignConfig& c, const Settings& s) {
  c.target.validate();
  const Corpus corpus = corpus_from_file(c.pcap_path);
  std::vector<TestCase> cases = generate_testcases(corpus, c.schedules);
  const std::string manifest = render_manifest(cases);
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  write_file(dir / "manifest.jsonl", manifest);

  fs::path status_path = dir / "status.jsonl";
  if (s.only) {
    if (*s.only >= cases.size()) throw Error(ErrorCode::kInvalidConfig, "no test case " + std::to_string(*s.only));
    cases = {cases[*s.only]};
    status_path = dir / ("status.only-" + std::to_string(*s.only) + ".jsonl");
  }

  CampaignOptions opts;
  opts.status_path = status_path;
  opts.resume = c.resume;
  opts.max_cases = s.max_cases;
  StatusHeader& h = opts.header;
  h.manifest_hash = hex64(fnv1a64(manifest));
  h.campaign_id = hex64(fnv1a64(h.manifest_hash + "|" + c.target.endpoint()));
  h.pcap = c.pcap_path;
  h.target = c.target.endpoint();
  h.started_at = iso_now();
  h.schedule_hash = c.schedules.hash();
  nlohmann::json echo = to_json(c);
  h.config = {{"target", echo["target"]}, {"schedules", echo["schedules"]}};
  h.reassembly_notes = reassembly_notes(corpus);
  opts.on_outcome = [](const InjectionOutcome& o) {
    log("test " + std::to_string(o.test_id) + " " + std::string(to_string(o.verdict)) + " (" +
        std::to_string(o.elapsed_ms) + " ms)" + (o.detail.empty() ? "" : " " + o.detail));
  };
  const auto outcomes = run_campaign(cases, c.target, opts);
  log(std::to_string(outcomes.size()) + " outcomes in " + status_path.string());
  return kExitOk;
}

int cmd_report(const std::string& manifest_path, const std::string& status_path, const std::string& out_dir) {
  const std::string manifest = read_file(manifest_path);
  const StatusFile status = read_status_file(status_path);
  const Report report = build_report(manifest, status);
  const std::string json = report_to_json(report).dump(2) + "\n";
  const std::string text = report_to_text(report);
  write_file(fs::path(out_dir) / "report.json", json);
  write_file(fs::path(out_dir) / "report.txt", text);
  log(std::to_string(report.findings.size()) + " findings written to " + out_dir);
  return kExitOk;
}

int cmd_monitor(std::uint16_t port, const std::string& bind, std::vector<std::string> command) {
  install_stop_handlers();
  ControlOptions opts;
  opts.port = port;
  opts.bind_address = bind;
  opts.stop = &g_stop;
  opts.on_listening = [](std::uint16_t p) { log("monitor listening on port " + std::to_string(p)); };
  serve_control(opts, std::move(command));
  return kExitOk;
}

// SIGTERM keeps its default action here, so a supervisor sees the victim die by signal.
int cmd_victim(const HarnessOptions& base, const FaultConfig& faults) {
  HarnessOptions opts = base;
  opts.on_listening = [](std::uint16_t p) { log("victim listening on port " + std::to_string(p)); };
  serve_ftp_subset(opts, faults);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  net::ignore_sigpipe();
  CLI::App app{"attack-injection fuzzer for line-based TCP protocols"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  FlagSet f;
  app.add_option("--config", s.config_path, "campaign config (JSON)")->check(CLI::ExistingFile);
  f.output_dir = app.add_option("--output-dir", s.output_dir, "directory for output files");
  app.add_flag("--verbose,-v", g_verbose, "log progress to stderr");

  FlagSet fg;
  auto add_schedule_flags = [&](CLI::App* sub, FlagSet& f) {
    f.lengths = sub->add_option("--lengths", s.lengths_text, "comma-separated string_overflow lengths");
    f.no_percent_n = sub->add_flag("--no-percent-n", s.no_percent_n, "drop the %n payload");
    f.no_mutate_verbs = sub->add_flag("--no-mutate-verbs", s.no_mutate_verbs, "leave the first token alone");
  };

  std::string extract_pcap, extract_out;
  auto* extract = app.add_subcommand("extract", "dump flows, messages and fields as JSON");
  extract->add_option("pcap", extract_pcap, "capture file")->required();
  extract->add_option("-o,--out", extract_out, "output path (default: stdout)");

  std::string generate_out;
  std::optional<std::size_t> show;
  auto* generate = app.add_subcommand("generate", "write the test-case manifest");
  fg.pcap = generate->add_option("pcap,--pcap", s.pcap, "capture file");
  generate->add_option("-o,--out", generate_out, "manifest path (default: <output-dir>/manifest.jsonl)");
  generate->add_option("--show", show, "print the mutated message of one test case");
  add_schedule_flags(generate, fg);

  auto* fuzz = app.add_subcommand("fuzz", "generate and inject a campaign");
  f.pcap = fuzz->add_option("pcap,--pcap", s.pcap, "capture file");
  f.host = fuzz->add_option("--host", s.target.host, "target host");
  f.port = fuzz->add_option("--port", s.target.port, "target port");
  f.monitor_host = fuzz->add_option("--monitor-host", s.target.monitor_host, "monitor agent host");
  f.monitor_port = fuzz->add_option("--monitor-port", s.target.monitor_port, "monitor agent port");
  f.response_timeout = fuzz->add_option("--response-timeout-ms", s.target.response_timeout_ms);
  f.hang_timeout = fuzz->add_option("--hang-timeout-ms", s.target.hang_timeout_ms);
  f.settle_delay = fuzz->add_option("--settle-delay-ms", s.target.settle_delay_ms);
  f.restart_every_case = fuzz->add_flag("--restart-every-case", "restart the target before every case");
  f.resume = fuzz->add_flag("--resume", s.resume, "continue after the last recorded test_id");
  fuzz->add_option("--max-cases", s.max_cases, "stop after this many new outcomes");
  fuzz->add_option("--only", s.only, "run a single test case");
  add_schedule_flags(fuzz, f);

  std::string manifest_path, status_path;
  auto* report = app.add_subcommand("report", "build report.json and report.txt");
  report->add_option("--manifest", manifest_path, "manifest.jsonl")->required();
  report->add_option("--status", status_path, "status.jsonl")->required();

  std::uint16_t monitor_port = kDefaultMonitorPort;
  std::string monitor_bind = "0.0.0.0";
  std::vector<std::string> target_command;
  auto* monitor = app.add_subcommand("monitor", "supervise a target and serve the control protocol");
  monitor->add_option("--port", monitor_port, "control port");
  monitor->add_option("--bind", monitor_bind, "bind address");
  monitor->add_option("command", target_command, "target command line (after --)")->required();

  HarnessOptions harness;
  FaultConfig faults;
  auto* victim = app.add_subcommand("victim", "run the seeded-fault FTP-subset harness");
  victim->add_option("--port", harness.port, "listen port");
  victim->add_option("--bind", harness.bind_address, "bind address");
  victim->add_option("--pid-file", harness.pid_file, "write the pid here once listening");
  victim->add_flag("--fault-overflow", faults.fault_overflow, "abort on long arguments");
  victim->add_option("--overflow-threshold", faults.overflow_threshold, "argument length that aborts")
      ->check(CLI::PositiveNumber);
  victim->add_flag("--fault-format", faults.fault_format, "hang on %x / %n arguments");
  victim->add_flag("--fault-integer", faults.fault_integer, "abort on digits-only arguments >= 2^31");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  fg.output_dir = f.output_dir;

  try {
    if (*extract) {
      std::string out = extract_out;
      if (out.empty() && given(f.output_dir)) out = (fs::path(s.output_dir) / "extract.json").string();
      return cmd_extract(extract_pcap, out);
    }
    if (*generate) return cmd_generate(resolve_config(s, fg), generate_out, show);
    if (*fuzz) return cmd_fuzz(resolve_config(s, f), s);
    if (*report) {
      return cmd_report(manifest_path, status_path, given(f.output_dir) ? s.output_dir : std::string("."));
    }
    if (*monitor) return cmd_monitor(monitor_port, monitor_bind, target_command);
    if (*victim) return cmd_victim(harness, faults);
  } catch (const Error& e) {
    std::cerr << "replayfuzz: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "replayfuzz: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
