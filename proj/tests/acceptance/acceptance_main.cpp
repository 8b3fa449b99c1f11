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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <signal.h>
#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "replayfuzz/corpus.hpp"
#include "replayfuzz/error.hpp"
#include "replayfuzz/flow.hpp"
#include "replayfuzz/monitor.hpp"
#include "replayfuzz/pcap.hpp"
#include "replayfuzz/payloads.hpp"
#include "replayfuzz/status_file.hpp"
#include "replayfuzz/testcase.hpp"
#include "support/capture_writer.hpp"
#include "support/fixtures.hpp"
#include "support/process.hpp"

namespace fs = std::filesystem;
using namespace replayfuzz;
using namespace std::chrono_literals;
using testing::cli_path;
using testing::run_command;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

int g_failures = 0;

void report(const char* id, const char* title, Check& c, const std::string& summary) {
  std::cout << id << " " << (c.ok ? "PASS" : "FAIL") << "  " << title << ": "
            << (c.ok ? summary : c.why.str()) << std::endl;
  if (!c.ok) ++g_failures;
}

std::vector<std::string> verdicts_of(const StatusFile& s) {
  std::vector<std::pair<std::size_t, std::string>> by_id;
  for (const auto& o : s.outcomes) by_id.emplace_back(o.test_id, std::string(to_string(o.verdict)));
  std::sort(by_id.begin(), by_id.end());
  std::vector<std::string> out;
  for (auto& [id, v] : by_id) out.push_back(v);
  return out;
}

std::vector<std::string> fuzz_args(const fs::path& out, const fs::path& pcap, const testing::LabTarget& lab) {
  return {cli_path(), "--output-dir", out.string(), "fuzz", pcap.string(),
          "--port", std::to_string(lab.target_port), "--monitor-port", std::to_string(lab.monitor_port),
          "--response-timeout-ms", "500", "--hang-timeout-ms", "1000", "--settle-delay-ms", "50"};
}

// The benign client side of the recorded session.
const std::vector<std::string> kSessionScript = {"USER anonymous\r\n", "PASS guest\r\n", "CWD pub\r\n",
                                                  "RETR file.txt\r\n", "REST 1024\r\n", "QUIT\r\n"};

// Runs the session against a live harness and writes what crossed the wire
// as a capture, one segment per application write.
bool record_session(const testing::LabTarget& lab, const fs::path& pcap, std::string& error) {
  auto conn = net::connect_tcp("127.0.0.1", lab.target_port, 2s);
  if (conn.result != net::ConnectResult::kOk) {
    error = "cannot connect to harness";
    return false;
  }
  const std::uint16_t client_port = net::local_port(conn.socket);
  testing::Conversation conv(0x7F000001, client_port, 0x7F000001, lab.target_port, 40000, 90000);
  conv.handshake();
  net::LineReader reader(conn.socket);
  Bytes line;
  if (reader.read_line(net::Clock::now() + 2s, line) != net::ReadStatus::kLine) {
    error = "no banner";
    return false;
  }
  conv.server(as_text(line));
  for (const std::string& cmd : kSessionScript) {
    conv.client(cmd);
    if (!net::send_all(conn.socket, cmd) || reader.read_line(net::Clock::now() + 2s, line) != net::ReadStatus::kLine) {
      error = "no reply to " + cmd;
      return false;
    }
    conv.server(as_text(line));
  }
  conv.fin();
  const Bytes bytes = testing::write_pcap(conv.frames());
  testing::write_bytes(pcap, bytes);
  return true;
}

// Shape of a case independent of flow addressing.
std::string case_shape(const TestCase& tc) {
  return escape_bytes(tc.message.bytes) + "|" + std::to_string(tc.field.start) + "," + std::to_string(tc.field.end) +
         "|" + tc.payload.label();
}

struct SharedLab {
  testing::TempDir dir;
  testing::LabTarget faulty;
  fs::path pcap;
  bool recorded = false;
  std::string record_error;
  StatusFile first_run;
  bool first_run_ok = false;
};

void ac1(SharedLab& lab) {
  Check c;
  const auto& oracle = testing::expected()["enumeration"];
  testing::LabTarget benign;
  c.expect(benign.start({}), "harness did not start; ");
  lab.pcap = lab.dir.path() / "recorded.pcap";
  if (c.ok) {
    lab.recorded = record_session(benign, lab.pcap, lab.record_error);
    c.expect(lab.recorded, "recording failed: " + lab.record_error + "; ");
  }
  benign.monitor.stop();

  std::size_t manifest_count = 0;
  if (c.ok) {
    std::ifstream in(lab.pcap, std::ios::binary);
    const Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto recorded = generate_testcases(load_corpus(bytes));
    const auto frozen = generate_testcases(load_corpus(testing::read_fixture("ftp_full.pcap")));
    manifest_count = recorded.size();
    c.expect(recorded.size() == oracle["ftp_full_count"].get<std::size_t>(), "manifest count differs from oracle; ");
    bool same = recorded.size() == frozen.size();
    for (std::size_t i = 0; same && i < recorded.size(); ++i) same = case_shape(recorded[i]) == case_shape(frozen[i]);
    c.expect(same, "recorded manifest differs from the frozen fixture's; ");
  }

  const auto t0 = std::chrono::steady_clock::now();
  c.expect(c.ok && lab.faulty.start({"--fault-overflow", "--fault-format", "--fault-integer"}),
           "faulty harness did not start; ");
  const fs::path out = lab.dir.path() / "run1";
  std::map<std::string, int> hits;
  if (c.ok) {
    auto r = run_command(fuzz_args(out, lab.pcap, lab.faulty));
    c.expect(r.exit_code == 0, "fuzz exit " + std::to_string(r.exit_code) + ": " + r.err + "; ");
    r = run_command({cli_path(), "--output-dir", out.string(), "report", "--manifest",
                     (out / "manifest.jsonl").string(), "--status", (out / "status.jsonl").string()});
    c.expect(r.exit_code == 0, "report exit " + std::to_string(r.exit_code) + ": " + r.err + "; ");
  }
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0).count();
  if (c.ok) {
    const auto report = nlohmann::json::parse(testing::slurp(out / "report.json"));
    for (const auto& f : report["findings"]) {
      hits[f["verdict"].get<std::string>() + "/" + f["payload"]["class"].get<std::string>()]++;
    }
    c.expect(hits["CRASH/string_overflow"] >= 1, "no string_overflow CRASH; ");
    c.expect(hits["HANG/format_string"] >= 1, "no format_string HANG; ");
    c.expect(hits["CRASH/integer_boundary"] >= 1, "no integer_boundary CRASH; ");
    lab.first_run = read_status_file(out / "status.jsonl");
    lab.first_run_ok = true;
    std::vector<std::string> want;
    for (const auto& v : oracle["ftp_full_verdicts"]) want.push_back(v.get<std::string>());
    c.expect(verdicts_of(lab.first_run) == want, "verdicts differ from the harness oracle; ");
    c.expect(report["summary"]["first_crash_test_id"] == oracle["first_crash_string_overflow"],
             "first crash test_id differs from oracle; ");
    c.expect(seconds < 120, "campaign took " + std::to_string(seconds) + " s; ");
  }
  std::ostringstream s;
  s << manifest_count << " cases, 3/3 fault classes (overflow CRASH " << hits["CRASH/string_overflow"]
    << ", format HANG " << hits["HANG/format_string"] << ", integer CRASH " << hits["CRASH/integer_boundary"]
    << "), verdicts match oracle, " << seconds << " s";
  report("AC1", "seeded-bug detection", c, s.str());
}

void ac2(SharedLab& lab) {
  Check c;
  c.expect(lab.recorded, "no recorded capture; ");
  testing::LabTarget benign;
  c.expect(c.ok && benign.start({}), "harness did not start; ");
  std::size_t ok = 0, total = 0;
  if (c.ok) {
    const fs::path out = lab.dir.path() / "benign";
    const auto r = run_command(fuzz_args(out, lab.pcap, benign));
    c.expect(r.exit_code == 0, "fuzz exit " + std::to_string(r.exit_code) + ": " + r.err + "; ");
    if (c.ok) {
      for (const auto& v : verdicts_of(read_status_file(out / "status.jsonl"))) {
        ++total;
        ok += v == "OK";
      }
      c.expect(total == 150 && ok == total, std::to_string(ok) + "/" + std::to_string(total) + " OK; ");
    }
  }
  report("AC2", "zero false positives", c, std::to_string(ok) + "/" + std::to_string(total) + " OK");
}

void ac3() {
  Check c;
  std::vector<std::size_t> lengths;
  for (const Payload& p : string_overflow_schedule()) lengths.push_back(p.size());
  for (std::size_t named : {127, 128, 255, 32767, 32769, 65535, 65536}) {
    c.expect(std::find(lengths.begin(), lengths.end(), named) != lengths.end(),
             "missing length " + std::to_string(named) + "; ");
  }
  c.expect(lengths == std::vector<std::size_t>{127, 128, 255, 256, 32767, 32768, 32769, 65535, 65536},
           "schedule differs from the documented default; ");
  report("AC3", "payload schedule", c, "127 128 255 256 32767 32768 32769 65535 65536");
}

void ac4(SharedLab& lab) {
  Check c;
  const fs::path a = lab.dir.path() / "gen_a", b = lab.dir.path() / "gen_b";
  for (const fs::path& d : {a, b}) {
    const auto r = run_command({cli_path(), "--output-dir", d.string(), "generate", testing::fixture_path("ftp_full.pcap").string()});
    c.expect(r.exit_code == 0, "generate failed: " + r.err + "; ");
  }
  c.expect(c.ok && testing::slurp(a / "manifest.jsonl") == testing::slurp(b / "manifest.jsonl"),
           "manifests differ; ");
  c.expect(lab.first_run_ok, "no first campaign to compare; ");
  if (c.ok) {
    const fs::path out = lab.dir.path() / "run2";
    const auto r = run_command(fuzz_args(out, lab.pcap, lab.faulty));
    c.expect(r.exit_code == 0, "second campaign exit " + std::to_string(r.exit_code) + "; ");
    if (c.ok) {
      const StatusFile second = read_status_file(out / "status.jsonl");
      c.expect(verdicts_of(second) == verdicts_of(lab.first_run), "verdict sequences differ; ");
      c.expect(status_without_timestamps(second) == status_without_timestamps(lab.first_run),
               "status files differ beyond timestamps; ");
    }
  }
  report("AC4", "determinism", c, "byte-identical manifests, identical verdict sequences over two campaigns");
}

// Random interleaved conversations with random segmentation.
struct SyntheticFlow {
  std::uint32_t client_ip, server_ip;
  std::uint16_t client_port, server_port;
  std::string client_bytes, server_bytes;
};

std::vector<testing::Frame> synthesize(std::mt19937& rng, std::vector<SyntheticFlow>& flows) {
  std::uniform_int_distribution<int> nflows(1, 4), nchunks(1, 12), chunk_len(0, 60), byte(0, 255), coin(0, 3);
  std::vector<std::vector<testing::Frame>> per_flow;
  const int n = nflows(rng);
  for (int f = 0; f < n; ++f) {
    SyntheticFlow sf{0x0A000001u + static_cast<std::uint32_t>(f), 0x0A0000FEu,
                     static_cast<std::uint16_t>(30000 + f), static_cast<std::uint16_t>(21 + f), {}, {}};
    std::uint32_t cisn = rng(), sisn = rng();
    if (coin(rng) == 0) cisn = 0xFFFFFFFFu - static_cast<std::uint32_t>(chunk_len(rng));
    if (coin(rng) == 0) sisn = 0xFFFFFFFFu - static_cast<std::uint32_t>(chunk_len(rng));
    testing::Conversation conv(sf.client_ip, sf.client_port, sf.server_ip, sf.server_port, cisn, sisn);
    conv.handshake();
    const int chunks = nchunks(rng);
    for (int i = 0; i < chunks; ++i) {
      std::string data(static_cast<std::size_t>(chunk_len(rng)) + 1, '\0');
      for (char& ch : data) ch = static_cast<char>(byte(rng));
      if (coin(rng) % 2) {
        conv.client(data);
        sf.client_bytes += data;
      } else {
        conv.server(data);
        sf.server_bytes += data;
      }
    }
    conv.fin();
    per_flow.push_back(conv.frames());
    flows.push_back(sf);
  }
  // Interleave flows while keeping each flow's own order.
  std::vector<testing::Frame> out;
  std::vector<std::size_t> next(per_flow.size(), 0);
  for (;;) {
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < per_flow.size(); ++i) {
      if (next[i] < per_flow[i].size()) open.push_back(i);
    }
    if (open.empty()) break;
    const std::size_t pick = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    out.push_back(per_flow[pick][next[pick]++]);
  }
  return out;
}

bool streams_match(const std::vector<TcpFlow>& flows, const std::vector<SyntheticFlow>& want) {
  if (flows.size() != want.size()) return false;
  for (const SyntheticFlow& w : want) {
    const auto it = std::find_if(flows.begin(), flows.end(), [&](const TcpFlow& f) {
      return f.key.sip.value() == w.client_ip && f.key.sp == w.client_port;
    });
    if (it == flows.end()) return false;
    if (to_string(it->client_stream) != w.client_bytes || to_string(it->server_stream) != w.server_bytes) return false;
    if (it->sequence_gap()) return false;
  }
  return true;
}

void ac5() {
  Check c;
  std::mt19937 rng(20261014);
  const int kCaptures = 150;
  int in_order_ok = 0, permuted_ok = 0, permutations = 0;
  for (int i = 0; i < kCaptures; ++i) {
    std::vector<SyntheticFlow> want;
    auto frames = synthesize(rng, want);
    try {
      if (streams_match(assemble_flows(decode_all(parse_capture(testing::write_pcap(frames)))), want)) ++in_order_ok;
      for (int p = 0; p < 3; ++p) {
        std::shuffle(frames.begin(), frames.end(), rng);
        ++permutations;
        if (streams_match(assemble_flows(decode_all(parse_capture(testing::write_pcap(frames, p == 1)))), want)) {
          ++permuted_ok;
        }
      }
    } catch (const std::exception& e) {
      c.expect(false, std::string("capture ") + std::to_string(i) + " threw " + e.what() + "; ");
    }
  }
  c.expect(in_order_ok == kCaptures, std::to_string(in_order_ok) + "/" + std::to_string(kCaptures) + " in-order; ");
  c.expect(permuted_ok == permutations,
           std::to_string(permuted_ok) + "/" + std::to_string(permutations) + " permuted; ");
  report("AC5", "reassembly oracle", c,
         std::to_string(in_order_ok) + " in-order captures and " + std::to_string(permuted_ok) +
             " permutations equal the concatenation oracle");
}

void ac6() {
  Check c;
  std::size_t fields = 0;
  for (const char* name : {"ftp_basic.pcap", "ftp_full.pcap", "six_flows.pcap"}) {
    const Corpus corpus = load_corpus(testing::read_fixture(name));
    for (const FlowCorpus& fc : corpus.flows) {
      for (std::size_t m = 0; m < fc.messages.size(); ++m) {
        for (const FieldSpan& f : fc.fields[m]) {
          const TestCase tc{.test_id = 0,
                            .flow_key = fc.flow.key,
                            .message_index = m,
                            .field = f,
                            .payload = Payload(PayloadClass::kStringOverflow, "identity", f.original_bytes),
                            .message = fc.messages[m],
                            .prefix_messages = {},
                            .server_speaks_first = false};
          ++fields;
          c.expect(render_mutated_message(tc) == fc.messages[m].bytes,
                   std::string(name) + " message " + std::to_string(m) + " not reproduced; ");
        }
      }
    }
  }
  c.expect(fields > 0, "no fields; ");
  report("AC6", "splice inverse", c, std::to_string(fields) + " fields reproduce their messages");
}

void ac7() {
  Check c;
  testing::TempDir dir;
  const fs::path pid_file = dir.path() / "victim.pid";
  testing::LabTarget lab;
  c.expect(lab.start({}, pid_file.string()), "monitor did not start; ");
  auto victim_pid = [&] {
    pid_t pid = 0;
    std::ifstream(pid_file) >> pid;
    return pid;
  };
  std::vector<std::string> transcript;
  std::size_t fuzz_lines = 0;
  if (c.ok) {
    MonitorClient client("127.0.0.1", lab.monitor_port);
    auto ask = [&](const char* verb) {
      std::string reply = client.request(verb);
      transcript.push_back(std::string(verb) + "=" + reply);
      return reply;
    };
    c.expect(ask("STATUS") == "OK RUNNING", "initial STATUS; ");
    ::kill(victim_pid(), SIGKILL);
    std::string reply;
    for (int i = 0; i < 100; ++i) {
      reply = client.request("STATUS");
      if (reply != "OK RUNNING") break;
      std::this_thread::sleep_for(10ms);
    }
    transcript.push_back("STATUS=" + reply);
    c.expect(reply == "OK DOWN signaled", "STATUS after external kill was " + reply + "; ");
    c.expect(ask("RESTART") == "OK RESTARTED 1", "RESTART; ");
    c.expect(ask("STATUS") == "OK RUNNING", "STATUS after restart; ");
    c.expect(ask("KILL") == "OK KILLED", "KILL; ");
    c.expect(ask("STATUS") == "OK DOWN signaled", "STATUS after KILL; ");
    c.expect(ask("RESTART") == "OK RESTARTED 2", "second RESTART; ");
  }
  if (c.ok) {
    testing::wait_for_port(lab.target_port);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> byte(0, 255), len(0, 300), rare(0, 49);
    std::optional<net::ConnectAttempt> conn;
    std::unique_ptr<net::LineReader> reader;
    for (int i = 0; i < 1000 && c.ok; ++i) {
      if (i % 100 == 0) {
        reader.reset();
        conn = net::connect_tcp("127.0.0.1", lab.monitor_port, 2s);
        c.expect(conn->result == net::ConnectResult::kOk, "control reconnect failed; ");
        if (!c.ok) break;
        reader = std::make_unique<net::LineReader>(conn->socket);
      }
      std::string line(static_cast<std::size_t>(rare(rng) == 0 ? 5000 : len(rng)), '\0');
      for (char& ch : line) {
        do ch = static_cast<char>(byte(rng));
        while (ch == '\n');
      }
      std::string_view body(line);
      while (!body.empty() && body.back() == '\r') body.remove_suffix(1);
      if (body == "KILL" || body == "RESTART") continue;
      line += '\n';
      c.expect(net::send_all(conn->socket, line), "send failed at line " + std::to_string(i) + "; ");
      Bytes reply;
      c.expect(reader->read_line(net::Clock::now() + 2s, reply) == net::ReadStatus::kLine,
               "no reply to line " + std::to_string(i) + "; ");
      ++fuzz_lines;
    }
    reader.reset();
    conn.reset();
    c.expect(lab.monitor.running(), "agent died; ");
    MonitorClient client("127.0.0.1", lab.monitor_port);
    const bool alive = ::kill(victim_pid(), 0) == 0;
    const std::string status = client.request("STATUS");
    c.expect(alive && status == "OK RUNNING", "STATUS after fuzzing was " + status + "; ");
  }
  std::string joined;
  for (const auto& t : transcript) joined += (joined.empty() ? "" : ", ") + t;
  report("AC7", "monitor protocol", c, joined + "; " + std::to_string(fuzz_lines) + " random lines, agent alive");
}

void ac8(SharedLab& lab) {
  Check c;
  c.expect(lab.first_run_ok, "no uninterrupted campaign to compare; ");
  const fs::path out = lab.dir.path() / "resumed";
  std::size_t interrupted_at = 0;
  if (c.ok) {
    fs::create_directories(out);
    const fs::path status_path = out / "status.jsonl";
    testing::Child fuzz(fuzz_args(out, lab.pcap, lab.faulty));
    // Interrupt once several outcomes (including a crash or two) are on disk.
    const auto deadline = std::chrono::steady_clock::now() + 120s;
    while (std::chrono::steady_clock::now() < deadline) {
      const std::string text = fs::exists(status_path) ? testing::slurp(status_path) : "";
      interrupted_at = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
      if (interrupted_at > 20) break;
      std::this_thread::sleep_for(20ms);
    }
    ::kill(fuzz.pid(), SIGKILL);
    fuzz.wait_exit(5s);
    const StatusFile partial = read_status_file(status_path);
    interrupted_at = partial.outcomes.size();
    c.expect(interrupted_at > 0 && interrupted_at < 150, "interrupt landed at " + std::to_string(interrupted_at) + "; ");

    std::vector<std::string> args = fuzz_args(out, lab.pcap, lab.faulty);
    args.push_back("--resume");
    const auto r = run_command(args);
    c.expect(r.exit_code == 0, "resume exit " + std::to_string(r.exit_code) + ": " + r.err + "; ");
    if (c.ok) {
      const StatusFile resumed = read_status_file(status_path);
      c.expect(status_without_timestamps(resumed) == status_without_timestamps(lab.first_run),
               "resumed status differs from the uninterrupted run; ");
      // A second resume has nothing to do and leaves the file alone.
      const std::string before = testing::slurp(status_path);
      const auto again = run_command(args);
      c.expect(again.exit_code == 0 && testing::slurp(status_path) == before, "idle resume changed the file; ");
    }
  }
  report("AC8", "resumability", c,
         "killed after " + std::to_string(interrupted_at) + " outcomes; resumed file equals the uninterrupted run");
}

long max_rss_kb() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_maxrss;
}

void ac9() {
  Check c;
  std::vector<Bytes> seeds;
  for (const char* name : {"three_packets.pcap", "three_packets_be.pcap", "ftp_basic.pcap", "ftp_full.pcap", "six_flows.pcap"}) {
    seeds.push_back(testing::read_fixture(name));
  }
  std::mt19937 rng(9);
  std::map<std::string, int> outcomes;
  const long rss_before = max_rss_kb();
  const int kFiles = 10000;
  for (int i = 0; i < kFiles; ++i) {
    Bytes b = seeds[static_cast<std::size_t>(i) % seeds.size()];
    const int edits = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int e = 0; e < edits && !b.empty(); ++e) {
      const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng);
      switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0: b[pos] = static_cast<std::uint8_t>(rng()); break;
        case 1: b[pos] ^= static_cast<std::uint8_t>(1u << (rng() % 8)); break;
        case 2: b.resize(pos); break;
        case 3: b.insert(b.begin() + static_cast<std::ptrdiff_t>(pos), static_cast<std::size_t>(rng() % 32), static_cast<std::uint8_t>(rng())); break;
        case 4:
          for (std::size_t k = pos; k < std::min(b.size(), pos + 4); ++k) b[k] = 0xFF;
          break;
        default: {
          const std::size_t len = std::min<std::size_t>(b.size() - pos, rng() % 64);
          Bytes copy(b.begin() + static_cast<std::ptrdiff_t>(pos), b.begin() + static_cast<std::ptrdiff_t>(pos + len));
          b.insert(b.end(), copy.begin(), copy.end());
        }
      }
    }
    try {
      const Corpus corpus = load_corpus(b);
      GeneratorConfig small;
      small.string_lengths = {1, 300};
      try {
        generate_testcases(corpus, small);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyCorpus) throw;
      }
      outcomes["parsed"]++;
    } catch (const Error& e) {
      outcomes[std::string(to_string(e.code()))]++;
    } catch (const std::exception& e) {
      outcomes["untyped"]++;
      c.expect(false, std::string("untyped exception: ") + e.what() + "; ");
    }
  }
  const long growth_mb = (max_rss_kb() - rss_before) / 1024;
  c.expect(growth_mb < 64, "peak RSS grew " + std::to_string(growth_mb) + " MiB; ");
  std::string summary = std::to_string(kFiles) + " mutated files:";
  for (const auto& [k, v] : outcomes) summary += " " + k + "=" + std::to_string(v);
  summary += "; peak RSS growth " + std::to_string(growth_mb) + " MiB (peak " + std::to_string(max_rss_kb() / 1024) +
             " MiB)";
  report("AC9", "pcap robustness", c, summary);
}

void guarded(const char* id, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    std::cout << id << " FAIL  unexpected exception: " << e.what() << std::endl;
    ++g_failures;
  }
}

}  // namespace

int main() {
  net::ignore_sigpipe();
  SharedLab lab;
  guarded("AC1", [&] { ac1(lab); });
  guarded("AC2", [&] { ac2(lab); });
  guarded("AC3", [] { ac3(); });
  guarded("AC4", [&] { ac4(lab); });
  guarded("AC5", [] { ac5(); });
  guarded("AC6", [] { ac6(); });
  guarded("AC7", [] { ac7(); });
  guarded("AC8", [&] { ac8(lab); });
  guarded("AC9", [] { ac9(); });
  std::cout << (g_failures == 0 ? "all acceptance criteria passed" : std::to_string(g_failures) + " criteria failed")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}
