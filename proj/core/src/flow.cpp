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

#include "replayfuzz/flow.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <optional>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

namespace {

struct Endpoint {
  Ipv4Address ip;
  std::uint16_t port = 0;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct PairKey {
  Endpoint low;
  Endpoint high;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

PairKey pair_of(const TcpSegment& s) {
  Endpoint a{s.src_ip, s.src_port};
  Endpoint b{s.dst_ip, s.dst_port};
  return a < b ? PairKey{a, b} : PairKey{b, a};
}

struct Run {
  Bytes data;
  std::size_t packet_index = 0;
};

// Reassembles one direction. Runs are disjoint and keyed by stream offset.
class DirectionAssembler {
 public:
  void add(const TcpSegment& s) {
    if (s.flags.syn && !syn_seq_) syn_seq_ = s.seq;
    if (!s.payload.empty()) data_.push_back(&s);
  }

  // Returns the stream; sets gap/overlap flags.
  Bytes finish(std::vector<StreamChunk>& chunks, bool& gap, bool& overlap) {
    if (data_.empty()) return {};
    const std::uint32_t base = base_seq();
    std::map<std::size_t, Run> runs;
    for (const TcpSegment* s : data_) insert(runs, *s, base, overlap);

    Bytes stream;
    std::size_t expected = 0;
    for (auto& [offset, run] : runs) {
      if (offset != expected) gap = true;
      chunks.push_back({stream.size(), run.data.size(), run.packet_index});
      stream.insert(stream.end(), run.data.begin(), run.data.end());
      expected = offset + run.data.size();
    }
    return stream;
  }

 private:
  std::uint32_t base_seq() const {
    if (syn_seq_) return *syn_seq_ + 1;
    // No SYN: the earliest sequence number in serial order.
    const std::uint32_t first = data_.front()->seq;
    std::int32_t lowest = 0;
    for (const TcpSegment* s : data_) {
      lowest = std::min(lowest, static_cast<std::int32_t>(s->seq - first));
    }
    return first + static_cast<std::uint32_t>(lowest);
  }

  static void insert(std::map<std::size_t, Run>& runs, const TcpSegment& s, std::uint32_t base,
                     bool& overlap) {
    const std::uint32_t delta = s.seq - base;
    std::size_t skip = 0;
    std::size_t start = delta;
    if (delta >= 0x80000000u) {
      // Starts before the stream origin (e.g. retransmitted SYN payload).
      skip = std::size_t{0x100000000ull - delta};
      if (skip >= s.payload.size()) return;
      start = 0;
    }
    const std::size_t end = start + (s.payload.size() - skip);
    if (end > kMaxStreamBytes) {
      throw Error(ErrorCode::kFlowTooLarge, "stream exceeds 2 GiB at packet " +
                                                std::to_string(s.packet_index));
    }
    auto payload_at = [&](std::size_t offset) {
      return s.payload.begin() + static_cast<std::ptrdiff_t>(skip + (offset - start));
    };

    // Walk existing runs that intersect [start, end) and fill the holes.
    std::size_t cursor = start;
    auto it = runs.upper_bound(start);
    if (it != runs.begin()) {
      auto prev = std::prev(it);
      if (prev->first + prev->second.data.size() > start) it = prev;
    }
    std::vector<std::pair<std::size_t, std::size_t>> holes;
    for (; it != runs.end() && it->first < end; ++it) {
      const std::size_t run_start = it->first;
      const std::size_t run_end = run_start + it->second.data.size();
      if (run_start > cursor) holes.emplace_back(cursor, run_start);
      // Compare the covered stretch; differing bytes mean an overlap rewrite.
      const std::size_t lo = std::max(cursor, run_start);
      const std::size_t hi = std::min(end, run_end);
      if (lo < hi &&
          !std::equal(payload_at(lo), payload_at(hi),
                      it->second.data.begin() + static_cast<std::ptrdiff_t>(lo - run_start))) {
        overlap = true;
      }
      cursor = std::max(cursor, run_end);
    }
    if (cursor < end) holes.emplace_back(cursor, end);
    const bool partial = !(holes.size() == 1 && holes[0].first == start && holes[0].second == end) &&
                         !holes.empty();
    if (partial) overlap = true;
    for (auto [lo, hi] : holes) {
      runs.emplace(lo, Run{Bytes(payload_at(lo), payload_at(hi)), s.packet_index});
    }
  }

  std::optional<std::uint32_t> syn_seq_;
  std::vector<const TcpSegment*> data_;
};

}  // namespace

std::string FlowKey::to_string() const {
  return sip.to_string() + ":" + std::to_string(sp) + " -> " + dip.to_string() + ":" +
         std::to_string(dp) + " tcp";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::kClientToServer ? "client_to_server" : "server_to_client";
}

std::size_t Message::terminator_length() const {
  const std::size_t n = bytes.size();
  if (n == 0 || bytes[n - 1] != '\n') return 0;
  return (n >= 2 && bytes[n - 2] == '\r') ? 2 : 1;
}

std::vector<TcpFlow> assemble_flows(const std::vector<TcpSegment>& segments) {
  std::map<PairKey, std::size_t> index_of;
  std::vector<std::vector<const TcpSegment*>> groups;
  for (const TcpSegment& s : segments) {
    auto [it, inserted] = index_of.try_emplace(pair_of(s), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(&s);
  }

  std::vector<TcpFlow> flows;
  flows.reserve(groups.size());
  for (const auto& group : groups) {
    TcpFlow flow;
    const TcpSegment* client_seg = nullptr;
    for (const TcpSegment* s : group) {
      if (s->flags.syn && !s->flags.ack) {
        client_seg = s;
        flow.handshake_seen = true;
        break;
      }
    }
    if (!client_seg) {
      auto talker = std::find_if(group.begin(), group.end(),
                                 [](const TcpSegment* s) { return !s->payload.empty(); });
      client_seg = talker != group.end() ? *talker : group.front();
    }
    const Endpoint client{client_seg->src_ip, client_seg->src_port};
    flow.key = FlowKey{client_seg->src_ip, client_seg->src_port, client_seg->dst_ip,
                       client_seg->dst_port};

    DirectionAssembler to_server;
    DirectionAssembler to_client;
    for (const TcpSegment* s : group) {
      const bool from_client = Endpoint{s->src_ip, s->src_port} == client;
      (from_client ? to_server : to_client).add(*s);
      flow.segments.push_back({s->packet_index,
                               from_client ? Direction::kClientToServer : Direction::kServerToClient,
                               s->seq, s->payload});
    }
    flow.client_stream = to_server.finish(flow.client_chunks, flow.client_gap, flow.overlap_seen);
    flow.server_stream = to_client.finish(flow.server_chunks, flow.server_gap, flow.overlap_seen);
    flows.push_back(std::move(flow));
  }
  return flows;
}

namespace {

std::size_t packet_at(const std::vector<StreamChunk>& chunks, std::size_t offset) {
  auto it = std::upper_bound(chunks.begin(), chunks.end(), offset,
                             [](std::size_t off, const StreamChunk& c) { return off < c.stream_offset; });
  return it == chunks.begin() ? 0 : std::prev(it)->packet_index;
}

void split_stream(const TcpFlow& flow, Direction direction, std::vector<Message>& out) {
  const bool client = direction == Direction::kClientToServer;
  const Bytes& stream = client ? flow.client_stream : flow.server_stream;
  const auto& chunks = client ? flow.client_chunks : flow.server_chunks;
  std::size_t start = 0;
  while (start < stream.size()) {
    auto lf = std::find(stream.begin() + static_cast<std::ptrdiff_t>(start), stream.end(), '\n');
    const std::size_t end = lf == stream.end() ? stream.size()
                                               : static_cast<std::size_t>(lf - stream.begin()) + 1;
    Message m;
    m.flow_key = flow.key;
    m.direction = direction;
    m.bytes.assign(stream.begin() + static_cast<std::ptrdiff_t>(start),
                   stream.begin() + static_cast<std::ptrdiff_t>(end));
    m.stream_offset = start;
    m.first_packet_index = packet_at(chunks, start);
    out.push_back(std::move(m));
    start = end;
  }
}

}  // namespace

std::vector<Message> extract_messages(const TcpFlow& flow) {
  std::vector<Message> messages;
  split_stream(flow, Direction::kClientToServer, messages);
  split_stream(flow, Direction::kServerToClient, messages);
  std::stable_sort(messages.begin(), messages.end(), [](const Message& a, const Message& b) {
    if (a.first_packet_index != b.first_packet_index) return a.first_packet_index < b.first_packet_index;
    if (a.direction != b.direction) return a.direction == Direction::kClientToServer;
    return a.stream_offset < b.stream_offset;
  });
  for (std::size_t i = 0; i < messages.size(); ++i) messages[i].message_index = i;
  return messages;
}

}  // namespace replayfuzz
