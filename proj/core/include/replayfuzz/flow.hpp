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

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "replayfuzz/bytes.hpp"
#include "replayfuzz/pcap.hpp"

namespace replayfuzz {

// (sip, sp) is always the elected client endpoint, so both directions of a
// session share one key. Only TCP is carried.
struct FlowKey {
  Ipv4Address sip;
  std::uint16_t sp = 0;
  Ipv4Address dip;
  std::uint16_t dp = 0;

  std::string to_string() const;  // "10.0.0.1:1010 -> 10.0.0.2:80 tcp"
  friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

enum class Direction { kClientToServer, kServerToClient };

std::string_view to_string(Direction direction);

struct FlowSegment {
  std::size_t packet_index = 0;
  Direction direction = Direction::kClientToServer;
  std::uint32_t seq = 0;
  Bytes payload;
};

// A contiguous stretch of a reassembled stream whose bytes all came from
// one captured packet.
struct StreamChunk {
  std::size_t stream_offset = 0;
  std::size_t length = 0;
  std::size_t packet_index = 0;
};

struct TcpFlow {
  FlowKey key;
  Bytes client_stream;
  Bytes server_stream;
  std::vector<FlowSegment> segments;  // capture order
  std::vector<StreamChunk> client_chunks;
  std::vector<StreamChunk> server_chunks;
  bool handshake_seen = false;
  bool client_gap = false;  // SequenceGap in the client direction
  bool server_gap = false;
  bool overlap_seen = false;  // an overlapping retransmission was trimmed

  bool sequence_gap() const { return client_gap || server_gap; }
};

struct Message {
  FlowKey flow_key;
  Direction direction = Direction::kClientToServer;
  std::size_t message_index = 0;
  Bytes bytes;
  std::size_t stream_offset = 0;
  std::size_t first_packet_index = 0;

  bool is_client() const { return direction == Direction::kClientToServer; }
  // 2 for CRLF, 1 for LF, 0 for an unterminated trailing message.
  std::size_t terminator_length() const;
};

// Per-direction stream limit; larger flows are rejected with kFlowTooLarge.
inline constexpr std::size_t kMaxStreamBytes = std::size_t{1} << 31;

// Groups segments per canonical 5-tuple and reassembles both directions.
// Flows come back in order of first appearance.
std::vector<TcpFlow> assemble_flows(const std::vector<TcpSegment>& segments);

// Splits both streams at LF and merges them in capture order of each
// message's first byte.
std::vector<Message> extract_messages(const TcpFlow& flow);

}  // namespace replayfuzz
