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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "replayfuzz/bytes.hpp"

namespace replayfuzz {

// Classic libpcap capture files, Ethernet link type only.
//
// Global header (24 bytes): magic u32, version u16.u16, thiszone i32,
// sigfigs u32, snaplen u32, linktype u32. Each record: ts_sec u32,
// ts_usec u32, incl_len u32, orig_len u32, then incl_len bytes. The byte
// order of every header field follows the magic.

inline constexpr std::uint32_t kPcapMagic = 0xA1B2C3D4;
inline constexpr std::uint32_t kPcapMagicSwapped = 0xD4C3B2A1;
inline constexpr std::uint32_t kLinkTypeEthernet = 1;
inline constexpr std::size_t kPcapGlobalHeaderSize = 24;
inline constexpr std::size_t kPcapRecordHeaderSize = 16;

enum class ByteOrder { kNative, kSwapped };

struct RawPacket {
  std::size_t index = 0;
  std::uint32_t ts_sec = 0;
  std::uint32_t ts_usec = 0;
  std::uint32_t orig_len = 0;
  Bytes data;
};

struct CaptureFile {
  ByteOrder byte_order = ByteOrder::kNative;
  std::uint16_t version_major = 2;
  std::uint16_t version_minor = 4;
  std::uint32_t snaplen = 0;
  std::uint32_t linktype = kLinkTypeEthernet;
  std::vector<RawPacket> packets;
};

// Throws Error{kMalformedCapture | kUnsupportedLinkType | kUnsupportedFormat}.
CaptureFile parse_capture(ByteView bytes);
CaptureFile read_capture_file(const std::filesystem::path& path);

class Ipv4Address {
 public:
  constexpr Ipv4Address() = default;
  constexpr explicit Ipv4Address(std::uint32_t host_order) : value_(host_order) {}

  // Throws Error{kInvalidConfig} on anything but a dotted quad.
  static Ipv4Address parse(std::string_view dotted);

  constexpr std::uint32_t value() const { return value_; }
  std::string to_string() const;

  friend constexpr auto operator<=>(Ipv4Address, Ipv4Address) = default;

 private:
  std::uint32_t value_ = 0;
};

struct TcpFlags {
  bool syn = false;
  bool ack = false;
  bool fin = false;
  bool rst = false;
  bool psh = false;

  static TcpFlags from_byte(std::uint8_t bits);
  std::uint8_t to_byte() const;
  friend bool operator==(const TcpFlags&, const TcpFlags&) = default;
};

struct TcpSegment {
  std::size_t packet_index = 0;
  Ipv4Address src_ip;
  std::uint16_t src_port = 0;
  Ipv4Address dst_ip;
  std::uint16_t dst_port = 0;
  std::uint32_t seq = 0;
  std::uint32_t ack = 0;
  TcpFlags flags;
  Bytes payload;
};

// std::nullopt is the NotTcp skip marker: non-IPv4 ethertypes, non-TCP
// protocols, non-initial IPv4 fragments, and doubly VLAN-tagged frames.
// Throws Error{kMalformedPacket} when the frame is shorter than the headers
// it declares.
std::optional<TcpSegment> decode_segment(const RawPacket& packet,
                                         std::uint32_t linktype = kLinkTypeEthernet);

// Decodes every packet of a capture, dropping NotTcp frames.
std::vector<TcpSegment> decode_all(const CaptureFile& capture);

}  // namespace replayfuzz
