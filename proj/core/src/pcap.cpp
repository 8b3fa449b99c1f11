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

#include "replayfuzz/pcap.hpp"

#include <charconv>
#include <fstream>
#include <iterator>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

namespace {

constexpr std::uint32_t kPcapngMagic = 0x0A0D0D0A;
constexpr std::uint32_t kNanosecondMagic = 0xA1B23C4D;

constexpr std::size_t kEthernetHeader = 14;
constexpr std::uint16_t kEtherTypeIpv4 = 0x0800;
constexpr std::uint16_t kEtherTypeVlan = 0x8100;
constexpr std::uint8_t kIpProtocolTcp = 6;

std::uint32_t load_le32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

std::uint32_t load_be32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} << 24 | std::uint32_t{p[1]} << 16 | std::uint32_t{p[2]} << 8 |
         std::uint32_t{p[3]};
}

std::uint16_t load_be16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] << 8 | p[1]);
}

std::uint16_t load_le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

// Header fields in a little-endian-magic file are little-endian.
class FieldReader {
 public:
  explicit FieldReader(bool big_endian) : big_endian_(big_endian) {}
  std::uint32_t u32(const std::uint8_t* p) const { return big_endian_ ? load_be32(p) : load_le32(p); }
  std::uint16_t u16(const std::uint8_t* p) const { return big_endian_ ? load_be16(p) : load_le16(p); }

 private:
  bool big_endian_;
};

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedCapture, what);
}

[[noreturn]] void malformed_packet(const RawPacket& packet, const std::string& what) {
  throw Error(ErrorCode::kMalformedPacket,
              "packet " + std::to_string(packet.index) + ": " + what);
}

}  // namespace

CaptureFile parse_capture(ByteView bytes) {
  if (bytes.size() < kPcapGlobalHeaderSize) {
    malformed("input is " + std::to_string(bytes.size()) + " bytes, shorter than the 24-byte header");
  }
  const std::uint32_t magic_le = load_le32(bytes.data());
  const std::uint32_t magic_be = load_be32(bytes.data());
  if (magic_le == kPcapngMagic) {
    throw Error(ErrorCode::kUnsupportedFormat, "unsupported format: pcapng");
  }

  bool big_endian;
  if (magic_le == kPcapMagic) {
    big_endian = false;
  } else if (magic_be == kPcapMagic) {
    big_endian = true;
  } else if (magic_le == kNanosecondMagic || magic_be == kNanosecondMagic) {
    malformed("unknown magic (nanosecond pcap is not supported)");
  } else {
    malformed("unknown magic 0x" + hex64(magic_le).substr(8));
  }

  CaptureFile capture;
  // The file's byte order matches ours when the little-endian magic reads
  // correctly on this (little-endian) host.
  capture.byte_order = big_endian ? ByteOrder::kSwapped : ByteOrder::kNative;
  const FieldReader rd(big_endian);
  const std::uint8_t* h = bytes.data();
  capture.version_major = rd.u16(h + 4);
  capture.version_minor = rd.u16(h + 6);
  capture.snaplen = rd.u32(h + 16);
  capture.linktype = rd.u32(h + 20);
  if (capture.linktype != kLinkTypeEthernet) {
    throw Error(ErrorCode::kUnsupportedLinkType,
                "link type " + std::to_string(capture.linktype) + " (only Ethernet is supported)");
  }

  std::size_t pos = kPcapGlobalHeaderSize;
  while (pos < bytes.size()) {
    if (bytes.size() - pos < kPcapRecordHeaderSize) {
      malformed("truncated record header at offset " + std::to_string(pos));
    }
    const std::uint8_t* r = bytes.data() + pos;
    RawPacket packet;
    packet.index = capture.packets.size();
    packet.ts_sec = rd.u32(r);
    packet.ts_usec = rd.u32(r + 4);
    const std::uint32_t incl_len = rd.u32(r + 8);
    packet.orig_len = rd.u32(r + 12);
    pos += kPcapRecordHeaderSize;
    if (packet.ts_usec >= 1'000'000) {
      malformed("packet " + std::to_string(packet.index) + ": ts_usec out of range");
    }
    if (incl_len > capture.snaplen) {
      malformed("packet " + std::to_string(packet.index) + ": captured length exceeds snaplen");
    }
    if (incl_len > bytes.size() - pos) {
      malformed("packet " + std::to_string(packet.index) + ": truncated packet data");
    }
    packet.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                       bytes.begin() + static_cast<std::ptrdiff_t>(pos + incl_len));
    pos += incl_len;
    capture.packets.push_back(std::move(packet));
  }
  return capture;
}

CaptureFile read_capture_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_capture(bytes);
}

Ipv4Address Ipv4Address::parse(std::string_view dotted) {
  std::uint32_t value = 0;
  const char* p = dotted.data();
  const char* end = dotted.data() + dotted.size();
  for (int octet = 0; octet < 4; ++octet) {
    unsigned part = 0;
    auto [next, ec] = std::from_chars(p, end, part);
    if (ec != std::errc() || next == p || part > 255) {
      throw Error(ErrorCode::kInvalidConfig, "not an IPv4 address: " + std::string(dotted));
    }
    value = value << 8 | part;
    p = next;
    if (octet < 3) {
      if (p == end || *p != '.') {
        throw Error(ErrorCode::kInvalidConfig, "not an IPv4 address: " + std::string(dotted));
      }
      ++p;
    }
  }
  if (p != end) throw Error(ErrorCode::kInvalidConfig, "not an IPv4 address: " + std::string(dotted));
  return Ipv4Address(value);
}

std::string Ipv4Address::to_string() const {
  return std::to_string(value_ >> 24) + "." + std::to_string(value_ >> 16 & 0xff) + "." +
         std::to_string(value_ >> 8 & 0xff) + "." + std::to_string(value_ & 0xff);
}

TcpFlags TcpFlags::from_byte(std::uint8_t bits) {
  return TcpFlags{.syn = (bits & 0x02) != 0,
                  .ack = (bits & 0x10) != 0,
                  .fin = (bits & 0x01) != 0,
                  .rst = (bits & 0x04) != 0,
                  .psh = (bits & 0x08) != 0};
}

std::uint8_t TcpFlags::to_byte() const {
  return static_cast<std::uint8_t>((fin ? 0x01 : 0) | (syn ? 0x02 : 0) | (rst ? 0x04 : 0) |
                                   (psh ? 0x08 : 0) | (ack ? 0x10 : 0));
}

std::optional<TcpSegment> decode_segment(const RawPacket& packet, std::uint32_t linktype) {
  if (linktype != kLinkTypeEthernet) {
    throw Error(ErrorCode::kUnsupportedLinkType, "link type " + std::to_string(linktype));
  }
  const Bytes& d = packet.data;
  if (d.size() < kEthernetHeader) malformed_packet(packet, "shorter than an Ethernet header");

  std::size_t l3 = kEthernetHeader;
  std::uint16_t ethertype = load_be16(d.data() + 12);
  if (ethertype == kEtherTypeVlan) {
    if (d.size() < l3 + 4) malformed_packet(packet, "truncated VLAN tag");
    ethertype = load_be16(d.data() + 16);
    l3 += 4;
    if (ethertype == kEtherTypeVlan) return std::nullopt;
  }
  if (ethertype != kEtherTypeIpv4) return std::nullopt;

  if (d.size() < l3 + 20) malformed_packet(packet, "truncated IPv4 header");
  const std::uint8_t* ip = d.data() + l3;
  if ((ip[0] >> 4) != 4) malformed_packet(packet, "IPv4 ethertype with version " + std::to_string(ip[0] >> 4));
  const std::size_t ihl = std::size_t{ip[0] & 0x0fu} * 4;
  if (ihl < 20) malformed_packet(packet, "IP header length below 20");
  const std::size_t total_length = load_be16(ip + 2);
  if (total_length < ihl) malformed_packet(packet, "IP total length below header length");
  if (d.size() < l3 + total_length) malformed_packet(packet, "frame shorter than IP total length");

  const std::uint16_t fragment = load_be16(ip + 6);
  if ((fragment & 0x1fff) != 0) return std::nullopt;  // non-initial fragment
  if (ip[9] != kIpProtocolTcp) return std::nullopt;

  const std::uint8_t* tcp = ip + ihl;
  const std::size_t tcp_available = total_length - ihl;
  if (tcp_available < 20) malformed_packet(packet, "truncated TCP header");
  const std::size_t data_offset = std::size_t{static_cast<std::uint8_t>(tcp[12] >> 4)} * 4;
  if (data_offset < 20) malformed_packet(packet, "TCP data offset below 5");
  if (data_offset > tcp_available) malformed_packet(packet, "TCP header exceeds IP payload");

  TcpSegment seg;
  seg.packet_index = packet.index;
  seg.src_ip = Ipv4Address(load_be32(ip + 12));
  seg.dst_ip = Ipv4Address(load_be32(ip + 16));
  seg.src_port = load_be16(tcp);
  seg.dst_port = load_be16(tcp + 2);
  seg.seq = load_be32(tcp + 4);
  seg.ack = load_be32(tcp + 8);
  seg.flags = TcpFlags::from_byte(tcp[13]);
  seg.payload.assign(tcp + data_offset, tcp + tcp_available);
  return seg;
}

std::vector<TcpSegment> decode_all(const CaptureFile& capture) {
  std::vector<TcpSegment> out;
  for (const RawPacket& p : capture.packets) {
    if (auto seg = decode_segment(p, capture.linktype)) out.push_back(std::move(*seg));
  }
  return out;
}

}  // namespace replayfuzz
