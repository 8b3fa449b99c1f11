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

#include "replayfuzz/bytes.hpp"

#include <cstdio>

#include "replayfuzz/error.hpp"

namespace replayfuzz {

std::string escape_bytes(ByteView bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (std::uint8_t b : bytes) {
    if (b == '\\') {
      out += "\\\\";
    } else if (b >= 0x20 && b < 0x7f) {
      out += static_cast<char>(b);
    } else {
      char buf[5];
      std::snprintf(buf, sizeof buf, "\\x%02x", b);
      out += buf;
    }
  }
  return out;
}

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes unescape_bytes(std::string_view text) {
  Bytes out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '\\') {
      out.push_back(static_cast<std::uint8_t>(c));
      continue;
    }
    if (i + 1 < text.size() && text[i + 1] == '\\') {
      out.push_back('\\');
      ++i;
      continue;
    }
    if (i + 3 < text.size() && text[i + 1] == 'x') {
      int hi = hex_digit(text[i + 2]);
      int lo = hex_digit(text[i + 3]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
        i += 3;
        continue;
      }
    }
    throw Error(ErrorCode::kInvalidConfig, "bad escape sequence in byte string");
  }
  return out;
}

std::string preview_bytes(ByteView bytes, std::size_t limit) {
  if (bytes.size() <= limit) return escape_bytes(bytes);
  return escape_bytes(bytes.first(limit)) + "...";
}

std::uint64_t fnv1a64(ByteView bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedCapture: return "MalformedCapture";
    case ErrorCode::kUnsupportedLinkType: return "UnsupportedLinkType";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kMalformedPacket: return "MalformedPacket";
    case ErrorCode::kFlowTooLarge: return "FlowTooLarge";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kSpanMismatch: return "SpanMismatch";
    case ErrorCode::kMonitorUnreachable: return "MonitorUnreachable";
    case ErrorCode::kTargetNeverUp: return "TargetNeverUp";
    case ErrorCode::kManifestMismatch: return "ManifestMismatch";
    case ErrorCode::kBindFailure: return "BindFailure";
    case ErrorCode::kSpawnFailure: return "SpawnFailure";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace replayfuzz
