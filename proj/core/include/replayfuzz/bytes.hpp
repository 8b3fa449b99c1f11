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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace replayfuzz {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline Bytes to_bytes(std::string_view text) {
  return Bytes(text.begin(), text.end());
}

inline std::string_view as_text(ByteView bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

inline std::string to_string(ByteView bytes) { return std::string(as_text(bytes)); }

// Reversible printable form used in JSON documents: printable ASCII passes
// through, backslash becomes "\\", everything else becomes "\xNN".
std::string escape_bytes(ByteView bytes);
Bytes unescape_bytes(std::string_view text);

// First `limit` bytes, escaped, with "..." appended when truncated.
std::string preview_bytes(ByteView bytes, std::size_t limit = 48);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(ByteView bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
inline std::uint64_t fnv1a64(std::string_view text) {
  return fnv1a64(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}
std::string hex64(std::uint64_t value);

}  // namespace replayfuzz
