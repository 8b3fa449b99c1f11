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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <nlohmann/json.hpp>

#include "replayfuzz/bytes.hpp"

namespace replayfuzz::testing {

#ifndef REPLAYFUZZ_FIXTURE_DIR
#define REPLAYFUZZ_FIXTURE_DIR "fixtures"
#endif

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(REPLAYFUZZ_FIXTURE_DIR) / name;
}

inline Bytes read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline const nlohmann::json& expected() {
  static const nlohmann::json doc = [] {
    std::ifstream in(fixture_path("expected/fixtures.json"));
    return nlohmann::json::parse(in);
  }();
  return doc;
}

inline void write_bytes(const std::filesystem::path& path, ByteView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace replayfuzz::testing
