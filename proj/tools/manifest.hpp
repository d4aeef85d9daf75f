// Copyright 2026 The sourceloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sourceloc::cli {

/// Provenance for one output file.
struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;
  std::uint64_t seed = 0;
  std::string version = SOURCELOC_VERSION;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, sha256 hex

  void add_input(const std::string& path);
  std::string to_json() const;
  /// Single-line form for `#` comment headers.
  std::vector<std::string> comment_lines() const;
  /// Writes `<output>.manifest.json`.
  void write_sidecar(const std::string& output_path) const;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace sourceloc::cli
