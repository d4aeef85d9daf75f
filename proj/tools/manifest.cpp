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

#include "manifest.hpp"

#include <array>
#include <fstream>
#include <iterator>

#include <json.hpp>
#include <openssl/evp.h>

#include "sourceloc/error.hpp"

namespace sourceloc::cli {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 15];
  }
  return hex;
}

void RunManifest::add_input(const std::string& path) {
  input_digests.emplace_back(path, sha256_file(path));
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["arguments"] = arguments;
  j["seed"] = seed;
  j["version"] = version;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : input_digests) {
    j["inputs"].push_back({{"path", path}, {"sha256", digest}});
  }
  return j.dump(2);
}

std::vector<std::string> RunManifest::comment_lines() const {
  std::string args;
  for (const auto& a : arguments) args += (args.empty() ? "" : " ") + a;
  std::vector<std::string> out = {"command: " + command, "arguments: " + args,
                                  "seed: " + std::to_string(seed), "version: " + version};
  for (const auto& [path, digest] : input_digests) out.push_back("input: " + path + " sha256=" + digest);
  return out;
}

void RunManifest::write_sidecar(const std::string& output_path) const {
  const std::string path = output_path + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << to_json() << '\n';
}

}  // namespace sourceloc::cli
