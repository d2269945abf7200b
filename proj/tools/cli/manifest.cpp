// Copyright 2026 The exarray Authors.
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

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iterator>
#include <memory>

#include "exarray/error.hpp"

#ifndef EXARRAY_VERSION
#define EXARRAY_VERSION "0.0.0"
#endif

namespace exarray::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1)
    throw Error("SHA-256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xf]);
  }
  return hex;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open '" + path + "'", 0);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

std::string tool_version() { return EXARRAY_VERSION; }

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "exarray.manifest/1";
  j["tool"] = "exarray";
  j["version"] = tool_version();
  j["command"] = command;
  j["args"] = args;
  j["seed"] = seed;
  nlohmann::ordered_json in = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : inputs)
    in.push_back({{"path", path}, {"sha256", digest}});
  j["inputs"] = in;
  j["config"] = config;
  if (!unit_labels.empty()) {
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < unit_labels.size(); ++i)
      labels.push_back({{"index", i + 1}, {"label", unit_labels[i]}});
    j["unit_labels"] = labels;
  }
  return j;
}

void write_sidecar(const std::string& path, const RunManifest& manifest,
                   double wall_clock_seconds) {
  nlohmann::ordered_json j = manifest.to_json();
  j["wall_clock_seconds"] = wall_clock_seconds;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace exarray::cli
