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

#ifndef EXARRAY_TOOLS_MANIFEST_HPP_
#define EXARRAY_TOOLS_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace exarray::cli {

std::string sha256_hex(const std::string& bytes);
// Throws exarray::IngestionError when the file cannot be read.
std::string sha256_file(const std::string& path);

// Everything needed to reproduce a report. Wall-clock time is kept out of
// this record so that reports stay byte-identical across reruns; it goes to
// the sidecar file only.
struct RunManifest {
  std::string command;
  std::vector<std::string> args;  // effective arguments, seed made explicit
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  nlohmann::ordered_json config;
  std::uint64_t seed = 0;
  std::vector<std::string> unit_labels;  // internal index i + 1 -> label

  nlohmann::ordered_json to_json() const;
};

std::string tool_version();

// Writes `path` with the manifest plus wall-clock seconds.
void write_sidecar(const std::string& path, const RunManifest& manifest,
                   double wall_clock_seconds);

}  // namespace exarray::cli

#endif  // EXARRAY_TOOLS_MANIFEST_HPP_
