// Copyright 2026 The qkernel-lab Authors
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

/**
 * @file manifest.hpp
 * @brief Run manifests written next to every CLI output.
 *
 * A manifest records the subcommand, every flag with its resolved value,
 * the master seed, SHA-256 digests of the input and output files, and the
 * tool version. The thread count is left out because it never changes
 * results. Replaying a manifest re-runs the subcommand with the same flags.
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qkl {

struct FileDigest {
  std::string role;  ///< flag name, e.g. "dataset" or "out"
  std::string path;
  std::string sha256;

  bool operator==(const FileDigest&) const = default;
};

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> flags;  ///< in declaration order
  std::uint64_t master_seed = 0;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  std::string tool_version;

  bool operator==(const RunManifest&) const = default;
};

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// `<out>.manifest.json`
std::filesystem::path manifest_path(const std::filesystem::path& out);

void write_manifest(std::ostream& os, const RunManifest& m);
RunManifest read_manifest(std::istream& is);

/// Throws std::runtime_error naming the first input whose current digest
/// differs from the recorded one.
void verify_inputs(const RunManifest& m);

}  // namespace qkl
