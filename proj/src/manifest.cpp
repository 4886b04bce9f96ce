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

#include "qkl/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

#include "qkl/serialization.hpp"

namespace qkl {

using nlohmann::json;
using nlohmann::ordered_json;

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::filesystem::path manifest_path(const std::filesystem::path& out) {
  return std::filesystem::path(out.string() + ".manifest.json");
}

namespace {

ordered_json digests_json(const std::vector<FileDigest>& list) {
  ordered_json a = ordered_json::array();
  for (const auto& d : list) a.push_back({{"role", d.role}, {"path", d.path}, {"sha256", d.sha256}});
  return a;
}

std::vector<FileDigest> digests_from(const json& a) {
  std::vector<FileDigest> out;
  for (const auto& d : a) {
    out.push_back({d.at("role").get<std::string>(), d.at("path").get<std::string>(),
                   d.at("sha256").get<std::string>()});
  }
  return out;
}

}  // namespace

void write_manifest(std::ostream& os, const RunManifest& m) {
  ordered_json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "manifest";
  j["command"] = m.command;
  ordered_json flags = ordered_json::array();
  for (const auto& [k, v] : m.flags) flags.push_back({k, v});
  j["flags"] = std::move(flags);
  j["master_seed"] = m.master_seed;
  j["inputs"] = digests_json(m.inputs);
  j["outputs"] = digests_json(m.outputs);
  j["tool_version"] = m.tool_version;
  os << j.dump(1) << '\n';
}

RunManifest read_manifest(std::istream& is) {
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
  try {
    const std::string version = j.at("format_version").get<std::string>();
    if (version.substr(0, version.find('.')) !=
        std::string(kFormatVersion.substr(0, kFormatVersion.find('.'))))
      throw FormatError("unsupported manifest format_version " + version);
    if (j.at("kind").get<std::string>() != "manifest") throw FormatError("not a manifest");
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    for (const auto& f : j.at("flags")) {
      if (!f.is_array() || f.size() != 2) throw FormatError("manifest flag entries are [name, value]");
      m.flags.emplace_back(f[0].get<std::string>(), f[1].get<std::string>());
    }
    m.master_seed = j.at("master_seed").get<std::uint64_t>();
    m.inputs = digests_from(j.at("inputs"));
    m.outputs = digests_from(j.at("outputs"));
    m.tool_version = j.at("tool_version").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

void verify_inputs(const RunManifest& m) {
  for (const auto& in : m.inputs) {
    if (sha256_file(in.path) != in.sha256)
      throw std::runtime_error("input " + in.path + " (" + in.role +
                               ") changed since the manifest was written");
  }
}

}  // namespace qkl
