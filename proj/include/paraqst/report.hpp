// Copyright 2026 The paraqst Authors
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
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace paraqst::report {

/// Shortest round-trippable decimal representation of a double ("%.17g"
/// with trailing precision trimmed), used for all CSV output so artifacts
/// are byte-stable across runs.
std::string format_double(double v);

/// Writes a CSV file with a header row; every cell via format_double.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// FNV-1a 64-bit checksum of a file's bytes, rendered as 16 hex digits.
std::string fnv1a_file(const std::filesystem::path& path);
std::uint64_t fnv1a_bytes(const void* data, std::size_t n);

/// Everything needed to reproduce a run bit for bit.
struct RunManifest {
  std::string subcommand;
  nlohmann::json config;     ///< Resolved device configuration snapshot.
  nlohmann::json flags;      ///< Effective option values.
  std::uint64_t seed = 0;
  std::string out_dir;
  std::map<std::string, std::string> artifacts;  ///< file -> fnv1a checksum.

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

/// Checksums every regular file in `dir` except `manifest.json`.
std::map<std::string, std::string> checksum_directory(const std::filesystem::path& dir);

}  // namespace paraqst::report
