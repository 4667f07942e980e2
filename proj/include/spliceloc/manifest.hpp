// Copyright 2026  The spliceloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPLICELOC_MANIFEST_HPP_
#define SPLICELOC_MANIFEST_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spliceloc/labels.hpp"

namespace spliceloc {

enum class UtteranceClass : std::uint8_t { kGenuine, kFake, kPartialFake };

std::string_view to_string(UtteranceClass klass);
UtteranceClass parse_class(std::string_view text);

/// One corpus utterance. Line format (tab-separated):
///   utterance_id  relative_path  class  start:end:label,start:end:label,...
struct ManifestEntry {
  std::string utterance_id;
  std::string path;
  UtteranceClass klass = UtteranceClass::kGenuine;
  std::vector<Region> regions;

  std::int64_t n_samples() const { return regions.empty() ? 0 : regions.back().end; }
  Label utterance_label() const {
    return klass == UtteranceClass::kGenuine ? Label::kGenuine : Label::kFake;
  }

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

using Manifest = std::vector<ManifestEntry>;

/// Throws DataError unless regions are contiguous, non-empty, start at 0 and
/// agree with the class (single region for genuine/fake, matching label).
void validate(const ManifestEntry& entry);

std::string format_manifest_line(const ManifestEntry& entry);
ManifestEntry parse_manifest_line(std::string_view line);

Manifest read_manifest(std::istream& in);
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(std::ostream& out, const Manifest& manifest);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

}  // namespace spliceloc

#endif  // SPLICELOC_MANIFEST_HPP_
