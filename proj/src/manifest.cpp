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

#include "spliceloc/manifest.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace spliceloc {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? s.npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError("bad integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string_view to_string(UtteranceClass klass) {
  switch (klass) {
    case UtteranceClass::kGenuine: return "genuine";
    case UtteranceClass::kFake: return "fake";
    case UtteranceClass::kPartialFake: return "partial_fake";
  }
  return "genuine";
}

UtteranceClass parse_class(std::string_view text) {
  if (text == "genuine") return UtteranceClass::kGenuine;
  if (text == "fake") return UtteranceClass::kFake;
  if (text == "partial_fake") return UtteranceClass::kPartialFake;
  throw DataError("unknown utterance class '" + std::string(text) + "'");
}

void validate(const ManifestEntry& e) {
  const std::string who = "utterance " + e.utterance_id + ": ";
  if (e.utterance_id.empty()) throw DataError("empty utterance id");
  if (e.regions.empty()) throw DataError(who + "no regions");
  std::int64_t expect = 0;
  for (const auto& r : e.regions) {
    if (r.start < expect) throw DataError(who + "overlapping regions at " + std::to_string(r.start));
    if (r.start > expect) throw DataError(who + "gap in regions at " + std::to_string(expect));
    if (r.end <= r.start) throw DataError(who + "empty region at " + std::to_string(r.start));
    expect = r.end;
  }
  if (e.klass != UtteranceClass::kPartialFake) {
    if (e.regions.size() != 1) throw DataError(who + "genuine/fake entries need exactly one region");
    if (e.regions[0].label != e.utterance_label())
      throw DataError(who + "region label disagrees with class");
  }
}

std::string format_manifest_line(const ManifestEntry& e) {
  std::string out = e.utterance_id + '\t' + e.path + '\t' + std::string(to_string(e.klass)) + '\t';
  for (std::size_t i = 0; i < e.regions.size(); ++i) {
    if (i) out += ',';
    const auto& r = e.regions[i];
    out += std::to_string(r.start) + ':' + std::to_string(r.end) + ':' +
           std::string(to_string(r.label));
  }
  return out;
}

ManifestEntry parse_manifest_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  auto fields = split(line, '\t');
  if (fields.size() != 4)
    throw DataError("manifest line needs 4 tab-separated fields, got " +
                    std::to_string(fields.size()));
  ManifestEntry e;
  e.utterance_id = std::string(fields[0]);
  e.path = std::string(fields[1]);
  e.klass = parse_class(fields[2]);
  for (auto reg : split(fields[3], ',')) {
    auto parts = split(reg, ':');
    if (parts.size() != 3) throw DataError("bad region '" + std::string(reg) + "'");
    e.regions.push_back({parse_int(parts[0]), parse_int(parts[1]), parse_label(parts[2])});
  }
  validate(e);
  return e;
}

Manifest read_manifest(std::istream& in) {
  Manifest m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      m.push_back(parse_manifest_line(line));
    } catch (const DataError& err) {
      throw DataError("manifest line " + std::to_string(lineno) + ": " + err.what());
    }
  }
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  return read_manifest(in);
}

void write_manifest(std::ostream& out, const Manifest& manifest) {
  for (const auto& e : manifest) out << format_manifest_line(e) << '\n';
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write manifest " + path.string());
  write_manifest(out, manifest);
}

}  // namespace spliceloc
