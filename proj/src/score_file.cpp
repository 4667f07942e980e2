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

#include "spliceloc/score_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace spliceloc {

namespace {

std::string_view strip_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

long long to_int(std::string_view s, const std::string& what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError(what + ": bad integer '" + std::string(s) + "'");
  return v;
}

double to_double(std::string_view s, const std::string& what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw DataError(what + ": bad number '" + std::string(s) + "'");
  return v;
}

}  // namespace

void write_scores(std::ostream& out, const FrameScores& s) {
  out << "#id=" << s.utterance_id << " task=" << to_string(s.task) << " hop=" << s.hop_samples
      << " n=" << s.probs.size() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < s.probs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu\t%.6f\n", i, s.probs[i]);
    out << buf;
  }
}

void write_scores(const std::filesystem::path& path, const FrameScores& scores) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  write_scores(out, scores);
}

FrameScores read_scores(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty score file");
  std::string_view header = strip_cr(line);
  const std::string where1 = source + ":1";
  if (header.substr(0, 4) != "#id=") throw DataError(where1 + ": malformed header");

  FrameScores s;
  long long declared = -1;
  bool have_task = false, have_hop = false;
  std::istringstream hs{std::string(header.substr(1))};
  std::string field;
  bool have_id = false;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw DataError(where1 + ": malformed header field '" + field + "'");
    const std::string key = field.substr(0, eq), value = field.substr(eq + 1);
    if (key == "id") {
      s.utterance_id = value;
      have_id = !value.empty();
    } else if (key == "task") {
      s.task = parse_task(value);
      have_task = true;
    } else if (key == "hop") {
      s.hop_samples = static_cast<int>(to_int(value, where1));
      have_hop = s.hop_samples > 0;
    } else if (key == "n") {
      declared = to_int(value, where1);
    } else {
      throw DataError(where1 + ": unknown header key '" + key + "'");
    }
  }
  if (!have_id || !have_task || !have_hop || declared < 0)
    throw DataError(where1 + ": malformed header (need id, task, hop, n)");

  s.probs.reserve(static_cast<std::size_t>(declared));
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view row = strip_cr(line);
    if (row.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto tab = row.find('\t');
    if (tab == std::string_view::npos) throw DataError(where + ": expected frame_index<TAB>prob");
    const long long idx = to_int(row.substr(0, tab), where);
    if (idx != static_cast<long long>(s.probs.size()))
      throw DataError(where + ": frame index " + std::to_string(idx) + " out of sequence");
    const double p = to_double(row.substr(tab + 1), where);
    if (!(p >= 0.0 && p <= 1.0)) throw DataError(where + ": probability outside [0, 1]");
    s.probs.push_back(p);
  }
  if (static_cast<long long>(s.probs.size()) != declared)
    throw DataError(source + ": header declares n=" + std::to_string(declared) + " but file has " +
                    std::to_string(s.probs.size()) + " frames");
  return s;
}

FrameScores read_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_scores(in, path.string());
}

std::string score_file_name(const std::string& utterance_id, Task task) {
  return utterance_id + "." + std::string(to_string(task)) + ".scores";
}

}  // namespace spliceloc
