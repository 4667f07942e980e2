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

#include "spliceloc/fusion.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "spliceloc/audio.hpp"

namespace spliceloc {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

int parse_frame_time(std::string_view text, double frame_seconds) {
  double t = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), t);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(t >= 0.0))
    throw DataError("bad time '" + std::string(text) + "'");
  return static_cast<int>(std::lround(t / frame_seconds));
}

void finish(UtteranceVerdict& v) {
  v.utterance_label = Label::kGenuine;
  for (const auto& s : v.segments)
    if (s.label == Label::kFake) v.utterance_label = Label::kFake;
}

}  // namespace

void validate(const FusionConfig& cfg) {
  if (!in_unit(cfg.fake_proportion_ratio) || !in_unit(cfg.frame_genuine_threshold) ||
      !in_unit(cfg.vae_fake_fraction) || !in_unit(cfg.weight_accuracy) || !in_unit(cfg.weight_f1))
    throw std::invalid_argument("fusion thresholds and weights must lie in [0, 1]");
  if (cfg.vae_min_boundaries < 0 || cfg.vae_max_boundaries < cfg.vae_min_boundaries)
    throw std::invalid_argument("VAE pool boundary limits are inconsistent");
}

std::vector<std::uint8_t> UtteranceVerdict::frame_flags() const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n_frames()), 0);
  for (const auto& s : segments)
    if (s.label == Label::kFake)
      std::fill(out.begin() + s.start, out.begin() + s.end, std::uint8_t{1});
  return out;
}

std::vector<std::uint8_t> classify_frames(std::span<const double> probs, const FusionConfig& cfg) {
  std::vector<std::uint8_t> flags(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    flags[i] = probs[i] < cfg.frame_genuine_threshold ? 1 : 0;
  return flags;
}

std::vector<std::uint8_t> classify_frames(const FrameScores& spoof_scores, const FusionConfig& cfg) {
  if (spoof_scores.task != Task::kSpoof)
    throw DataError(spoof_scores.utterance_id + ": frame classification needs spoof scores");
  return classify_frames(spoof_scores.probs, cfg);
}

double fake_ratio(std::span<const std::uint8_t> flags, std::pair<int, int> seg) {
  const auto [start, end] = seg;
  if (start < 0 || end <= start || end > static_cast<int>(flags.size()))
    throw std::invalid_argument("fake_ratio needs a non-empty segment inside the flags");
  int fake = 0;
  for (int f = start; f < end; ++f) fake += flags[static_cast<std::size_t>(f)] ? 1 : 0;
  return static_cast<double>(fake) / (end - start);
}

UtteranceVerdict fuse(std::span<const std::pair<int, int>> segments,
                      std::span<const std::uint8_t> flags, const FusionConfig& cfg,
                      const std::string& utterance_id) {
  if (segments.empty()) throw DataError(utterance_id + ": no segments to fuse");
  int expected = 0;
  for (const auto& [s, e] : segments) {
    if (s != expected || e <= s) throw DataError(utterance_id + ": segments do not partition the frames");
    expected = e;
  }
  if (expected != static_cast<int>(flags.size()))
    throw DataError(utterance_id + ": segments cover " + std::to_string(expected) + " frames, flags " +
                    std::to_string(flags.size()));

  const double limit = cfg.fake_proportion_ratio;
  UtteranceVerdict v;
  v.utterance_id = utterance_id;
  for (const auto& [s, e] : segments) v.segments.push_back({s, e, Label::kGenuine});
  auto& seg = v.segments;

  switch (seg.size()) {
    case 1:
      if (fake_ratio(flags, segments[0]) >= limit) seg[0].label = Label::kFake;
      break;
    case 2: {
      const double r1 = fake_ratio(flags, segments[0]);
      const double r2 = fake_ratio(flags, segments[1]);
      if (r1 > limit && r1 > r2) {
        seg[0].label = Label::kFake;
      } else if (r2 > limit && r2 > r1) {
        seg[1].label = Label::kFake;
      } else {
        const int len1 = seg[0].end - seg[0].start;
        const int len2 = seg[1].end - seg[1].start;
        seg[len2 < len1 ? 1 : 0].label = Label::kFake;
      }
      break;
    }
    case 3:
      seg[1].label = Label::kFake;
      break;
    default:
      for (std::size_t i = 0; i < seg.size(); ++i)
        if (fake_ratio(flags, segments[i]) >= limit) seg[i].label = Label::kFake;
  }
  finish(v);
  return v;
}

bool in_vae_pool(int boundary_count, const FusionConfig& cfg) {
  return boundary_count <= cfg.vae_min_boundaries || boundary_count > cfg.vae_max_boundaries;
}

std::vector<UtteranceVerdict> apply_vae_override(std::vector<UtteranceVerdict> verdicts,
                                                 const std::map<std::string, int>& boundary_counts,
                                                 const std::map<std::string, double>& deviation,
                                                 const FusionConfig& cfg) {
  std::vector<DeviationScore> pool;
  for (const auto& v : verdicts) {
    const auto bc = boundary_counts.find(v.utterance_id);
    if (bc == boundary_counts.end())
      throw DataError(v.utterance_id + ": no boundary count for VAE pooling");
    if (!in_vae_pool(bc->second, cfg)) continue;
    const auto dev = deviation.find(v.utterance_id);
    if (dev == deviation.end()) throw DataError(v.utterance_id + ": pooled utterance has no deviation score");
    pool.push_back({v.utterance_id, dev->second});
  }
  const auto decided = rescore(pool, cfg.vae_fake_fraction);
  for (auto& v : verdicts) {
    const auto it = decided.find(v.utterance_id);
    if (it == decided.end()) continue;
    if (it->second == Label::kGenuine) {
      for (auto& s : v.segments) s.label = Label::kGenuine;
    } else if (v.segments.size() == 1 || v.utterance_label == Label::kGenuine) {
      for (auto& s : v.segments) s.label = Label::kFake;
    }
    finish(v);
  }
  return verdicts;
}

std::string format_submission_line(const UtteranceVerdict& v, double frame_seconds) {
  std::string line = v.utterance_id + '\t' + std::string(to_string(v.utterance_label)) + '\t';
  char buf[96];
  for (std::size_t i = 0; i < v.segments.size(); ++i) {
    const auto& s = v.segments[i];
    std::snprintf(buf, sizeof buf, "%s%.2f-%.2f-%s", i ? ";" : "", s.start * frame_seconds,
                  s.end * frame_seconds, std::string(to_string(s.label)).c_str());
    line += buf;
  }
  return line;
}

UtteranceVerdict parse_submission_line(std::string_view line, double frame_seconds) {
  const auto fields = split(line, '\t');
  if (fields.size() != 3) throw DataError("submission line needs 3 tab-separated fields");
  UtteranceVerdict v;
  v.utterance_id = std::string(fields[0]);
  if (v.utterance_id.empty()) throw DataError("empty utterance id");
  const Label declared = parse_label(fields[1]);
  int expected = 0;
  for (auto reg : split(fields[2], ';')) {
    const auto parts = split(reg, '-');
    if (parts.size() != 3) throw DataError(v.utterance_id + ": bad region '" + std::string(reg) + "'");
    VerdictSegment s{parse_frame_time(parts[0], frame_seconds), parse_frame_time(parts[1], frame_seconds),
                     parse_label(parts[2])};
    if (s.start != expected || s.end <= s.start)
      throw DataError(v.utterance_id + ": regions do not partition the utterance");
    expected = s.end;
    v.segments.push_back(s);
  }
  finish(v);
  if (v.utterance_label != declared)
    throw DataError(v.utterance_id + ": utterance label disagrees with its regions");
  return v;
}

void write_submission(std::ostream& out, const std::vector<UtteranceVerdict>& verdicts) {
  for (const auto& v : verdicts) out << format_submission_line(v) << '\n';
}

void write_submission(const std::filesystem::path& path, const std::vector<UtteranceVerdict>& verdicts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_submission(out, verdicts);
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<UtteranceVerdict> read_submission(std::istream& in) {
  std::vector<UtteranceVerdict> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      out.push_back(parse_submission_line(line));
    } catch (const std::exception& e) {
      throw DataError("submission line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<UtteranceVerdict> read_submission(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_submission(in);
}

}  // namespace spliceloc
