// Copyright 2026 The nlvoice Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlv/experiments/manifest.h"

#include <charconv>
#include <map>
#include <set>
#include <utility>

#include "nlv/common/binary_io.h"
#include "nlv/common/error.h"

namespace nlv::experiments {
namespace {

constexpr std::string_view kLanguages[] = {"francais", "maninka", "pular", "susu",
                                           "language_independent"};

// Splits one CSV line. Fields may be double-quoted with "" escapes.
std::vector<std::string> SplitCsv(std::string_view line, size_t row) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kInvalidArgument, "row " + std::to_string(row) + ": unterminated quote");
  }
  return fields;
}

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

template <typename T>
bool ParseInt(const std::string& s, T& out) {
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size();
}

}  // namespace

std::vector<ManifestRecord> ParseManifest(std::string_view text, uint32_t num_classes) {
  std::vector<std::string_view> lines;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  if (lines.empty() || lines[0] != kManifestHeader) {
    throw Error(ErrorCode::kHeaderMismatch,
                "expected header '" + std::string(kManifestHeader) + "'");
  }
  std::vector<ManifestRecord> records;
  std::set<std::string> files;
  std::map<std::pair<std::string, std::string>, uint32_t> label_of;
  for (size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const auto f = SplitCsv(lines[row], row);
    if (f.size() != 10) {
      throw Error(ErrorCode::kInvalidArgument, "row " + std::to_string(row) + ": expected 10 fields, got " +
                                                   std::to_string(f.size()));
    }
    ManifestRecord r{f[0], f[1], f[2], f[3], f[4], f[5], 0, -1, f[8], f[9]};
    bool known = false;
    for (auto lang : kLanguages) known = known || lang == r.language;
    if (!known) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(row) + ": unknown language '" + r.language + "'");
    }
    if (!ParseInt(f[6], r.label) || r.label >= num_classes) {
      throw Error(ErrorCode::kBadLabel, "row " + std::to_string(row) + ": label '" + f[6] +
                                            "' for " + std::to_string(num_classes) + " classes");
    }
    if (!f[7].empty() && !ParseInt(f[7], r.speaker_age)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "row " + std::to_string(row) + ": speaker_age '" + f[7] + "'");
    }
    if (!files.insert(r.file).second) {
      throw Error(ErrorCode::kDuplicateFile, r.file);
    }
    auto [it, fresh] = label_of.emplace(std::make_pair(r.utterance_id, r.language), r.label);
    if (!fresh && it->second != r.label) {
      throw Error(ErrorCode::kBadLabel, "row " + std::to_string(row) + ": (" + r.utterance_id +
                                            ", " + r.language + ") already labelled " +
                                            std::to_string(it->second));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ManifestRecord> LoadManifest(const std::filesystem::path& path, uint32_t num_classes) {
  const auto bytes = ReadFileBytes(path);
  return ParseManifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                       num_classes);
}

std::string FormatManifest(const std::vector<ManifestRecord>& records) {
  std::string out(kManifestHeader);
  out += "\n";
  for (const auto& r : records) {
    out += Quote(r.file) + "," + Quote(r.recording_session_id) + "," + Quote(r.speaker_id) + "," +
           Quote(r.device_id) + "," + Quote(r.language) + "," + Quote(r.utterance_id) + "," +
           std::to_string(r.label) + "," +
           (r.speaker_age < 0 ? std::string() : std::to_string(r.speaker_age)) + "," +
           Quote(r.speaker_gender) + "," + Quote(r.speaker_mothertongue) + "\n";
  }
  return out;
}

void WriteManifest(const std::vector<ManifestRecord>& records, const std::filesystem::path& path) {
  WriteFileAtomic(path, FormatManifest(records));
}

std::filesystem::path FeaturePath(const std::filesystem::path& features_dir,
                                  const ManifestRecord& record) {
  std::filesystem::path rel(record.file);
  rel.replace_extension(".nlf1");
  return features_dir / rel;
}

}  // namespace nlv::experiments
