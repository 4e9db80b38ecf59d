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

#ifndef NLV_EXPERIMENTS_MANIFEST_H_
#define NLV_EXPERIMENTS_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nlv::experiments {

inline constexpr std::string_view kManifestHeader =
    "file,recording_session_id,speaker_id,device_id,language,utterance_id,label,"
    "speaker_age,speaker_gender,speaker_mothertongue";

struct ManifestRecord {
  std::string file;
  std::string recording_session_id;
  std::string speaker_id;
  std::string device_id;
  std::string language;
  std::string utterance_id;
  uint32_t label = 0;
  int speaker_age = -1;  // -1 when the column is empty
  std::string speaker_gender;
  std::string speaker_mothertongue;

  bool operator==(const ManifestRecord&) const = default;
};

// Parses and validates a manifest for a `num_classes`-way task: exact
// header, known language, label < num_classes, one label per
// (utterance_id, language) pair, no repeated file.
std::vector<ManifestRecord> ParseManifest(std::string_view text, uint32_t num_classes);
std::vector<ManifestRecord> LoadManifest(const std::filesystem::path& path,
                                         uint32_t num_classes);

std::string FormatManifest(const std::vector<ManifestRecord>& records);
void WriteManifest(const std::vector<ManifestRecord>& records,
                   const std::filesystem::path& path);

// features_dir / file, with the extension replaced by ".nlf1".
std::filesystem::path FeaturePath(const std::filesystem::path& features_dir,
                                  const ManifestRecord& record);

}  // namespace nlv::experiments

#endif  // NLV_EXPERIMENTS_MANIFEST_H_
