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

#include "nlv/experiments/fixture.h"

#include <array>
#include <cstdio>

#include "nlv/assistant/vocabulary.h"
#include "nlv/common/error.h"
#include "nlv/common/random.h"

namespace nlv::experiments {
namespace {

constexpr std::array<const char*, 4> kMotherTongues{"maninka", "pular", "susu", "francais"};

std::string Numbered(const char* prefix, uint64_t n) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%03llu", prefix, static_cast<unsigned long long>(n));
  return buf;
}

}  // namespace

Dataset SynthesizeDataset(const FixtureSpec& spec) {
  const uint32_t classes = NumClasses(spec.task);
  if (spec.per_class < 1 || spec.min_frames < models::kMinFrames ||
      spec.max_frames < spec.min_frames || spec.dims < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad fixture spec");
  }
  if (spec.task == Task::kLangId && spec.dims < 3 * classes - 1) {
    throw Error(ErrorCode::kInvalidArgument, "langid fixture needs at least 8 dims");
  }
  Rng rng(spec.seed);
  std::vector<std::vector<double>> means(classes, std::vector<double>(spec.dims, 0.0));
  for (uint32_t k = 0; k < classes; ++k) {
    if (spec.task == Task::kLangId) {
      means[k][3 * k + 1] = spec.offset;
    } else {
      Rng class_rng(DeriveSeed(spec.seed, 1000 + k));
      for (double& m : means[k]) m = class_rng.Normal();
    }
  }
  Dataset data;
  for (uint32_t k = 0; k < classes; ++k) {
    for (uint32_t i = 0; i < spec.per_class; ++i) {
      ManifestRecord r;
      const uint64_t speaker = rng.Below(12);
      r.recording_session_id = Numbered("session_", rng.Below(6));
      r.speaker_id = Numbered("speaker_", speaker);
      r.device_id = Numbered("device_", rng.Below(4));
      r.label = k;
      r.speaker_age = 18 + static_cast<int>(speaker * 4);
      r.speaker_gender = speaker % 3 == 0 ? "female" : "male";
      r.speaker_mothertongue = kMotherTongues[speaker % kMotherTongues.size()];
      if (spec.task == Task::kLangId) {
        r.language = kLangIdLanguages[k];
        r.utterance_id = "radio_clip";
        r.file = "langid/" + r.language + "/" + Numbered("clip_", i) + ".wav";
      } else {
        const auto& c = assistant::ClassById(static_cast<int>(k));
        r.language = assistant::LanguageName(c.language);
        r.utterance_id = c.utterance_id;
        r.file = "asr/" + c.utterance_id + "__" + r.language + "/" + Numbered("rec_", i) + ".wav";
      }
      dsp::FeatureSequence fs;
      fs.frames = spec.min_frames +
                  static_cast<uint32_t>(rng.Below(spec.max_frames - spec.min_frames + 1));
      fs.dims = spec.dims;
      fs.data.resize(static_cast<size_t>(fs.frames) * fs.dims);
      for (uint32_t t = 0; t < fs.frames; ++t) {
        for (uint32_t d = 0; d < fs.dims; ++d) {
          fs.at(t, d) = static_cast<float>(means[k][d] + spec.noise * rng.Normal());
        }
      }
      data.records.push_back(std::move(r));
      data.features.push_back(std::move(fs));
    }
  }
  return data;
}

void WriteDataset(const Dataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto features_dir = dir / "features";
  for (size_t i = 0; i < data.records.size(); ++i) {
    const auto path = FeaturePath(features_dir, data.records[i]);
    std::filesystem::create_directories(path.parent_path());
    dsp::WriteFeatures(data.features[i], path);
  }
  WriteManifest(data.records, dir / "manifest.csv");
}

}  // namespace nlv::experiments
