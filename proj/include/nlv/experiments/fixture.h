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

#ifndef NLV_EXPERIMENTS_FIXTURE_H_
#define NLV_EXPERIMENTS_FIXTURE_H_

#include <cstdint>
#include <filesystem>

#include "nlv/experiments/experiments.h"

namespace nlv::experiments {

// Synthetic separable datasets standing in for the real corpora.
//
// langid: three classes (maninka, pular, susu); class k adds `offset` to
//   feature dimension 3k + 1 on every frame over N(0, noise^2) frames.
// asr: the 105 assistant classes; class k has a fixed N(0, 1) mean vector
//   and frames are mean + N(0, noise^2).
struct FixtureSpec {
  Task task = Task::kLangId;
  uint32_t dims = 16;
  uint32_t per_class = 28;
  uint32_t min_frames = 32;
  uint32_t max_frames = 64;
  double noise = 1.0;
  double offset = 10.0;
  uint64_t seed = 0;
};

Dataset SynthesizeDataset(const FixtureSpec& spec);

// Writes dir/manifest.csv and dir/features/<file>.nlf1 for every record.
void WriteDataset(const Dataset& data, const std::filesystem::path& dir);

}  // namespace nlv::experiments

#endif  // NLV_EXPERIMENTS_FIXTURE_H_
