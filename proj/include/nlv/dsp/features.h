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

#ifndef NLV_DSP_FEATURES_H_
#define NLV_DSP_FEATURES_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nlv::dsp {

// Per-frame acoustic features, frame-major: value(t, d) = data[t * dims + d].
//
// frame_period_ms is the hop between frames and receptive_field_ms the span
// of raw audio each frame summarizes; together they convert frame counts
// into durations.
struct FeatureSequence {
  uint32_t frames = 0;
  uint32_t dims = 0;
  float frame_period_ms = 10.0f;
  float receptive_field_ms = 30.0f;
  std::vector<float> data;

  float at(size_t t, size_t d) const { return data[t * dims + d]; }
  float& at(size_t t, size_t d) { return data[t * dims + d]; }
  std::span<const float> frame(size_t t) const {
    return std::span<const float>(data).subspan(t * dims, dims);
  }

  bool operator==(const FeatureSequence&) const = default;
};

// Encoder feature defaults: 512 dims, 10 ms period, 30 ms receptive field.
inline constexpr uint32_t kEncoderDims = 512;
inline constexpr float kEncoderPeriodMs = 10.0f;
inline constexpr float kEncoderReceptiveFieldMs = 30.0f;

// Throws kInvalidArgument when the invariants (T, D >= 1, period > 0,
// receptive field >= period, data size T*D) do not hold.
void Validate(const FeatureSequence& fs);

// NLF1 container:
//   "NLF1" | u32 version=1 | u32 T | u32 D | f32 period_ms | f32 rf_ms |
//   T*D f32 values, frame-major. All little-endian.
std::vector<uint8_t> EncodeFeatures(const FeatureSequence& fs);
FeatureSequence DecodeFeatures(std::span<const uint8_t> bytes);

void WriteFeatures(const FeatureSequence& fs, const std::filesystem::path& path);
FeatureSequence ReadFeatures(const std::filesystem::path& path);

}  // namespace nlv::dsp

#endif  // NLV_DSP_FEATURES_H_
