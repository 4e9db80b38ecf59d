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

#ifndef NLV_DSP_WAV_H_
#define NLV_DSP_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace nlv::dsp {

// Mono audio in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  uint32_t sample_rate = 16000;
};

enum class StereoPolicy { kMixdown, kReject };

enum class WavEncoding { kPcm16, kFloat32 };

// RIFF/WAVE reader for PCM16 and IEEE float32 with one or two channels.
// PCM16 maps to [-1, 1) by dividing by 32768; stereo is averaged per sample
// unless the policy rejects it.
Waveform DecodeWav(std::span<const uint8_t> bytes,
                   StereoPolicy stereo = StereoPolicy::kMixdown);
Waveform LoadWav(const std::filesystem::path& path,
                 StereoPolicy stereo = StereoPolicy::kMixdown);

// Writer for fixtures and tools. `channels` interleaves the same channel
// layout the reader accepts; samples.size() must be a multiple of it.
std::vector<uint8_t> EncodeWav(std::span<const float> interleaved, uint32_t sample_rate,
                               uint16_t channels = 1,
                               WavEncoding encoding = WavEncoding::kPcm16);
void SaveWav(const std::filesystem::path& path, const Waveform& w,
             WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace nlv::dsp

#endif  // NLV_DSP_WAV_H_
