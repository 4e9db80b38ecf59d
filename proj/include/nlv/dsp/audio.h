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

#ifndef NLV_DSP_AUDIO_H_
#define NLV_DSP_AUDIO_H_

#include <cstdint>

#include "nlv/dsp/wav.h"

namespace nlv::dsp {

inline constexpr uint32_t kTargetSampleRate = 16000;
inline constexpr float kTargetPeak = 0.99f;
// Peaks this close to the target are left alone, which makes Preprocess
// idempotent despite float rounding in the rescale.
inline constexpr float kPeakTolerance = 1e-6f;

// Linear-interpolation resampler. Output sample i sits at source position
// i * in_rate / out_rate; the output covers the same time span.
Waveform Resample(const Waveform& w, uint32_t out_rate);

// Resamples to 16 kHz and peak-normalizes to 0.99. Silence passes through.
Waveform Preprocess(const Waveform& w);

}  // namespace nlv::dsp

#endif  // NLV_DSP_AUDIO_H_
