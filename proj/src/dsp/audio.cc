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

#include "nlv/dsp/audio.h"

#include <cmath>

#include "nlv/common/error.h"

namespace nlv::dsp {

Waveform Resample(const Waveform& w, uint32_t out_rate) {
  if (w.sample_rate == out_rate || w.samples.empty()) {
    Waveform out = w;
    out.sample_rate = out_rate;
    return out;
  }
  const double step = static_cast<double>(w.sample_rate) / out_rate;
  const size_t n_in = w.samples.size();
  const auto n_out = static_cast<size_t>(std::floor((n_in - 1) / step)) + 1;
  Waveform out;
  out.sample_rate = out_rate;
  out.samples.resize(n_out);
  for (size_t i = 0; i < n_out; ++i) {
    const double pos = i * step;
    const auto lo = static_cast<size_t>(pos);
    const double frac = pos - lo;
    const double a = w.samples[lo];
    const double b = lo + 1 < n_in ? w.samples[lo + 1] : a;
    out.samples[i] = static_cast<float>(a + (b - a) * frac);
  }
  return out;
}

Waveform Preprocess(const Waveform& w) {
  if (w.samples.empty()) throw Error(ErrorCode::kEmptyAudio, "no samples");
  Waveform out = Resample(w, kTargetSampleRate);
  float peak = 0.0f;
  for (float s : out.samples) peak = std::fmax(peak, std::fabs(s));
  if (peak == 0.0f || std::fabs(peak - kTargetPeak) <= kPeakTolerance) return out;
  const double gain = static_cast<double>(kTargetPeak) / peak;
  for (float& s : out.samples) s = static_cast<float>(s * gain);
  return out;
}

}  // namespace nlv::dsp
