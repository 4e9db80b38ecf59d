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

#ifndef NLV_DSP_MEL_H_
#define NLV_DSP_MEL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "nlv/dsp/features.h"
#include "nlv/dsp/wav.h"

namespace nlv::dsp {

struct MelConfig {
  uint32_t n_mels = 128;
  uint32_t win_ms = 25;
  uint32_t hop_ms = 10;
  uint32_t fft_size = 512;
  double f_min = 0.0;
  double f_max = 8000.0;
  double log_floor = 1e-10;
};

double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters evenly spaced on the mel scale, each scaled to unit
// area in Hz. Row-major [n_mels, fft_size / 2 + 1].
struct MelFilterBank {
  uint32_t n_mels = 0;
  uint32_t n_bins = 0;
  std::vector<double> weights;
  std::vector<double> center_hz;  // one per filter

  std::span<const double> filter(size_t m) const {
    return std::span<const double>(weights).subspan(m * n_bins, n_bins);
  }
};

MelFilterBank MakeMelFilterBank(const MelConfig& config, uint32_t sample_rate);

// Periodic Hann window of the given length.
std::vector<double> HannWindow(size_t length);

// |STFT|^2 with a Hann window, frame-major [frames, fft_size / 2 + 1].
// `reference` evaluates the DFT directly and serially; `parallel` runs the
// radix-2 FFT with frames spread over OpenMP threads.
namespace reference {
std::vector<double> PowerSpectrogram(std::span<const float> samples, size_t win,
                                     size_t hop, size_t fft_size);
}  // namespace reference
namespace parallel {
std::vector<double> PowerSpectrogram(std::span<const float> samples, size_t win,
                                     size_t hop, size_t fft_size);
}  // namespace parallel

// Log-mel spectrogram of a 16 kHz mono waveform: log(floor + bank * |STFT|^2).
// Frames = floor((N - win) / hop) + 1; period = hop, receptive field = win.
FeatureSequence MelSpectrogram(const Waveform& w, const MelConfig& config = {});

}  // namespace nlv::dsp

#endif  // NLV_DSP_MEL_H_
