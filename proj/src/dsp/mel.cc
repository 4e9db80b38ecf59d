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

#include "nlv/dsp/mel.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "nlv/common/error.h"
#include "nlv/dsp/fft.h"

namespace nlv::dsp {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterBank MakeMelFilterBank(const MelConfig& config, uint32_t sample_rate) {
  MelFilterBank bank;
  bank.n_mels = config.n_mels;
  bank.n_bins = config.fft_size / 2 + 1;
  bank.weights.assign(static_cast<size_t>(bank.n_mels) * bank.n_bins, 0.0);
  const double mel_lo = HzToMel(config.f_min);
  const double mel_hi = HzToMel(config.f_max);
  std::vector<double> edges(config.n_mels + 2);
  for (size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (config.n_mels + 1));
  }
  const double bin_hz = static_cast<double>(sample_rate) / config.fft_size;
  for (uint32_t m = 0; m < config.n_mels; ++m) {
    const double left = edges[m], center = edges[m + 1], right = edges[m + 2];
    const double height = 2.0 / (right - left);
    bank.center_hz.push_back(center);
    for (uint32_t k = 0; k < bank.n_bins; ++k) {
      const double f = k * bin_hz;
      double tri = 0.0;
      if (f > left && f <= center) {
        tri = (f - left) / (center - left);
      } else if (f > center && f < right) {
        tri = (right - f) / (right - center);
      }
      bank.weights[static_cast<size_t>(m) * bank.n_bins + k] = height * tri;
    }
  }
  return bank;
}

std::vector<double> HannWindow(size_t length) {
  std::vector<double> w(length);
  for (size_t n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / static_cast<double>(length));
  }
  return w;
}

namespace {

size_t FrameCount(size_t n, size_t win, size_t hop) {
  return n < win ? 0 : (n - win) / hop + 1;
}

}  // namespace

namespace reference {

std::vector<double> PowerSpectrogram(std::span<const float> samples, size_t win,
                                     size_t hop, size_t fft_size) {
  const size_t frames = FrameCount(samples.size(), win, hop);
  const size_t bins = fft_size / 2 + 1;
  const std::vector<double> window = HannWindow(win);
  std::vector<double> power(frames * bins);
  for (size_t f = 0; f < frames; ++f) {
    for (size_t k = 0; k < bins; ++k) {
      double re = 0.0, im = 0.0;
      for (size_t n = 0; n < win; ++n) {
        const double x = window[n] * samples[f * hop + n];
        const double angle = -2.0 * M_PI * static_cast<double>(k * n % fft_size) /
                             static_cast<double>(fft_size);
        re += x * std::cos(angle);
        im += x * std::sin(angle);
      }
      power[f * bins + k] = re * re + im * im;
    }
  }
  return power;
}

}  // namespace reference

namespace parallel {

std::vector<double> PowerSpectrogram(std::span<const float> samples, size_t win,
                                     size_t hop, size_t fft_size) {
  if (!IsPowerOfTwo(fft_size) || win > fft_size) {
    throw Error(ErrorCode::kInvalidArgument,
                "fft_size must be a power of two no smaller than the window");
  }
  const size_t frames = FrameCount(samples.size(), win, hop);
  const size_t bins = fft_size / 2 + 1;
  const std::vector<double> window = HannWindow(win);
  std::vector<double> power(frames * bins);
#pragma omp parallel
  {
    std::vector<std::complex<double>> buffer(fft_size);
#pragma omp for schedule(static)
    for (long f = 0; f < static_cast<long>(frames); ++f) {
      const float* src = samples.data() + static_cast<size_t>(f) * hop;
      for (size_t n = 0; n < win; ++n) buffer[n] = window[n] * src[n];
      std::fill(buffer.begin() + static_cast<long>(win), buffer.end(), 0.0);
      Fft(buffer);
      double* dst = power.data() + static_cast<size_t>(f) * bins;
      for (size_t k = 0; k < bins; ++k) dst[k] = std::norm(buffer[k]);
    }
  }
  return power;
}

}  // namespace parallel

FeatureSequence MelSpectrogram(const Waveform& w, const MelConfig& config) {
  if (2.0 * config.f_max > w.sample_rate) {
    throw Error(ErrorCode::kInvalidArgument,
                "mel filters reach " + std::to_string(config.f_max) +
                    " Hz, above Nyquist for " + std::to_string(w.sample_rate) + " Hz");
  }
  const size_t win = static_cast<size_t>(w.sample_rate) * config.win_ms / 1000;
  const size_t hop = static_cast<size_t>(w.sample_rate) * config.hop_ms / 1000;
  if (w.samples.size() < win || win == 0) {
    throw Error(ErrorCode::kAudioTooShort,
                std::to_string(w.samples.size()) + " samples, need at least " +
                    std::to_string(win));
  }
  const MelFilterBank bank = MakeMelFilterBank(config, w.sample_rate);
  const std::vector<double> power =
      parallel::PowerSpectrogram(w.samples, win, hop, config.fft_size);
  const size_t bins = bank.n_bins;
  FeatureSequence fs;
  fs.frames = static_cast<uint32_t>(power.size() / bins);
  fs.dims = config.n_mels;
  fs.frame_period_ms = static_cast<float>(config.hop_ms);
  fs.receptive_field_ms = static_cast<float>(config.win_ms);
  fs.data.resize(static_cast<size_t>(fs.frames) * fs.dims);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < static_cast<long>(fs.frames); ++t) {
    const double* spec = power.data() + static_cast<size_t>(t) * bins;
    for (uint32_t m = 0; m < bank.n_mels; ++m) {
      const double* filt = bank.weights.data() + static_cast<size_t>(m) * bins;
      double energy = 0.0;
      for (size_t k = 0; k < bins; ++k) energy += filt[k] * spec[k];
      fs.data[static_cast<size_t>(t) * fs.dims + m] =
          static_cast<float>(std::log(config.log_floor + energy));
    }
  }
  return fs;
}

}  // namespace nlv::dsp
