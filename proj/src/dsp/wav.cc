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

#include "nlv/dsp/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "nlv/common/binary_io.h"
#include "nlv/common/error.h"

namespace nlv::dsp {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t U16At(const uint8_t* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

uint32_t U32At(const uint8_t* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

}  // namespace

Waveform DecodeWav(std::span<const uint8_t> bytes, StereoPolicy stereo) {
  if (bytes.size() < 12) throw Error(ErrorCode::kCorruptHeader, "file too small for RIFF");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "not a RIFF/WAVE file");
  }
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  const uint8_t* data = nullptr;
  size_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const uint32_t size = U32At(chunk + 4);
    const size_t body = pos + 8;
    if (size > bytes.size() - body) {
      // Some writers leave a streaming placeholder size on the data chunk.
      if (std::memcmp(chunk, "data", 4) == 0) {
        data = bytes.data() + body;
        data_size = bytes.size() - body;
        break;
      }
      throw Error(ErrorCode::kCorruptHeader, "chunk overruns file");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(ErrorCode::kCorruptHeader, "fmt chunk too small");
      format = U16At(chunk + 8);
      channels = U16At(chunk + 10);
      rate = U32At(chunk + 12);
      bits = U16At(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) throw Error(ErrorCode::kCorruptHeader, "extensible fmt too small");
        format = U16At(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || data == nullptr) {
    throw Error(ErrorCode::kCorruptHeader, "missing fmt or data chunk");
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "only PCM16 and float32 are supported (format " +
                    std::to_string(format) + ", " + std::to_string(bits) + " bits)");
  }
  if (channels < 1 || channels > 2) {
    throw Error(ErrorCode::kUnsupportedFormat,
                std::to_string(channels) + " channels; only mono/stereo supported");
  }
  if (channels == 2 && stereo == StereoPolicy::kReject) {
    throw Error(ErrorCode::kUnsupportedFormat, "stereo input rejected");
  }
  if (rate == 0) throw Error(ErrorCode::kCorruptHeader, "sample rate is zero");

  const size_t sample_bytes = bits / 8;
  const size_t frames = data_size / (sample_bytes * channels);
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (size_t c = 0; c < channels; ++c) {
      const uint8_t* p = data + (i * channels + c) * sample_bytes;
      if (pcm16) {
        int16_t v;
        std::memcpy(&v, p, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, p, 4);
        acc += static_cast<double>(v);
      }
    }
    w.samples[i] = static_cast<float>(acc / channels);
  }
  return w;
}

Waveform LoadWav(const std::filesystem::path& path, StereoPolicy stereo) {
  return DecodeWav(ReadFileBytes(path), stereo);
}

std::vector<uint8_t> EncodeWav(std::span<const float> interleaved, uint32_t sample_rate,
                               uint16_t channels, WavEncoding encoding) {
  if (channels == 0 || interleaved.size() % channels != 0) {
    throw Error(ErrorCode::kInvalidArgument, "sample count not a multiple of channels");
  }
  const uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const uint32_t data_bytes = static_cast<uint32_t>(interleaved.size() * (bits / 8));
  ByteWriter w;
  auto u16 = [&](uint16_t v) { w.Raw(&v, 2); };
  w.Bytes("RIFF", 4);
  w.U32(36 + data_bytes);
  w.Bytes("WAVE", 4);
  w.Bytes("fmt ", 4);
  w.U32(16);
  u16(encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  u16(channels);
  w.U32(sample_rate);
  w.U32(sample_rate * channels * (bits / 8));
  u16(static_cast<uint16_t>(channels * (bits / 8)));
  u16(bits);
  w.Bytes("data", 4);
  w.U32(data_bytes);
  for (float s : interleaved) {
    if (encoding == WavEncoding::kPcm16) {
      const double scaled = std::round(std::clamp(static_cast<double>(s), -1.0, 1.0) * 32768.0);
      const auto v = static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      u16(static_cast<uint16_t>(v));
    } else {
      w.F32(s);
    }
  }
  return std::move(w.bytes());
}

void SaveWav(const std::filesystem::path& path, const Waveform& w, WavEncoding encoding) {
  WriteFileBytes(path, EncodeWav(w.samples, w.sample_rate, 1, encoding));
}

}  // namespace nlv::dsp
