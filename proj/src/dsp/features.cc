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

#include "nlv/dsp/features.h"

#include <cstring>
#include <string>

#include "nlv/common/binary_io.h"
#include "nlv/common/error.h"

namespace nlv::dsp {

namespace {

constexpr char kMagic[4] = {'N', 'L', 'F', '1'};
constexpr uint32_t kVersion = 1;
constexpr size_t kHeaderBytes = 24;

}  // namespace

void Validate(const FeatureSequence& fs) {
  if (fs.frames < 1 || fs.dims < 1) {
    throw Error(ErrorCode::kInvalidArgument, "feature sequence must be at least 1x1");
  }
  if (!(fs.frame_period_ms > 0.0f) || !(fs.receptive_field_ms >= fs.frame_period_ms)) {
    throw Error(ErrorCode::kInvalidArgument,
                "need frame_period_ms > 0 and receptive_field_ms >= frame_period_ms");
  }
  if (fs.data.size() != static_cast<size_t>(fs.frames) * fs.dims) {
    throw Error(ErrorCode::kInvalidArgument, "feature data size != frames * dims");
  }
}

std::vector<uint8_t> EncodeFeatures(const FeatureSequence& fs) {
  Validate(fs);
  ByteWriter w;
  w.bytes().reserve(kHeaderBytes + fs.data.size() * sizeof(float));
  w.Bytes(kMagic, 4);
  w.U32(kVersion);
  w.U32(fs.frames);
  w.U32(fs.dims);
  w.F32(fs.frame_period_ms);
  w.F32(fs.receptive_field_ms);
  w.Raw(fs.data.data(), fs.data.size() * sizeof(float));
  return std::move(w.bytes());
}

FeatureSequence DecodeFeatures(std::span<const uint8_t> bytes) {
  ByteReader r(bytes.data(), bytes.size());
  char magic[4];
  if (!r.Raw(magic, 4)) throw Error(ErrorCode::kTruncatedFile, "missing NLF1 magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an NLF1 feature file");
  }
  uint32_t version = 0;
  if (!r.U32(version)) throw Error(ErrorCode::kTruncatedFile, "missing version");
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionUnsupported,
                "NLF1 version " + std::to_string(version));
  }
  FeatureSequence fs;
  if (!r.U32(fs.frames) || !r.U32(fs.dims) || !r.F32(fs.frame_period_ms) ||
      !r.F32(fs.receptive_field_ms)) {
    throw Error(ErrorCode::kTruncatedFile, "NLF1 header cut short");
  }
  const uint64_t count = static_cast<uint64_t>(fs.frames) * fs.dims;
  if (r.remaining() < count * sizeof(float)) {
    throw Error(ErrorCode::kTruncatedFile,
                "NLF1 payload has " + std::to_string(r.remaining()) + " bytes, need " +
                    std::to_string(count * sizeof(float)));
  }
  fs.data.resize(count);
  r.Raw(fs.data.data(), count * sizeof(float));
  try {
    Validate(fs);
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptHeader, e.what());
  }
  return fs;
}

void WriteFeatures(const FeatureSequence& fs, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeFeatures(fs));
}

FeatureSequence ReadFeatures(const std::filesystem::path& path) {
  return DecodeFeatures(ReadFileBytes(path));
}

}  // namespace nlv::dsp
