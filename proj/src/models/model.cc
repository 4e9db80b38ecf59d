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

#include "nlv/models/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include <zlib.h>

#include "nlv/common/binary_io.h"
#include "nlv/common/error.h"
#include "nlv/tensorcore/ops.h"

namespace nlv::models {

void ModelConfig::Validate() const {
  if (input_dim < 1) throw Error(ErrorCode::kInvalidConfig, "input_dim must be >= 1");
  for (uint32_t c : channels) {
    if (c < 1) throw Error(ErrorCode::kInvalidConfig, "every channel count must be >= 1");
  }
  if (num_classes < 1) throw Error(ErrorCode::kInvalidConfig, "num_classes must be >= 1");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "dropout_rate must be in [0, 1)");
  }
}

ModelConfig ModelConfig::LangId(uint32_t input_dim) {
  return ModelConfig{input_dim, {3, 1, 3, 3, 3}, 3, 0.1};
}

ModelConfig ModelConfig::Asr(uint32_t input_dim) {
  return ModelConfig{input_dim, {16, 32, 64, 128, 256}, 105, 0.1};
}

size_t ExpectedParamCount(const ModelConfig& c) {
  size_t total = static_cast<size_t>(c.input_dim) * c.channels[0] + c.channels[0];
  for (size_t i = 1; i < 5; ++i) {
    total += 3 * static_cast<size_t>(c.channels[i - 1]) * c.channels[i] + c.channels[i];
  }
  total += static_cast<size_t>(c.feature_dim()) * c.num_classes + c.num_classes;
  return total;
}

namespace {

tc::ParameterGroup MakeGroup(std::string name, std::vector<size_t> weight_shape,
                             size_t fan_in, Rng& rng) {
  const size_t n = tc::NumElements(weight_shape);
  const size_t outputs = weight_shape[0];
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
  std::vector<double> w(n);
  for (double& v : w) v = rng.Uniform(-limit, limit);
  return {std::move(name), tc::MakeVar(std::move(weight_shape), std::move(w)),
          tc::Zeros({outputs})};
}

tc::Var CopyLeaf(const tc::Var& v) {
  return v ? tc::MakeVar(v->shape(), v->values()) : nullptr;
}

}  // namespace

Model Model::Build(const ModelConfig& config, uint64_t seed) {
  config.Validate();
  Model m(config, seed);
  Rng rng(seed);
  const auto& c = config.channels;
  m.params_.push_back(MakeGroup("conv0", {c[0], config.input_dim, 1}, config.input_dim, rng));
  for (size_t i = 1; i < 5; ++i) {
    m.params_.push_back(MakeGroup("block" + std::to_string(i), {c[i], c[i - 1], 3},
                                  3 * c[i - 1], rng));
  }
  m.params_.push_back(MakeGroup("head", {config.num_classes, config.feature_dim()},
                                config.feature_dim(), rng));
  return m;
}

Model::Model(const Model& other) : config_(other.config_), seed_(other.seed_) {
  for (const auto& g : other.params_) {
    params_.push_back({g.name, CopyLeaf(g.weight), CopyLeaf(g.bias)});
  }
}

Model& Model::operator=(const Model& other) {
  if (this != &other) {
    Model copy(other);
    *this = std::move(copy);
  }
  return *this;
}

size_t Model::CountParams() const {
  size_t total = 0;
  for (const auto& g : params_) {
    total += g.weight->size() + (g.bias ? g.bias->size() : 0);
  }
  return total;
}

void Model::CheckInput(const tc::Node& input, std::span<const tc::FrameMask> masks) const {
  if (input.rank() != 2 && input.rank() != 3) {
    throw Error(ErrorCode::kDimMismatch, "model input must be [D, T] or [B, D, T]");
  }
  const size_t dims = input.dim(input.rank() - 2);
  const size_t frames = input.dim(input.rank() - 1);
  if (dims != config_.input_dim) {
    throw Error(ErrorCode::kDimMismatch, "input has " + std::to_string(dims) +
                                             " dims, model expects " +
                                             std::to_string(config_.input_dim));
  }
  for (const auto& m : masks) {
    if (m.length() != frames) {
      throw Error(ErrorCode::kShapeMismatch, "mask length does not match input frames");
    }
    if (m.real_frames() < kMinFrames) {
      throw Error(ErrorCode::kInputTooShort,
                  std::to_string(m.real_frames()) + " frames, need at least " +
                      std::to_string(kMinFrames));
    }
  }
}

tc::Var Model::ExtractMultiscale(const tc::Var& input, std::span<const tc::FrameMask> masks,
                                 bool training, Rng& rng) const {
  CheckInput(*input, masks);
  std::vector<tc::FrameMask> current(masks.begin(), masks.end());
  tc::Var h = tc::Conv1d(input, params_[0].weight, params_[0].bias);
  std::vector<tc::Var> scales;
  for (size_t block = 1; block <= 4; ++block) {
    h = tc::MaskFrames(h, current);
    h = tc::Conv1d(h, params_[block].weight, params_[block].bias, tc::Padding::kSame);
    h = tc::Elu(h);
    h = tc::Dropout(h, config_.dropout_rate, training, rng);
    tc::Pooled pooled = tc::AvgPool2(h, current);
    h = pooled.output;
    current = std::move(pooled.masks);
    if (block >= 2) scales.push_back(tc::TemporalMaxPool(h, current));
  }
  return tc::Concat(scales);
}

tc::Var Model::Head(const tc::Var& features) const {
  return tc::Linear(features, params_[5].weight, params_[5].bias);
}

tc::Var Model::Forward(const tc::Var& input, std::span<const tc::FrameMask> masks,
                       bool training, Rng& rng) const {
  tc::Var features = ExtractMultiscale(input, masks, training, rng);
  features = tc::Dropout(features, config_.dropout_rate, training, rng);
  return Head(features);
}

std::vector<double> Model::Logits(const dsp::FeatureSequence& fs) const {
  Rng unused(0);
  const tc::FrameMask mask = tc::FrameMask::All(fs.frames);
  return Forward(InputFromFeatures(fs), std::span(&mask, 1), false, unused)->values();
}

std::vector<double> Model::Probabilities(const dsp::FeatureSequence& fs) const {
  return tc::Softmax(Logits(fs));
}

std::vector<double> Model::MultiscaleFeatures(const dsp::FeatureSequence& fs) const {
  Rng unused(0);
  const tc::FrameMask mask = tc::FrameMask::All(fs.frames);
  return ExtractMultiscale(InputFromFeatures(fs), std::span(&mask, 1), false, unused)
      ->values();
}

tc::Var InputFromFeatures(const dsp::FeatureSequence& fs) {
  std::vector<double> v(static_cast<size_t>(fs.frames) * fs.dims);
  for (size_t t = 0; t < fs.frames; ++t) {
    for (size_t d = 0; d < fs.dims; ++d) v[d * fs.frames + t] = fs.at(t, d);
  }
  return tc::MakeVar({fs.dims, fs.frames}, std::move(v), "input");
}

PaddedBatch PadBatch(std::span<const dsp::FeatureSequence* const> sequences) {
  if (sequences.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  const size_t dims = sequences[0]->dims;
  size_t longest = 0;
  for (const auto* fs : sequences) {
    if (fs->dims != dims) throw Error(ErrorCode::kDimMismatch, "batch dims disagree");
    longest = std::max<size_t>(longest, fs->frames);
  }
  PaddedBatch batch;
  std::vector<double> v(sequences.size() * dims * longest, 0.0);
  for (size_t b = 0; b < sequences.size(); ++b) {
    const auto& fs = *sequences[b];
    for (size_t t = 0; t < fs.frames; ++t) {
      for (size_t d = 0; d < dims; ++d) {
        v[(b * dims + d) * longest + t] = fs.at(t, d);
      }
    }
    batch.masks.push_back(tc::FrameMask::Prefix(longest, fs.frames));
  }
  batch.input = tc::MakeVar({sequences.size(), dims, longest}, std::move(v), "input");
  return batch;
}

namespace {

constexpr char kMagic[4] = {'N', 'L', 'M', '1'};
constexpr uint32_t kVersion = 1;

uint32_t Crc32(const uint8_t* data, size_t n) {
  return static_cast<uint32_t>(crc32(crc32(0L, Z_NULL, 0), data, static_cast<uInt>(n)));
}

}  // namespace

std::vector<uint8_t> EncodeModel(const Model& m) {
  const ModelConfig& c = m.config();
  ByteWriter w;
  w.Bytes(kMagic, 4);
  w.U32(kVersion);
  w.U32(c.input_dim);
  for (uint32_t ch : c.channels) w.U32(ch);
  w.U32(c.num_classes);
  w.F64(c.dropout_rate);
  const uint64_t seed = m.seed();
  w.Raw(&seed, sizeof(seed));
  for (const auto& g : m.parameters()) {
    w.Raw(g.weight->values().data(), g.weight->size() * sizeof(double));
    if (g.bias) w.Raw(g.bias->values().data(), g.bias->size() * sizeof(double));
  }
  w.U32(Crc32(w.bytes().data(), w.bytes().size()));
  return std::move(w.bytes());
}

Model DecodeModel(std::span<const uint8_t> bytes) {
  if (bytes.size() < 8) throw Error(ErrorCode::kChecksumMismatch, "checkpoint too short");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, "not an NLM1 checkpoint");
  }
  const size_t body = bytes.size() - 4;
  uint32_t stored_crc;
  std::memcpy(&stored_crc, bytes.data() + body, 4);
  if (Crc32(bytes.data(), body) != stored_crc) {
    throw Error(ErrorCode::kChecksumMismatch, "checkpoint CRC32 mismatch");
  }
  ByteReader r(bytes.data() + 4, body - 4);
  uint32_t version = 0;
  r.U32(version);
  if (version != kVersion) {
    throw Error(ErrorCode::kVersionUnsupported, "NLM1 version " + std::to_string(version));
  }
  ModelConfig c;
  uint64_t seed = 0;
  bool ok = r.U32(c.input_dim);
  for (uint32_t& ch : c.channels) ok = ok && r.U32(ch);
  ok = ok && r.U32(c.num_classes) && r.F64(c.dropout_rate) && r.Raw(&seed, sizeof(seed));
  if (!ok) throw Error(ErrorCode::kChecksumMismatch, "checkpoint config cut short");
  try {
    c.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kChecksumMismatch, std::string("bad config: ") + e.what());
  }
  if (r.remaining() != ExpectedParamCount(c) * sizeof(double)) {
    throw Error(ErrorCode::kChecksumMismatch, "checkpoint payload size disagrees with config");
  }
  Model m = Model::Build(c, seed);
  for (const auto& g : m.parameters()) {
    r.Raw(g.weight->values().data(), g.weight->size() * sizeof(double));
    if (g.bias) r.Raw(g.bias->values().data(), g.bias->size() * sizeof(double));
  }
  return m;
}

void SaveModel(const Model& m, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeModel(m));
}

Model LoadModel(const std::filesystem::path& path) {
  return DecodeModel(ReadFileBytes(path));
}

}  // namespace nlv::models
