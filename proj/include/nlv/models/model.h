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

#ifndef NLV_MODELS_MODEL_H_
#define NLV_MODELS_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nlv/common/random.h"
#include "nlv/dsp/features.h"
#include "nlv/tensorcore/node.h"

namespace nlv::models {

struct ModelConfig {
  uint32_t input_dim = 512;
  // c0 for the 1x1 input convolution, c1..c4 for the feature blocks.
  std::array<uint32_t, 5> channels{3, 1, 3, 3, 3};
  uint32_t num_classes = 3;
  double dropout_rate = 0.1;

  // Length of the multi-scale vector fed to the head: c2 + c3 + c4.
  uint32_t feature_dim() const { return channels[2] + channels[3] + channels[4]; }
  void Validate() const;

  static ModelConfig LangId(uint32_t input_dim);
  static ModelConfig Asr(uint32_t input_dim);

  bool operator==(const ModelConfig&) const = default;
};

// Four pooling stages halve the length four times.
inline constexpr size_t kMinFrames = 16;

// Closed-form parameter count for a config.
size_t ExpectedParamCount(const ModelConfig& config);

// Multi-scale 1-D CNN:
//
//   [D, T] -> conv1x1(c0)
//          -> 4 x [conv3(c_i, same) -> ELU -> dropout -> avgpool(2, 2)]
//          -> max over time of blocks 2, 3, 4, concatenated
//          -> dropout -> linear(K)
//
// Copies are deep; parameters are never shared between Model objects.
class Model {
 public:
  static Model Build(const ModelConfig& config, uint64_t seed);

  Model(const Model& other);
  Model& operator=(const Model& other);
  Model(Model&&) noexcept = default;
  Model& operator=(Model&&) noexcept = default;

  const ModelConfig& config() const { return config_; }
  uint64_t seed() const { return seed_; }
  std::span<const tc::ParameterGroup> parameters() const { return params_; }
  const tc::ParameterGroup& group(size_t i) const { return params_[i]; }
  size_t CountParams() const;

  // Batched graph entry points. `input` is [D, T] or [B, D, T] and carries one
  // mask per batch element. Every sequence needs at least kMinFrames real
  // frames. `rng` drives dropout and is untouched in eval mode.
  tc::Var Forward(const tc::Var& input, std::span<const tc::FrameMask> masks,
                  bool training, Rng& rng) const;
  tc::Var ExtractMultiscale(const tc::Var& input, std::span<const tc::FrameMask> masks,
                            bool training, Rng& rng) const;
  tc::Var Head(const tc::Var& features) const;

  // Eval-mode conveniences on a single feature sequence.
  std::vector<double> Logits(const dsp::FeatureSequence& fs) const;
  std::vector<double> Probabilities(const dsp::FeatureSequence& fs) const;
  std::vector<double> MultiscaleFeatures(const dsp::FeatureSequence& fs) const;

 private:
  Model(ModelConfig config, uint64_t seed) : config_(config), seed_(seed) {}

  void CheckInput(const tc::Node& input, std::span<const tc::FrameMask> masks) const;

  ModelConfig config_;
  uint64_t seed_ = 0;
  std::vector<tc::ParameterGroup> params_;  // conv0, block1..block4, head
};

// [D, T] input node from a frame-major feature sequence.
tc::Var InputFromFeatures(const dsp::FeatureSequence& fs);

// Pads a batch of sequences with zero frames to the longest one.
struct PaddedBatch {
  tc::Var input;  // [B, D, T_max]
  std::vector<tc::FrameMask> masks;
};
PaddedBatch PadBatch(std::span<const dsp::FeatureSequence* const> sequences);

// NLM1 checkpoint:
//   "NLM1" | u32 version | u32 input_dim | 5 x u32 channels | u32 K |
//   f64 dropout | u64 seed | per group (conv0, block1..4, head):
//   weight f64 values then bias f64 values | u32 CRC32 of all prior bytes.
std::vector<uint8_t> EncodeModel(const Model& m);
Model DecodeModel(std::span<const uint8_t> bytes);
void SaveModel(const Model& m, const std::filesystem::path& path);
Model LoadModel(const std::filesystem::path& path);

}  // namespace nlv::models

#endif  // NLV_MODELS_MODEL_H_
