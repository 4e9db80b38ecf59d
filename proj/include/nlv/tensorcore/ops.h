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

#ifndef NLV_TENSORCORE_OPS_H_
#define NLV_TENSORCORE_OPS_H_

#include <span>
#include <utility>
#include <vector>

#include "nlv/common/random.h"
#include "nlv/tensorcore/node.h"

// Differentiable layer set of the multi-scale CNN.
//
// Sequence ops accept [channels, frames] or a batch [batch, channels, frames];
// the output keeps the input's rank. Vector ops accept [features] or
// [batch, features]. Masks are given per batch element.
namespace nlv::tc {

enum class Padding { kSame, kNone };

Var Conv1d(const Var& input, const Var& weight, const Var& bias,
           Padding padding = Padding::kSame);

// ELU with alpha = 1.
Var Elu(const Var& x);

// Inverted dropout. In eval mode, or with rate 0, returns x unchanged.
Var Dropout(const Var& x, double rate, bool training, Rng& rng);

// Zeroes padded frames so that batched sequences behave like their unpadded
// originals under same-padded convolution.
Var MaskFrames(const Var& x, std::span<const FrameMask> masks);

struct Pooled {
  Var output;
  std::vector<FrameMask> masks;
};

// Kernel 2, stride 2 average pooling over frames; an odd trailing frame is
// dropped. An output frame is real iff both pooled frames were real.
Pooled AvgPool2(const Var& x, std::span<const FrameMask> masks);
Pooled AvgPool2(const Var& x, const FrameMask& mask);

// Max over real frames, per channel. Gradient goes to the first argmax.
Var TemporalMaxPool(const Var& x, std::span<const FrameMask> masks);
Var TemporalMaxPool(const Var& x, const FrameMask& mask);

// Concatenates along the last axis. All parts share the leading dims.
Var Concat(std::span<const Var> parts);

Var Linear(const Var& x, const Var& weight, const Var& bias);

// Mean over the batch of -log softmax(logits)[target]. Targets has one entry
// per row (one entry for rank-1 logits).
Var SoftmaxCrossEntropy(const Var& logits, std::span<const int> targets);
Var SoftmaxCrossEntropy(const Var& logits, int target);

// Small generic helpers used to compose test losses.
Var Add(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Scale(const Var& x, double factor);
Var Sum(const Var& x);
// Selects one element as a scalar.
Var Pick(const Var& x, size_t index);

// Numerically stable softmax of a plain vector.
std::vector<double> Softmax(std::span<const double> logits);

}  // namespace nlv::tc

#endif  // NLV_TENSORCORE_OPS_H_
