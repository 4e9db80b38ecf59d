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

#ifndef NLV_ATTRIBUTION_ATTRIBUTION_H_
#define NLV_ATTRIBUTION_ATTRIBUTION_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nlv/dsp/features.h"
#include "nlv/models/model.h"

namespace nlv::attribution {

// Frame-major [frames, dims] matrix of gradient magnitudes.
struct GradientField {
  size_t frames = 0;
  size_t dims = 0;
  std::vector<double> values;

  double at(size_t t, size_t d) const { return values[t * dims + d]; }
};

// |d logit_y / d input[t, d]| with y the predicted class, eval mode. The
// model is copied so concurrent callers never touch shared gradient buffers.
GradientField Saliency(const models::Model& model, const dsp::FeatureSequence& fs);

// Non-negative per-frame weights summing to 1.
struct AttentionSignal {
  std::vector<double> weights;
};

// Softmax over time independently per feature dimension, summed across
// dimensions, then renormalized over the sequence.
AttentionSignal ComputeAttention(const GradientField& grads);

struct AcousticUnit {
  size_t start_frame = 0;
  size_t end_frame = 0;  // inclusive
  size_t frame_count = 0;
  double duration_ms = 0.0;
  std::vector<double> embedding;  // mean feature over the span
};

// (c - 1) * period + receptive field.
double UnitDurationMs(size_t frame_count, double frame_period_ms, double receptive_field_ms);

// Maximal runs of frames whose weight strictly exceeds mean + 2 * std
// (population std). The weights need not be normalized.
std::vector<AcousticUnit> SegmentUnits(std::span<const double> weights,
                                       const dsp::FeatureSequence& fs);
double SegmentThreshold(std::span<const double> weights);

// Concatenated multi-scale features of several models, in the given order.
std::vector<double> EnsembleFeatures(std::span<const models::Model> models,
                                     const dsp::FeatureSequence& fs);

// KL(onehot(true) || pred) = -log pred[true]. Returns +infinity when the
// true class has zero predicted probability.
double KlPerExample(std::span<const double> pred, size_t true_class);

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 4.0;
  int exaggeration_iterations = 100;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iteration = 250;
  double perplexity_tolerance = 1e-4;
  uint64_t seed = 0;
};

struct Embedding2D {
  std::vector<std::array<double, 2>> points;
  double kl_divergence = 0.0;  // at the final iterate
  double initial_kl = 0.0;     // at the random initialization
};

// Row-major N x M input. Exact O(N^2) t-SNE.
Embedding2D Tsne(const std::vector<std::vector<double>>& points, const TsneConfig& config);

// Symmetrized input affinities (sum to 1), row-major N x N. Each row's
// Gaussian bandwidth is binary-searched to hit the target perplexity.
std::vector<double> JointProbabilities(const std::vector<std::vector<double>>& points,
                                       double perplexity, double tolerance = 1e-4);
// Student-t output affinities (sum to 1), row-major N x N.
std::vector<double> StudentQ(const std::vector<std::array<double, 2>>& y);
double KlDivergence(std::span<const double> p, std::span<const double> q);

// KL gradient for the 2-D map. `reference` is the serial loop used as the
// test oracle; `parallel` distributes rows over OpenMP threads.
namespace reference {
std::vector<std::array<double, 2>> TsneGradient(std::span<const double> p,
                                                const std::vector<std::array<double, 2>>& y);
}  // namespace reference
namespace parallel {
std::vector<std::array<double, 2>> TsneGradient(std::span<const double> p,
                                                const std::vector<std::array<double, 2>>& y);
}  // namespace parallel

// Audacity label track, one "start<TAB>end<TAB>label" line per unit.
std::string AudacityLabels(std::span<const AcousticUnit> units, double frame_period_ms,
                           const std::string& label_prefix = "unit");

struct UnitRecord {
  std::string clip_id;
  AcousticUnit unit;
};

// clip_id,start_frame,end_frame,duration_ms,dim_0..dim_{D-1}
std::string UnitsCsv(std::span<const UnitRecord> units, size_t dims);
std::vector<UnitRecord> ParseUnitsCsv(const std::string& text);

}  // namespace nlv::attribution

#endif  // NLV_ATTRIBUTION_ATTRIBUTION_H_
