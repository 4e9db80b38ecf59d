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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlv/attribution/attribution.h"
#include "nlv/common/error.h"
#include "nlv/tensorcore/ops.h"

namespace nlv::attribution {

GradientField Saliency(const models::Model& model, const dsp::FeatureSequence& fs) {
  models::Model local = model;
  tc::Var input = models::InputFromFeatures(fs);
  const tc::FrameMask mask = tc::FrameMask::All(fs.frames);
  Rng unused(0);
  tc::Var logits = local.Forward(input, std::span(&mask, 1), false, unused);
  const auto& lv = logits->values();
  const size_t predicted =
      static_cast<size_t>(std::max_element(lv.begin(), lv.end()) - lv.begin());
  tc::Backward(tc::Pick(logits, predicted));

  GradientField field;
  field.frames = fs.frames;
  field.dims = fs.dims;
  field.values.resize(field.frames * field.dims);
  const auto& g = input->grad();  // [D, T]
  for (size_t t = 0; t < field.frames; ++t) {
    for (size_t d = 0; d < field.dims; ++d) {
      field.values[t * field.dims + d] = std::fabs(g[d * field.frames + t]);
    }
  }
  return field;
}

AttentionSignal ComputeAttention(const GradientField& grads) {
  if (grads.frames < 1 || grads.dims < 1 ||
      grads.values.size() != grads.frames * grads.dims) {
    throw Error(ErrorCode::kInvalidArgument, "gradient field must be at least 1x1");
  }
  for (double v : grads.values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "non-finite gradient entry");
  }
  std::vector<double> per_frame(grads.frames, 0.0);
  std::vector<double> column(grads.frames);
  for (size_t d = 0; d < grads.dims; ++d) {
    double peak = -std::numeric_limits<double>::infinity();
    for (size_t t = 0; t < grads.frames; ++t) peak = std::max(peak, grads.at(t, d));
    double total = 0.0;
    for (size_t t = 0; t < grads.frames; ++t) {
      column[t] = std::exp(grads.at(t, d) - peak);
      total += column[t];
    }
    for (size_t t = 0; t < grads.frames; ++t) per_frame[t] += column[t] / total;
  }
  double total = 0.0;
  for (double v : per_frame) total += v;
  for (double& v : per_frame) v /= total;
  return AttentionSignal{std::move(per_frame)};
}

double UnitDurationMs(size_t frame_count, double frame_period_ms, double receptive_field_ms) {
  return static_cast<double>(frame_count - 1) * frame_period_ms + receptive_field_ms;
}

double SegmentThreshold(std::span<const double> weights) {
  const double n = static_cast<double>(weights.size());
  double mean = 0.0;
  for (double w : weights) mean += w;
  mean /= n;
  double var = 0.0;
  for (double w : weights) var += (w - mean) * (w - mean);
  return mean + 2.0 * std::sqrt(var / n);
}

std::vector<AcousticUnit> SegmentUnits(std::span<const double> weights,
                                       const dsp::FeatureSequence& fs) {
  if (weights.size() < 2) {
    throw Error(ErrorCode::kInputTooShort, "segmentation needs at least 2 frames");
  }
  if (weights.size() != fs.frames) {
    throw Error(ErrorCode::kShapeMismatch, "attention length != feature frames");
  }
  const double threshold = SegmentThreshold(weights);
  std::vector<AcousticUnit> units;
  size_t t = 0;
  while (t < weights.size()) {
    if (!(weights[t] > threshold)) {
      ++t;
      continue;
    }
    AcousticUnit unit;
    unit.start_frame = t;
    while (t < weights.size() && weights[t] > threshold) ++t;
    unit.end_frame = t - 1;
    unit.frame_count = unit.end_frame - unit.start_frame + 1;
    unit.duration_ms =
        UnitDurationMs(unit.frame_count, fs.frame_period_ms, fs.receptive_field_ms);
    unit.embedding.assign(fs.dims, 0.0);
    for (size_t f = unit.start_frame; f <= unit.end_frame; ++f) {
      for (size_t d = 0; d < fs.dims; ++d) unit.embedding[d] += fs.at(f, d);
    }
    for (double& v : unit.embedding) v /= static_cast<double>(unit.frame_count);
    units.push_back(std::move(unit));
  }
  return units;
}

std::vector<double> EnsembleFeatures(std::span<const models::Model> models,
                                     const dsp::FeatureSequence& fs) {
  if (models.empty()) throw Error(ErrorCode::kInvalidArgument, "empty ensemble");
  std::vector<double> out;
  for (const auto& m : models) {
    if (!(m.config() == models[0].config())) {
      throw Error(ErrorCode::kConfigMismatch, "ensemble members have different configs");
    }
    const auto part = m.MultiscaleFeatures(fs);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

double KlPerExample(std::span<const double> pred, size_t true_class) {
  if (true_class >= pred.size()) {
    throw Error(ErrorCode::kBadTarget, "true class outside prediction vector");
  }
  double total = 0.0;
  for (double p : pred) total += p;
  if (std::fabs(total - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "prediction does not sum to 1");
  }
  const double p = pred[true_class];
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return std::max(0.0, -std::log(p));
}

}  // namespace nlv::attribution
