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

#include "nlv/experiments/experiments.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "nlv/attribution/attribution.h"
#include "nlv/common/error.h"
#include "nlv/common/random.h"
#include "nlv/tensorcore/adam.h"
#include "nlv/tensorcore/ops.h"

namespace nlv::experiments {

std::string_view TaskName(Task task) { return task == Task::kLangId ? "langid" : "asr"; }

std::optional<Task> ParseTask(std::string_view name) {
  if (name == "langid") return Task::kLangId;
  if (name == "asr") return Task::kAsr;
  return std::nullopt;
}

uint32_t NumClasses(Task task) { return task == Task::kLangId ? 3 : 105; }

models::ModelConfig ConfigFor(Task task, uint32_t input_dim, double dropout_rate) {
  auto config = task == Task::kLangId ? models::ModelConfig::LangId(input_dim)
                                      : models::ModelConfig::Asr(input_dim);
  config.dropout_rate = dropout_rate;
  return config;
}

FoldPlan MakeFolds(std::span<const ManifestRecord> records, size_t n_folds, double train_frac,
                   uint64_t seed) {
  if (n_folds == 0) throw Error(ErrorCode::kInvalidArgument, "n_folds must be >= 1");
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "train_frac must lie in (0, 1)");
  }
  std::map<uint32_t, std::vector<size_t>> by_class;
  for (size_t i = 0; i < records.size(); ++i) by_class[records[i].label].push_back(i);
  for (const auto& [label, members] : by_class) {
    if (members.size() < 2) {
      throw Error(ErrorCode::kClassTooSmall, "class " + std::to_string(label) + " has " +
                                                 std::to_string(members.size()) + " record(s)");
    }
  }
  FoldPlan plan;
  plan.seed = seed;
  for (size_t f = 0; f < n_folds; ++f) {
    Rng rng(DeriveSeed(seed, f));
    Fold fold;
    for (const auto& [label, members] : by_class) {
      std::vector<size_t> order = members;
      rng.Shuffle(order);
      const size_t n = order.size();
      size_t k = static_cast<size_t>(std::floor(train_frac * static_cast<double>(n) + 0.5));
      k = std::clamp<size_t>(k, 1, n - 1);
      fold.train.insert(fold.train.end(), order.begin(), order.begin() + static_cast<long>(k));
      fold.validation.insert(fold.validation.end(), order.begin() + static_cast<long>(k),
                             order.end());
    }
    std::sort(fold.train.begin(), fold.train.end());
    std::sort(fold.validation.begin(), fold.validation.end());
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw Error(ErrorCode::kInvalidConfig, "epochs must be >= 1");
  if (batch_size < 1) throw Error(ErrorCode::kInvalidConfig, "batch_size must be >= 1");
  if (!(lr > 0.0)) throw Error(ErrorCode::kInvalidConfig, "lr must be > 0");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "dropout_rate must lie in [0, 1)");
  }
}

Dataset LoadDataset(std::vector<ManifestRecord> records,
                    const std::filesystem::path& features_dir) {
  Dataset data;
  data.features.reserve(records.size());
  for (const auto& r : records) {
    const auto path = FeaturePath(features_dir, r);
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::kMissingFeature, path.string());
    }
    auto fs = dsp::ReadFeatures(path);
    if (fs.frames < models::kMinFrames) {
      throw Error(ErrorCode::kInputTooShort, path.string() + ": " + std::to_string(fs.frames) +
                                                 " frames, need " +
                                                 std::to_string(models::kMinFrames));
    }
    if (!data.features.empty() && fs.dims != data.features[0].dims) {
      throw Error(ErrorCode::kDimMismatch, path.string() + ": " + std::to_string(fs.dims) +
                                               " dims, expected " +
                                               std::to_string(data.features[0].dims));
    }
    data.features.push_back(std::move(fs));
  }
  data.records = std::move(records);
  return data;
}

std::vector<Group> DefaultGrouping() {
  std::vector<Group> groups;
  groups.push_back({"overall", [](const ManifestRecord&) { return true; }});
  for (std::string lang : {"francais", "maninka", "pular", "susu"}) {
    groups.push_back({"language:" + lang,
                      [lang](const ManifestRecord& r) { return r.language == lang; }});
  }
  groups.push_back({"names", [](const ManifestRecord& r) {
                      return !r.utterance_id.empty() && r.utterance_id[0] == '5';
                    }});
  groups.push_back({"native_language", [](const ManifestRecord& r) {
                      return r.language == r.speaker_mothertongue;
                    }});
  return groups;
}

std::vector<uint32_t> Predict(const models::Model& m, const Dataset& data,
                              std::span<const size_t> indices) {
  std::vector<uint32_t> out;
  out.reserve(indices.size());
  for (size_t i : indices) {
    const auto logits = m.Logits(data.features[i]);
    out.push_back(static_cast<uint32_t>(std::max_element(logits.begin(), logits.end()) -
                                        logits.begin()));
  }
  return out;
}

GroupAccuracies TallyGroups(const std::vector<ManifestRecord>& records,
                            std::span<const size_t> indices,
                            std::span<const uint32_t> predicted,
                            const std::vector<Group>& grouping) {
  if (predicted.size() != indices.size()) {
    throw Error(ErrorCode::kShapeMismatch, "one prediction per record expected");
  }
  GroupAccuracies out;
  for (size_t k = 0; k < indices.size(); ++k) {
    const auto& r = records[indices[k]];
    for (const auto& g : grouping) {
      if (!g.member(r)) continue;
      auto& acc = out[g.name];
      ++acc.total;
      if (predicted[k] == r.label) ++acc.correct;
    }
  }
  return out;
}

GroupAccuracies Evaluate(const models::Model& m, const Dataset& data,
                         std::span<const size_t> indices, const std::vector<Group>& grouping) {
  const auto predicted = Predict(m, data, indices);
  return TallyGroups(data.records, indices, predicted, grouping);
}

FoldResult TrainFold(const Dataset& data, const Fold& fold, size_t fold_index,
                     const models::ModelConfig& model_config, const TrainConfig& train_config) {
  train_config.Validate();
  if (fold.train.empty() || fold.validation.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "fold needs training and validation records");
  }
  models::ModelConfig config = model_config;
  config.dropout_rate = train_config.dropout_rate;
  models::Model model =
      models::Model::Build(config, DeriveSeed(train_config.seed, 2 * fold_index));
  Rng rng(DeriveSeed(train_config.seed, 2 * fold_index + 1));
  tc::AdamState adam;
  adam.lr = train_config.lr;

  FoldResult best{model, FoldReport{}};
  best.report.fold = fold_index;
  bool have_best = false;
  uint64_t steps = 0;
  std::vector<size_t> order = fold.train;
  for (uint32_t epoch = 1; epoch <= train_config.epochs; ++epoch) {
    rng.Shuffle(order);
    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t start = 0; start < order.size(); start += train_config.batch_size) {
      if (train_config.max_steps && steps >= train_config.max_steps) break;
      const size_t end = std::min(order.size(), start + train_config.batch_size);
      std::vector<const dsp::FeatureSequence*> seqs;
      std::vector<int> targets;
      for (size_t k = start; k < end; ++k) {
        seqs.push_back(&data.features[order[k]]);
        targets.push_back(static_cast<int>(data.records[order[k]].label));
      }
      auto batch = models::PadBatch(seqs);
      auto logits = model.Forward(batch.input, batch.masks, true, rng);
      auto loss = tc::SoftmaxCrossEntropy(logits, targets);
      tc::Backward(loss);
      tc::AdamStep(model.parameters(), adam);
      loss_sum += loss->values()[0];
      ++batches;
      ++steps;
    }
    if (batches == 0) break;
    const auto predicted = Predict(model, data, fold.validation);
    size_t correct = 0;
    for (size_t k = 0; k < predicted.size(); ++k) {
      if (predicted[k] == data.records[fold.validation[k]].label) ++correct;
    }
    const double accuracy =
        100.0 * static_cast<double>(correct) / static_cast<double>(predicted.size());
    best.report.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
    best.report.epoch_accuracy.push_back(accuracy);
    if (!have_best || accuracy > best.report.val_accuracy) {
      have_best = true;
      best.model = model;
      best.report.best_epoch = epoch;
      best.report.val_accuracy = accuracy;
    }
  }
  best.report.groups = Evaluate(best.model, data, fold.validation, DefaultGrouping());
  for (size_t i : fold.validation) {
    best.report.kl.push_back(
        attribution::KlPerExample(best.model.Probabilities(data.features[i]),
                                  data.records[i].label));
  }
  return best;
}

}  // namespace nlv::experiments
