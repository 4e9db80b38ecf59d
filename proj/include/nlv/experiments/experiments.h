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

#ifndef NLV_EXPERIMENTS_EXPERIMENTS_H_
#define NLV_EXPERIMENTS_EXPERIMENTS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlv/dsp/features.h"
#include "nlv/experiments/manifest.h"
#include "nlv/models/model.h"

namespace nlv::experiments {

enum class Task { kLangId, kAsr };

std::string_view TaskName(Task task);
std::optional<Task> ParseTask(std::string_view name);
uint32_t NumClasses(Task task);
models::ModelConfig ConfigFor(Task task, uint32_t input_dim, double dropout_rate);

// Language ids of the three-way identification task.
inline constexpr std::string_view kLangIdLanguages[] = {"maninka", "pular", "susu"};

struct Fold {
  std::vector<size_t> train;       // record indices, ascending
  std::vector<size_t> validation;  // record indices, ascending

  bool operator==(const Fold&) const = default;
};

struct FoldPlan {
  uint64_t seed = 0;
  std::vector<Fold> folds;

  bool operator==(const FoldPlan&) const = default;
};

// Independent stratified resamples: in every fold each class contributes
// round-half-up(train_frac * n_class) records to training, clamped so both
// sides are non-empty.
FoldPlan MakeFolds(std::span<const ManifestRecord> records, size_t n_folds = 10,
                   double train_frac = 0.6, uint64_t seed = 0);

struct TrainConfig {
  uint32_t epochs = 100;
  uint32_t batch_size = 16;
  double lr = 1e-3;
  double dropout_rate = 0.1;
  uint64_t seed = 0;
  uint64_t max_steps = 0;  // stop after this many updates; 0 for no cap

  void Validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct Dataset {
  std::vector<ManifestRecord> records;
  std::vector<dsp::FeatureSequence> features;  // parallel to records
};

// Reads FeaturePath(features_dir, r) for every record. Throws MissingFeature
// or InputTooShort naming the offending file.
Dataset LoadDataset(std::vector<ManifestRecord> records,
                    const std::filesystem::path& features_dir);

struct GroupAccuracy {
  size_t correct = 0;
  size_t total = 0;

  double accuracy() const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
  }
  bool operator==(const GroupAccuracy&) const = default;
};

using GroupAccuracies = std::map<std::string, GroupAccuracy>;

struct Group {
  std::string name;
  std::function<bool(const ManifestRecord&)> member;
};

// overall, language:<name> for each spoken language, names (utterance_id
// starting with '5'), native_language (language == speaker_mothertongue).
std::vector<Group> DefaultGrouping();

// Arg-max predictions, first maximum on ties.
std::vector<uint32_t> Predict(const models::Model& m, const Dataset& data,
                              std::span<const size_t> indices);

// Counts predictions[k] == label of records[indices[k]] per group. Groups
// with no member records are absent from the result.
GroupAccuracies TallyGroups(const std::vector<ManifestRecord>& records,
                            std::span<const size_t> indices,
                            std::span<const uint32_t> predicted,
                            const std::vector<Group>& grouping);

GroupAccuracies Evaluate(const models::Model& m, const Dataset& data,
                         std::span<const size_t> indices, const std::vector<Group>& grouping);

struct FoldReport {
  size_t fold = 0;
  uint32_t best_epoch = 0;  // 1-based
  double val_accuracy = 0.0;
  GroupAccuracies groups;
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;
  std::vector<double> kl;  // per validation example, best model

  bool operator==(const FoldReport&) const = default;
};

struct FoldResult {
  models::Model model;
  FoldReport report;
};

// Mini-batch Adam on the fold's training records; keeps the epoch with the
// highest validation accuracy, earliest on ties. Deterministic given
// (train_config.seed, fold_index).
FoldResult TrainFold(const Dataset& data, const Fold& fold, size_t fold_index,
                     const models::ModelConfig& model_config, const TrainConfig& train_config);

}  // namespace nlv::experiments

#endif  // NLV_EXPERIMENTS_EXPERIMENTS_H_
