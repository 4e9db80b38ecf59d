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

#ifndef NLV_EXPERIMENTS_REPORT_H_
#define NLV_EXPERIMENTS_REPORT_H_

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nlv/experiments/experiments.h"

namespace nlv::experiments {

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;  // sample std (n - 1) / sqrt(n)

  bool operator==(const MeanSem&) const = default;
};

MeanSem Aggregate(std::span<const double> values);
// "79.09 ± 1.32"
std::string FormatMeanSem(const MeanSem& m);

struct RunReport {
  int version = 1;
  std::string task;
  models::ModelConfig model_config;
  TrainConfig train_config;
  double train_frac = 0.6;
  std::vector<FoldReport> folds;
  MeanSem aggregate;
  std::vector<double> kl_per_example;  // +inf serializes as null

  bool operator==(const RunReport&) const = default;
};

std::string EncodeReport(const RunReport& report);
RunReport DecodeReport(const std::string& json_text);
void WriteReport(const RunReport& report, const std::filesystem::path& path);
RunReport ReadReport(const std::filesystem::path& path);

struct CvOptions {
  Task task = Task::kLangId;
  size_t n_folds = 10;
  double train_frac = 0.6;
  size_t jobs = 1;
  TrainConfig train;
};

struct CvResult {
  RunReport report;
  std::vector<models::Model> models;  // fold-best, in fold order
};

// Folds train independently (up to `jobs` at a time); the report does not
// depend on `jobs`. `on_fold` is called from worker threads as folds finish.
CvResult RunCrossValidation(const Dataset& data, const CvOptions& options,
                            const std::function<void(const FoldReport&)>& on_fold = {});

}  // namespace nlv::experiments

#endif  // NLV_EXPERIMENTS_REPORT_H_
