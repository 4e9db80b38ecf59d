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

#include "nlv/experiments/report.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "nlv/common/binary_io.h"
#include "nlv/common/error.h"

namespace nlv::experiments {

using nlohmann::json;

MeanSem Aggregate(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(ErrorCode::kTooFewFolds, "need at least 2 values, got " +
                                             std::to_string(values.size()));
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

std::string FormatMeanSem(const MeanSem& m) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f \xC2\xB1 %.2f", m.mean, m.sem);
  return buf;
}

namespace {

json RealOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double RealFrom(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

json Reals(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(RealOrNull(x));
  return out;
}

std::vector<double> RealsFrom(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(RealFrom(x));
  return out;
}

json ToJson(const models::ModelConfig& c) {
  return {{"input_dim", c.input_dim},
          {"channels", c.channels},
          {"num_classes", c.num_classes},
          {"dropout_rate", c.dropout_rate}};
}

json ToJson(const TrainConfig& c) {
  return {{"epochs", c.epochs}, {"batch_size", c.batch_size}, {"lr", c.lr},
          {"dropout_rate", c.dropout_rate}, {"seed", c.seed}, {"max_steps", c.max_steps}};
}

json ToJson(const GroupAccuracies& groups) {
  json out = json::object();
  for (const auto& [name, g] : groups) {
    out[name] = {{"correct", g.correct}, {"total", g.total}, {"accuracy", g.accuracy()}};
  }
  return out;
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kSchemaVersionMismatch, std::string("report lacks '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

std::string EncodeReport(const RunReport& r) {
  json doc;
  doc["version"] = r.version;
  doc["task"] = r.task;
  doc["model_config"] = ToJson(r.model_config);
  doc["train_config"] = ToJson(r.train_config);
  doc["train_frac"] = r.train_frac;
  doc["folds"] = json::array();
  for (const auto& f : r.folds) {
    doc["folds"].push_back({{"fold", f.fold},
                            {"best_epoch", f.best_epoch},
                            {"val_accuracy", f.val_accuracy},
                            {"groups", ToJson(f.groups)},
                            {"epoch_loss", Reals(f.epoch_loss)},
                            {"epoch_accuracy", Reals(f.epoch_accuracy)},
                            {"kl", Reals(f.kl)}});
  }
  doc["aggregate"] = {{"mean", r.aggregate.mean},
                      {"sem", r.aggregate.sem},
                      {"display", FormatMeanSem(r.aggregate)}};
  doc["kl"] = {{"per_example", Reals(r.kl_per_example)}};
  return doc.dump(2) + "\n";
}

RunReport DecodeReport(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaVersionMismatch, std::string("report is not JSON: ") + e.what());
  }
  try {
    RunReport r;
    r.version = Field(doc, "version").get<int>();
    if (r.version != 1) {
      throw Error(ErrorCode::kSchemaVersionMismatch,
                  "report version " + std::to_string(r.version));
    }
    r.task = Field(doc, "task").get<std::string>();
    const json& mc = Field(doc, "model_config");
    r.model_config.input_dim = Field(mc, "input_dim").get<uint32_t>();
    r.model_config.channels = Field(mc, "channels").get<std::array<uint32_t, 5>>();
    r.model_config.num_classes = Field(mc, "num_classes").get<uint32_t>();
    r.model_config.dropout_rate = Field(mc, "dropout_rate").get<double>();
    const json& tc = Field(doc, "train_config");
    r.train_config.epochs = Field(tc, "epochs").get<uint32_t>();
    r.train_config.batch_size = Field(tc, "batch_size").get<uint32_t>();
    r.train_config.lr = Field(tc, "lr").get<double>();
    r.train_config.dropout_rate = Field(tc, "dropout_rate").get<double>();
    r.train_config.seed = Field(tc, "seed").get<uint64_t>();
    r.train_config.max_steps = Field(tc, "max_steps").get<uint64_t>();
    r.train_frac = Field(doc, "train_frac").get<double>();
    for (const auto& f : Field(doc, "folds")) {
      FoldReport fr;
      fr.fold = Field(f, "fold").get<size_t>();
      fr.best_epoch = Field(f, "best_epoch").get<uint32_t>();
      fr.val_accuracy = Field(f, "val_accuracy").get<double>();
      for (const auto& [name, g] : Field(f, "groups").items()) {
        fr.groups[name] = {Field(g, "correct").get<size_t>(), Field(g, "total").get<size_t>()};
      }
      fr.epoch_loss = RealsFrom(Field(f, "epoch_loss"));
      fr.epoch_accuracy = RealsFrom(Field(f, "epoch_accuracy"));
      fr.kl = RealsFrom(Field(f, "kl"));
      r.folds.push_back(std::move(fr));
    }
    const json& agg = Field(doc, "aggregate");
    r.aggregate = {Field(agg, "mean").get<double>(), Field(agg, "sem").get<double>()};
    r.kl_per_example = RealsFrom(Field(Field(doc, "kl"), "per_example"));
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaVersionMismatch, std::string("malformed report: ") + e.what());
  }
}

void WriteReport(const RunReport& report, const std::filesystem::path& path) {
  WriteFileAtomic(path, EncodeReport(report));
}

RunReport ReadReport(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return DecodeReport(std::string(bytes.begin(), bytes.end()));
}

CvResult RunCrossValidation(const Dataset& data, const CvOptions& options,
                            const std::function<void(const FoldReport&)>& on_fold) {
  options.train.Validate();
  if (data.records.empty()) throw Error(ErrorCode::kInvalidArgument, "empty dataset");
  const FoldPlan plan = MakeFolds(data.records, options.n_folds, options.train_frac,
                                  options.train.seed);
  const auto config = ConfigFor(options.task, data.features[0].dims, options.train.dropout_rate);

  std::vector<std::optional<FoldResult>> results(plan.folds.size());
  std::atomic<size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto worker = [&] {
    for (size_t f = next++; f < plan.folds.size(); f = next++) {
      try {
        results[f] = TrainFold(data, plan.folds[f], f, config, options.train);
        if (on_fold) on_fold(results[f]->report);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = plan.folds.size();
      }
    }
  };
  const size_t jobs = std::max<size_t>(1, std::min(options.jobs, plan.folds.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (error) std::rethrow_exception(error);

  CvResult out;
  out.report.task = std::string(TaskName(options.task));
  out.report.model_config = config;
  out.report.train_config = options.train;
  out.report.train_frac = options.train_frac;
  std::vector<double> accuracies;
  for (auto& r : results) {
    accuracies.push_back(r->report.val_accuracy);
    out.report.kl_per_example.insert(out.report.kl_per_example.end(), r->report.kl.begin(),
                                     r->report.kl.end());
    out.report.folds.push_back(std::move(r->report));
    out.models.push_back(std::move(r->model));
  }
  out.report.aggregate = Aggregate(accuracies);
  return out;
}

}  // namespace nlv::experiments
