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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <set>

#include "gtest/gtest.h"
#include "nlv/common/error.h"
#include "nlv/common/random.h"
#include "nlv/experiments/experiments.h"
#include "nlv/experiments/fixture.h"
#include "nlv/experiments/manifest.h"
#include "nlv/experiments/report.h"

namespace nlv::experiments {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "nlv_experiments_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

const Dataset& LangIdFixture() {
  static const Dataset data = SynthesizeDataset(FixtureSpec{});
  return data;
}

TEST(ManifestTest, FixtureLoadsWithBalancedClasses) {
  const auto& data = LangIdFixture();
  const auto records = ParseManifest(FormatManifest(data.records), 3);
  ASSERT_EQ(records.size(), 84u);
  EXPECT_EQ(records, data.records);
  std::map<uint32_t, int> counts;
  for (const auto& r : records) ++counts[r.label];
  EXPECT_EQ(counts, (std::map<uint32_t, int>{{0, 28}, {1, 28}, {2, 28}}));
}

TEST(ManifestTest, Errors) {
  const std::string header(kManifestHeader);
  const std::string row = "a.wav,s1,p1,d1,susu,101_wake_word,3,30,female,susu\n";
  EXPECT_EQ(CodeOf([&] {
              ParseManifest("recording_session_id,file,speaker_id,device_id,language,"
                            "utterance_id,label,speaker_age,speaker_gender,speaker_mothertongue\n",
                            105);
            }),
            ErrorCode::kHeaderMismatch);
  EXPECT_EQ(CodeOf([&] { ParseManifest("", 105); }), ErrorCode::kHeaderMismatch);
  EXPECT_EQ(CodeOf([&] { ParseManifest(header + "\n" + row, 3); }), ErrorCode::kBadLabel);
  EXPECT_EQ(ParseManifest(header + "\n" + row, 4).size(), 1u);
  EXPECT_EQ(CodeOf([&] { ParseManifest(header + "\n" + row + row, 105); }),
            ErrorCode::kDuplicateFile);
  const std::string clash = "b.wav,s1,p1,d1,susu,101_wake_word,4,30,female,susu\n";
  EXPECT_EQ(CodeOf([&] { ParseManifest(header + "\n" + row + clash, 105); }),
            ErrorCode::kBadLabel);
  const std::string alien = "c.wav,s1,p1,d1,klingon,101_wake_word,3,30,female,susu\n";
  EXPECT_EQ(CodeOf([&] { ParseManifest(header + "\n" + alien, 105); }),
            ErrorCode::kInvalidArgument);
}

TEST(ManifestTest, QuotedFieldsRoundTrip) {
  ManifestRecord r{"dir/a,b.wav", "s \"1\"", "p", "d", "pular", "206_yes", 26, -1, "", "pular"};
  const auto back = ParseManifest(FormatManifest({r}), 105);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], r);
  EXPECT_EQ(FeaturePath("/f", r), std::filesystem::path("/f/dir/a,b.nlf1"));
}

TEST(FoldsTest, FixtureSplitsFiftyOneThirtyThree) {
  const auto& records = LangIdFixture().records;
  const auto plan = MakeFolds(records, 10, 0.6, 42);
  ASSERT_EQ(plan.folds.size(), 10u);
  std::set<std::vector<size_t>> distinct;
  for (const auto& fold : plan.folds) {
    EXPECT_EQ(fold.train.size(), 51u);
    EXPECT_EQ(fold.validation.size(), 33u);
    std::map<uint32_t, int> per_class;
    for (size_t i : fold.train) ++per_class[records[i].label];
    EXPECT_EQ(per_class, (std::map<uint32_t, int>{{0, 17}, {1, 17}, {2, 17}}));
    std::set<size_t> all(fold.train.begin(), fold.train.end());
    for (size_t i : fold.validation) EXPECT_TRUE(all.insert(i).second);
    EXPECT_EQ(all.size(), 84u);
    distinct.insert(fold.train);
  }
  EXPECT_EQ(distinct.size(), 10u);
  EXPECT_EQ(MakeFolds(records, 10, 0.6, 42), plan);
  EXPECT_NE(MakeFolds(records, 10, 0.6, 43), plan);
}

TEST(FoldsTest, StratifiedRoundingProperty) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ManifestRecord> records;
    std::map<uint32_t, size_t> sizes;
    const uint32_t classes = 1 + static_cast<uint32_t>(rng.Below(6));
    for (uint32_t c = 0; c < classes; ++c) {
      sizes[c] = 2 + rng.Below(40);
      for (size_t i = 0; i < sizes[c]; ++i) {
        ManifestRecord r;
        r.label = c;
        records.push_back(r);
      }
    }
    const double frac = rng.Uniform(0.1, 0.9);
    const auto plan = MakeFolds(records, 3, frac, trial);
    for (const auto& fold : plan.folds) {
      std::map<uint32_t, size_t> train;
      for (size_t i : fold.train) ++train[records[i].label];
      for (auto [c, n] : sizes) {
        // Round half up, then keep one record on each side.
        size_t want = static_cast<size_t>(frac * static_cast<double>(n) + 0.5);
        want = std::min(std::max<size_t>(want, 1), n - 1);
        EXPECT_EQ(train[c], want);
      }
    }
  }
}

TEST(FoldsTest, ClassTooSmall) {
  auto records = LangIdFixture().records;
  records.resize(57);  // class 2 keeps a single record
  EXPECT_EQ(CodeOf([&] { MakeFolds(records); }), ErrorCode::kClassTooSmall);
}

TEST(AggregateTest, HandValues) {
  const auto m = Aggregate(std::vector<double>{1, 2, 3});
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_NEAR(m.sem, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(FormatMeanSem(m), "2.00 \xC2\xB1 0.58");
  EXPECT_EQ(Aggregate(std::vector<double>(10, 71.5)).sem, 0.0);
  EXPECT_EQ(FormatMeanSem({79.091, 1.318}), "79.09 \xC2\xB1 1.32");
  EXPECT_EQ(CodeOf([] { Aggregate(std::vector<double>{1.0}); }), ErrorCode::kTooFewFolds);
}

TEST(AggregateTest, MatchesDirectFormula) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + rng.Below(20));
    for (double& x : v) x = rng.Uniform(0, 100);
    long double sum = 0, sum_sq = 0;
    for (double x : v) {
      sum += x;
      sum_sq += static_cast<long double>(x) * x;
    }
    const long double n = v.size();
    const long double mean = sum / n;
    const long double var = (sum_sq - n * mean * mean) / (n - 1);
    const auto m = Aggregate(v);
    EXPECT_NEAR(m.mean, static_cast<double>(mean), 1e-12);
    EXPECT_NEAR(m.sem, static_cast<double>(std::sqrt(var / n)), 1e-12);
  }
}

std::vector<ManifestRecord> AsrStyleRecords(Rng& rng, size_t n) {
  const char* langs[] = {"francais", "maninka", "pular", "susu", "language_independent"};
  std::vector<ManifestRecord> records(n);
  for (size_t i = 0; i < n; ++i) {
    auto& r = records[i];
    r.language = langs[rng.Below(5)];
    r.utterance_id = r.language == std::string("language_independent") ? "503_mariama" : "206_yes";
    r.speaker_mothertongue = langs[rng.Below(4)];
    r.label = static_cast<uint32_t>(rng.Below(3));
  }
  return records;
}

TEST(EvaluateTest, GroupCounting) {
  Rng rng(7);
  const auto records = AsrStyleRecords(rng, 300);
  std::vector<size_t> idx(records.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<uint32_t> predicted(records.size());
  for (auto& p : predicted) p = static_cast<uint32_t>(rng.Below(3));
  const auto groups = TallyGroups(records, idx, predicted, DefaultGrouping());

  size_t correct = 0, tagged_correct = 0, tagged_total = 0;
  size_t lang_correct = 0, lang_total = 0;
  for (size_t i = 0; i < records.size(); ++i) {
    const bool ok = predicted[i] == records[i].label;
    correct += ok;
    if (records[i].language != "language_independent") {
      tagged_correct += ok;
      ++tagged_total;
    }
  }
  for (const auto& [name, g] : groups) {
    if (name.rfind("language:", 0) == 0) {
      lang_correct += g.correct;
      lang_total += g.total;
    }
  }
  EXPECT_EQ(groups.at("overall").correct, correct);
  EXPECT_EQ(groups.at("overall").total, 300u);
  EXPECT_EQ(lang_correct, tagged_correct);
  EXPECT_EQ(lang_total, tagged_total);
  EXPECT_EQ(groups.at("names").total + tagged_total, 300u);

  // Permuting the record order changes nothing.
  std::vector<size_t> perm = idx;
  rng.Shuffle(perm);
  std::vector<uint32_t> perm_pred(perm.size());
  for (size_t k = 0; k < perm.size(); ++k) perm_pred[k] = predicted[perm[k]];
  EXPECT_EQ(TallyGroups(records, perm, perm_pred, DefaultGrouping()), groups);
}

TEST(EvaluateTest, PerfectAndConstantPredictors) {
  const auto& data = LangIdFixture();
  std::vector<size_t> idx(84);
  for (size_t i = 0; i < 84; ++i) idx[i] = i;
  std::vector<uint32_t> truth(84), constant(84, 1);
  for (size_t i = 0; i < 84; ++i) truth[i] = data.records[i].label;
  for (const auto& [name, g] : TallyGroups(data.records, idx, truth, DefaultGrouping())) {
    EXPECT_EQ(g.accuracy(), 100.0) << name;
  }
  const auto groups = TallyGroups(data.records, idx, constant, DefaultGrouping());
  EXPECT_NEAR(groups.at("overall").accuracy(), 100.0 / 3.0, 1e-12);
  EXPECT_EQ(groups.count("names"), 0u);
  EXPECT_EQ(groups.count("language:francais"), 0u);
  EXPECT_EQ(groups.at("language:pular").accuracy(), 100.0);
  EXPECT_EQ(groups.at("language:susu").accuracy(), 0.0);
}

TEST(TrainTest, LearnsSeparableFixture) {
  const auto& data = LangIdFixture();
  const auto plan = MakeFolds(data.records, 1, 0.6, 3);
  TrainConfig tc;
  tc.epochs = 200;
  tc.max_steps = 2000;
  tc.seed = 3;
  const auto start = std::chrono::steady_clock::now();
  const auto result = TrainFold(data, plan.folds[0], 0, ConfigFor(Task::kLangId, 16, 0.1), tc);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_GE(result.report.val_accuracy, 95.0);
  EXPECT_LT(seconds, 300.0);
  // The stored model reproduces the reported accuracy.
  EXPECT_EQ(Evaluate(result.model, data, plan.folds[0].validation, DefaultGrouping())
                .at("overall")
                .accuracy(),
            result.report.val_accuracy);
  EXPECT_EQ(result.report.epoch_accuracy[result.report.best_epoch - 1],
            result.report.val_accuracy);
  for (size_t e = 0; e + 1 < result.report.best_epoch; ++e) {
    EXPECT_LT(result.report.epoch_accuracy[e], result.report.val_accuracy);
  }
  EXPECT_EQ(result.report.kl.size(), 33u);
}

TEST(TrainTest, EpochBoundsAndDeterminism) {
  const auto& data = LangIdFixture();
  const auto plan = MakeFolds(data.records, 2, 0.6, 9);
  TrainConfig tc;
  tc.epochs = 1;
  const auto config = ConfigFor(Task::kLangId, 16, 0.1);
  const auto one = TrainFold(data, plan.folds[1], 1, config, tc);
  EXPECT_EQ(one.report.best_epoch, 1u);
  EXPECT_EQ(one.report.epoch_loss.size(), 1u);
  tc.epochs = 0;
  EXPECT_EQ(CodeOf([&] { TrainFold(data, plan.folds[1], 1, config, tc); }),
            ErrorCode::kInvalidConfig);
  tc.epochs = 4;
  const auto a = TrainFold(data, plan.folds[1], 1, config, tc);
  const auto b = TrainFold(data, plan.folds[1], 1, config, tc);
  EXPECT_EQ(a.report, b.report);
  EXPECT_EQ(models::EncodeModel(a.model), models::EncodeModel(b.model));
}

TEST(ReportTest, RoundTripAndSchema) {
  RunReport r;
  r.task = "asr";
  r.model_config = models::ModelConfig::Asr(128);
  r.train_config.seed = 12345678901234ULL;
  FoldReport f;
  f.fold = 0;
  f.best_epoch = 3;
  f.val_accuracy = 100.0 * 2 / 3;
  f.groups["overall"] = {2, 3};
  f.epoch_loss = {1.5, 0.1 + 0.2};
  f.epoch_accuracy = {33.3, f.val_accuracy};
  f.kl = {0.25, std::numeric_limits<double>::infinity()};
  r.folds = {f, f};
  r.folds[1].fold = 1;
  r.aggregate = {f.val_accuracy, 0.0};
  r.kl_per_example = {0.25, std::numeric_limits<double>::infinity(), 1e-300};
  const auto text = EncodeReport(r);
  EXPECT_EQ(DecodeReport(text), r);
  EXPECT_EQ(EncodeReport(DecodeReport(text)), text);

  EXPECT_EQ(CodeOf([] { DecodeReport(R"({"version":1,"task":"asr"})"); }),
            ErrorCode::kSchemaVersionMismatch);
  auto doc = text;
  doc.replace(doc.find("\"folds\""), 7, "\"flods\"");
  EXPECT_EQ(CodeOf([&] { DecodeReport(doc); }), ErrorCode::kSchemaVersionMismatch);
}

TEST(CrossValidationTest, TenFoldsAndJobIndependence) {
  const auto& data = LangIdFixture();
  CvOptions options;
  options.train.epochs = 3;
  options.train.seed = 11;
  const auto serial = RunCrossValidation(data, options);
  ASSERT_EQ(serial.report.folds.size(), 10u);
  ASSERT_EQ(serial.models.size(), 10u);
  EXPECT_EQ(serial.report.kl_per_example.size(), 330u);
  std::vector<double> accs;
  for (const auto& f : serial.report.folds) accs.push_back(f.val_accuracy);
  EXPECT_EQ(serial.report.aggregate, Aggregate(accs));
  options.jobs = 4;
  const auto parallel = RunCrossValidation(data, options);
  EXPECT_EQ(EncodeReport(parallel.report), EncodeReport(serial.report));
}

TEST(DatasetTest, LoadFromDisk) {
  const auto dir = TempDir("load");
  FixtureSpec spec;
  spec.per_class = 3;
  const auto data = SynthesizeDataset(spec);
  WriteDataset(data, dir);
  const auto loaded = LoadDataset(LoadManifest(dir / "manifest.csv", 3), dir / "features");
  EXPECT_EQ(loaded.records, data.records);
  EXPECT_EQ(loaded.features, data.features);

  std::filesystem::remove(FeaturePath(dir / "features", data.records[4]));
  EXPECT_EQ(CodeOf([&] { LoadDataset(data.records, dir / "features"); }),
            ErrorCode::kMissingFeature);
  auto short_fs = data.features[4];
  short_fs.frames = 15;
  short_fs.data.resize(15 * short_fs.dims);
  dsp::WriteFeatures(short_fs, FeaturePath(dir / "features", data.records[4]));
  try {
    LoadDataset(data.records, dir / "features");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInputTooShort);
    EXPECT_NE(std::string(e.what()).find(data.records[4].file.substr(0, 12)), std::string::npos);
  }
}

}  // namespace
}  // namespace nlv::experiments
