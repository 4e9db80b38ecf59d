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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <regex>
#include <string>

#include "gtest/gtest.h"
#include "nlv/attribution/attribution.h"
#include "nlv/common/binary_io.h"
#include "nlv/dsp/audio.h"
#include "nlv/dsp/mel.h"
#include "nlv/dsp/wav.h"
#include "nlv/experiments/fixture.h"
#include "nlv/experiments/report.h"

namespace nlv {
namespace {

namespace fs = std::filesystem;

struct Run {
  int exit_code;
  std::string out;
};

Run Nlv(const std::string& args, const std::string& stdin_text = "") {
  const fs::path in = fs::temp_directory_path() / "nlv_cli_test_stdin.txt";
  WriteFileBytes(in, std::vector<uint8_t>(stdin_text.begin(), stdin_text.end()));
  const std::string cmd = std::string(NLV_CLI_PATH) + " " + args + " < " + in.string() + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string Slurp(const fs::path& p) {
  const auto bytes = ReadFileBytes(p);
  return std::string(bytes.begin(), bytes.end());
}

fs::path Workdir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "nlv_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(CliTest, FeaturizeOneSecondOfSilence) {
  const auto dir = Workdir("featurize");
  const std::vector<float> silence(16000, 0.0f);
  dsp::SaveWav(dir / "s.wav", dsp::Waveform{silence, 16000}, dsp::WavEncoding::kPcm16);
  const auto r = Nlv("featurize --in " + (dir / "s.wav").string() + " --out " +
                     (dir / "s.nlf1").string() + " --mode mel");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto features = dsp::ReadFeatures(dir / "s.nlf1");
  EXPECT_EQ(features.frames, 98u);
  EXPECT_EQ(features.dims, 128u);
  EXPECT_EQ(features, dsp::MelSpectrogram(dsp::Preprocess(dsp::LoadWav(dir / "s.wav"))));
}

TEST(CliTest, TrainIsDeterministicAndMatchesLibrary) {
  const auto dir = Workdir("train");
  ASSERT_EQ(Nlv("--seed 4 synth-fixture --task langid --out " + (dir / "fx").string()).exit_code, 0);
  const std::string common = "train --task langid --manifest " + (dir / "fx/manifest.csv").string() +
                             " --features-dir " + (dir / "fx/features").string() +
                             " --folds 10 --epochs 5";
  const auto a = Nlv("--seed 9 " + common + " --out " + (dir / "a.json").string() +
                     " --models-dir " + (dir / "models").string());
  ASSERT_EQ(a.exit_code, 0) << a.out;
  EXPECT_TRUE(std::regex_search(a.out, std::regex("10-fold accuracy: \\d+\\.\\d\\d \xC2\xB1 \\d+\\.\\d\\d")))
      << a.out;
  const auto b = Nlv("--seed 9 --quiet " + common + " --jobs 3 --out " + (dir / "b.json").string());
  ASSERT_EQ(b.exit_code, 0) << b.out;
  EXPECT_EQ(Slurp(dir / "a.json"), Slurp(dir / "b.json"));

  const auto report = experiments::ReadReport(dir / "a.json");
  EXPECT_EQ(report.folds.size(), 10u);
  EXPECT_EQ(fs::exists(dir / "models/fold_09.nlm"), true);

  experiments::FixtureSpec spec;
  spec.seed = 4;
  experiments::CvOptions options;
  options.train.epochs = 5;
  options.train.seed = 9;
  const auto lib = experiments::RunCrossValidation(experiments::SynthesizeDataset(spec), options);
  EXPECT_EQ(experiments::EncodeReport(lib.report), Slurp(dir / "a.json"));
  EXPECT_EQ(models::EncodeModel(lib.models[9]), ReadFileBytes(dir / "models/fold_09.nlm"));

  const auto ev = Nlv("evaluate --model " + (dir / "models/fold_00.nlm").string() +
                      " --manifest " + (dir / "fx/manifest.csv").string() + " --groups default");
  ASSERT_EQ(ev.exit_code, 0) << ev.out;
  const auto data = experiments::SynthesizeDataset(spec);
  std::vector<size_t> all(84);
  for (size_t i = 0; i < 84; ++i) all[i] = i;
  const auto groups = experiments::Evaluate(lib.models[0], data, all, experiments::DefaultGrouping());
  char line[64];
  std::snprintf(line, sizeof(line), "overall\t%.2f\t%zu/84", groups.at("overall").accuracy(),
                groups.at("overall").correct);
  EXPECT_NE(ev.out.find(line), std::string::npos) << ev.out;

  const auto clip = (dir / "fx/features/langid/pular/clip_003.nlf1").string();
  const auto sg = Nlv("segment-units --model " + (dir / "models/fold_00.nlm").string() +
                      " --features " + clip + " --labels " + (dir / "l.txt").string() +
                      " --units " + (dir / "u.csv").string());
  ASSERT_EQ(sg.exit_code, 0) << sg.out;
  const auto seq = dsp::ReadFeatures(clip);
  const auto units = attribution::SegmentUnits(
      attribution::ComputeAttention(attribution::Saliency(lib.models[0], seq)).weights, seq);
  EXPECT_EQ(Slurp(dir / "l.txt"), attribution::AudacityLabels(units, 10.0));

  const auto em = Nlv("embed --units " + (dir / "u.csv").string() + " " +
                      (dir / "u.csv").string() + " --out " + (dir / "e.csv").string());
  if (units.size() * 2 >= 4) {
    EXPECT_EQ(em.exit_code, 0) << em.out;
  } else {
    EXPECT_EQ(em.exit_code, 3) << em.out;
  }
}

TEST(CliTest, ReplWalksAddContactFlow) {
  const auto r = Nlv("assistant --repl",
                     "susu:wake\nadd\nfatoumata\n"
                     "digit:6\ndigit:9\ndigit:8\ndigit:3\ndigit:3\ndigit:2\ndigit:5\ndigit:2\ndigit:9\n"
                     "yes\n");
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_NE(r.out.find("state 5: Are you sure to add Fatoumata"), std::string::npos);
  EXPECT_NE(r.out.find("state 6: OK. Done"), std::string::npos);
  EXPECT_NE(r.out.find("side_effect add_contact Fatoumata 698332529"), std::string::npos);
  const auto gated = Nlv("assistant --repl", "susu:wake\ndigit:3\n");
  EXPECT_NE(gated.out.find("not_in_vocabulary"), std::string::npos);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Nlv("").exit_code, 2);
  EXPECT_EQ(Nlv("train --task klingon").exit_code, 2);
  EXPECT_EQ(Nlv("assistant").exit_code, 2);
  const auto dir = Workdir("exit");
  WriteFileBytes(dir / "bad.nlm", std::vector<uint8_t>(64, 7));
  WriteFileBytes(dir / "m.csv", std::vector<uint8_t>{'x', '\n'});
  const auto r = Nlv("evaluate --model " + (dir / "bad.nlm").string() + " --manifest " +
                     (dir / "m.csv").string());
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(r.out.rfind("error\t", 0), 0u) << r.out;
}

}  // namespace
}  // namespace nlv
