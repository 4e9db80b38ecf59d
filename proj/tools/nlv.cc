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

// nlv: command-line driver for featurization, cross-validated training,
// evaluation, unit segmentation, embedding and the assistant.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlv/assistant/contacts.h"
#include "nlv/assistant/dialog.h"
#include "nlv/assistant/vocabulary.h"
#include "nlv/attribution/attribution.h"
#include "nlv/common/binary_io.h"
#include "nlv/common/error.h"
#include "nlv/dsp/audio.h"
#include "nlv/dsp/features.h"
#include "nlv/dsp/mel.h"
#include "nlv/dsp/wav.h"
#include "nlv/experiments/experiments.h"
#include "nlv/experiments/fixture.h"
#include "nlv/experiments/manifest.h"
#include "nlv/experiments/report.h"
#include "nlv/models/model.h"
#include "nlv/service/service.h"

namespace fs = std::filesystem;

namespace nlv {
namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct Globals {
  uint64_t seed = 0;
  bool quiet = false;
};

// Bad or unreadable inputs exit 3; everything else is a runtime failure.
int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kCorruptHeader:
    case ErrorCode::kIoError:
    case ErrorCode::kEmptyAudio:
    case ErrorCode::kAudioTooShort:
    case ErrorCode::kBadMagic:
    case ErrorCode::kVersionUnsupported:
    case ErrorCode::kTruncatedFile:
    case ErrorCode::kChecksumMismatch:
    case ErrorCode::kInputTooShort:
    case ErrorCode::kDimMismatch:
    case ErrorCode::kHeaderMismatch:
    case ErrorCode::kBadLabel:
    case ErrorCode::kDuplicateFile:
    case ErrorCode::kClassTooSmall:
    case ErrorCode::kMissingFeature:
    case ErrorCode::kSchemaVersionMismatch:
    case ErrorCode::kConfigMismatch:
    case ErrorCode::kTooFewPoints:
    case ErrorCode::kPerplexityTooHigh:
    case ErrorCode::kDuplicateName:
    case ErrorCode::kInvalidPhone:
      return kExitData;
    default:
      return kExitRuntime;
  }
}

void Info(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cerr << line << "\n";
}

// ---- featurize

struct FeaturizeArgs {
  std::string in, out, mode = "mel";
};

int Featurize(const FeaturizeArgs& a, const Globals&) {
  const auto wave = dsp::Preprocess(dsp::LoadWav(a.in));
  const auto features = dsp::MelSpectrogram(wave);
  dsp::WriteFeatures(features, a.out);
  std::cout << a.out << "\t" << features.frames << "\t" << features.dims << "\n";
  return 0;
}

// ---- train

struct TrainArgs {
  std::string task = "langid", manifest, features_dir, out, models_dir;
  size_t folds = 10;
  size_t jobs = 1;
  double train_frac = 0.6;
  experiments::TrainConfig train;
};

int Train(const TrainArgs& a, const Globals& g) {
  const auto task = *experiments::ParseTask(a.task);
  auto records = experiments::LoadManifest(a.manifest, experiments::NumClasses(task));
  const auto data = experiments::LoadDataset(std::move(records), a.features_dir);
  experiments::CvOptions options;
  options.task = task;
  options.n_folds = a.folds;
  options.train_frac = a.train_frac;
  options.jobs = a.jobs;
  options.train = a.train;
  options.train.seed = g.seed;
  std::mutex log_mu;
  const auto result =
      experiments::RunCrossValidation(data, options, [&](const experiments::FoldReport& f) {
        std::lock_guard lock(log_mu);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "fold %zu: best epoch %u, validation accuracy %.2f",
                      f.fold, f.best_epoch, f.val_accuracy);
        Info(g, buf);
      });
  experiments::WriteReport(result.report, a.out);
  if (!a.models_dir.empty()) {
    fs::create_directories(a.models_dir);
    for (size_t f = 0; f < result.models.size(); ++f) {
      char name[32];
      std::snprintf(name, sizeof(name), "fold_%02zu.nlm", f);
      models::SaveModel(result.models[f], fs::path(a.models_dir) / name);
    }
  }
  std::cout << a.task << " " << result.report.folds.size() << "-fold accuracy: "
            << experiments::FormatMeanSem(result.report.aggregate) << "\n";
  return 0;
}

// ---- evaluate

struct EvaluateArgs {
  std::string model, manifest, groups = "default", features_dir, json_out;
};

int Evaluate(const EvaluateArgs& a, const Globals&) {
  if (a.groups != "default") {
    throw CLI::ValidationError("--groups", "only 'default' is supported");
  }
  const auto model = models::LoadModel(a.model);
  const fs::path features_dir = a.features_dir.empty()
                                    ? fs::path(a.manifest).parent_path() / "features"
                                    : fs::path(a.features_dir);
  const auto data = experiments::LoadDataset(
      experiments::LoadManifest(a.manifest, model.config().num_classes), features_dir);
  std::vector<size_t> all(data.records.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto groups =
      experiments::Evaluate(model, data, all, experiments::DefaultGrouping());
  std::ostringstream js;
  js << "{\n  \"groups\": {";
  bool first = true;
  for (const auto& [name, acc] : groups) {
    char line[160];
    std::snprintf(line, sizeof(line), "%s\t%.2f\t%zu/%zu", name.c_str(), acc.accuracy(),
                  acc.correct, acc.total);
    std::cout << line << "\n";
    char entry[200];
    std::snprintf(entry, sizeof(entry),
                  "%s\n    \"%s\": {\"accuracy\": %.17g, \"correct\": %zu, \"total\": %zu}",
                  first ? "" : ",", name.c_str(), acc.accuracy(), acc.correct, acc.total);
    js << entry;
    first = false;
  }
  js << "\n  }\n}\n";
  if (!a.json_out.empty()) WriteFileAtomic(a.json_out, js.str());
  return 0;
}

// ---- segment-units

struct SegmentArgs {
  std::string model, features, labels, units, clip_id;
};

int SegmentUnits(const SegmentArgs& a, const Globals&) {
  const auto model = models::LoadModel(a.model);
  const auto seq = dsp::ReadFeatures(a.features);
  const auto attention = attribution::ComputeAttention(attribution::Saliency(model, seq));
  const auto units = attribution::SegmentUnits(attention.weights, seq);
  WriteFileAtomic(a.labels, attribution::AudacityLabels(units, seq.frame_period_ms));
  std::vector<attribution::UnitRecord> records;
  const std::string clip = a.clip_id.empty() ? fs::path(a.features).stem().string() : a.clip_id;
  for (const auto& u : units) records.push_back({clip, u});
  WriteFileAtomic(a.units, attribution::UnitsCsv(records, seq.dims));
  std::cout << clip << "\t" << units.size() << " units\n";
  return 0;
}

// ---- embed

struct EmbedArgs {
  std::vector<std::string> units;
  std::vector<std::string> ensemble;
  std::string manifest, features_dir, out;
  double perplexity = 0.0;
  int iterations = 1000;
};

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

int Embed(const EmbedArgs& a, const Globals& g) {
  std::vector<std::vector<double>> points;
  std::vector<std::string> rows;  // leading CSV columns per point
  std::string header;
  if (!a.ensemble.empty()) {
    if (a.manifest.empty()) throw CLI::ValidationError("--manifest", "required with --ensemble");
    std::vector<models::Model> folds;
    for (const auto& path : a.ensemble) folds.push_back(models::LoadModel(path));
    const fs::path features_dir = a.features_dir.empty()
                                      ? fs::path(a.manifest).parent_path() / "features"
                                      : fs::path(a.features_dir);
    const auto data = experiments::LoadDataset(
        experiments::LoadManifest(a.manifest, folds[0].config().num_classes), features_dir);
    header = "file,language,label";
    for (size_t i = 0; i < data.records.size(); ++i) {
      points.push_back(attribution::EnsembleFeatures(folds, data.features[i]));
      const auto& r = data.records[i];
      rows.push_back(CsvField(r.file) + "," + CsvField(r.language) + "," +
                     std::to_string(r.label));
    }
  } else {
    if (a.units.empty()) throw CLI::ValidationError("--units", "at least one file required");
    header = "source,clip_id,start_frame,end_frame,duration_ms";
    for (const auto& path : a.units) {
      const auto bytes = ReadFileBytes(path);
      const std::string source = fs::path(path).stem().string();
      for (const auto& r : attribution::ParseUnitsCsv(std::string(bytes.begin(), bytes.end()))) {
        points.push_back(r.unit.embedding);
        char buf[96];
        std::snprintf(buf, sizeof(buf), ",%zu,%zu,%.17g", r.unit.start_frame, r.unit.end_frame,
                      r.unit.duration_ms);
        rows.push_back(CsvField(source) + "," + CsvField(r.clip_id) + buf);
      }
    }
  }
  attribution::TsneConfig config;
  config.seed = g.seed;
  config.iterations = a.iterations;
  config.perplexity = a.perplexity > 0.0
                          ? a.perplexity
                          : std::min(30.0, std::max(1.0, (static_cast<double>(points.size()) - 1.0) / 3.0));
  const auto emb = attribution::Tsne(points, config);
  std::string out = header + ",x,y\n";
  for (size_t i = 0; i < points.size(); ++i) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", emb.points[i][0], emb.points[i][1]);
    out += rows[i] + buf;
  }
  WriteFileAtomic(a.out, out);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "embedded %zu points, perplexity %.3g, KL %.6f", points.size(),
                config.perplexity, emb.kl_divergence);
  Info(g, buf);
  return 0;
}

// ---- assistant

struct AssistantArgs {
  bool repl = false;
  bool serve = false;
  std::string addr = "127.0.0.1:8080";
  std::string contacts;
  std::string asr_model;
  std::string langid_model;
  size_t number_length = 9;
};

int Repl(assistant::ContactStore& store, size_t number_length) {
  using namespace assistant;
  auto session = NewSession(number_length);
  std::cout << "state 0: " << session.prompt << "\n";
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    const std::string word = line.substr(start, end - start + 1);
    if (word == "quit" || word == "exit") break;
    if (word == "vocab") {
      for (int id : ActiveVocabulary(session)) std::cout << "  " << ClassById(id).mnemonic << "\n";
      continue;
    }
    if (word == "contacts") {
      for (const auto& c : store.List()) std::cout << "  " << c.name << " " << c.phone << "\n";
      continue;
    }
    const auto id = ParseMnemonic(word, session.language);
    if (!id) {
      std::cout << "? unknown utterance '" << word << "'\n";
      continue;
    }
    if (!ActiveVocabulary(session).count(*id)) {
      std::cout << "? not_in_vocabulary " << ClassById(*id).mnemonic << " in state "
                << static_cast<int>(session.state) << "\n";
      continue;
    }
    const auto r = Transition(session, *id, store);
    std::cout << "state " << static_cast<int>(r.entered) << ": " << r.prompt << "\n";
    if (r.side_effect) {
      std::cout << "side_effect " << SideEffectName(r.side_effect->type) << " "
                << r.side_effect->name << " " << r.side_effect->phone << "\n";
    }
  }
  return 0;
}

int Assistant(const AssistantArgs& a, const Globals& g) {
  if (a.repl == a.serve) throw CLI::ValidationError("assistant", "choose one of --repl or --serve");
  std::unique_ptr<assistant::ContactStore> store =
      a.contacts.empty() ? std::make_unique<assistant::ContactStore>(a.number_length)
                         : std::make_unique<assistant::ContactStore>(fs::path(a.contacts),
                                                                     a.number_length);
  if (a.repl) return Repl(*store, a.number_length);

  const auto colon = a.addr.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--addr", "expected host:port");
  const std::string host = a.addr.substr(0, colon);
  const int port = std::stoi(a.addr.substr(colon + 1));
  std::optional<models::Model> asr, langid;
  if (!a.asr_model.empty()) asr = models::LoadModel(a.asr_model);
  if (!a.langid_model.empty()) langid = models::LoadModel(a.langid_model);
  service::ServiceConfig config;
  config.number_length = a.number_length;
  service::AssistantService svc(*store, config, std::move(asr), std::move(langid));
  Info(g, "listening on " + a.addr);
  service::Serve(svc, host, port);
  return 0;
}

// ---- synth-fixture

struct SynthArgs {
  std::string task = "langid", out;
  experiments::FixtureSpec spec;
};

int Synth(SynthArgs a, const Globals& g) {
  a.spec.task = *experiments::ParseTask(a.task);
  a.spec.seed = g.seed;
  const auto data = experiments::SynthesizeDataset(a.spec);
  experiments::WriteDataset(data, a.out);
  std::cout << (fs::path(a.out) / "manifest.csv").string() << "\t" << data.records.size()
            << " records\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"nlv: speech classification, attribution and a contact assistant"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_flag("--quiet", g.quiet, "Suppress progress output");

  auto task_check = CLI::IsMember({"langid", "asr"});

  FeaturizeArgs fz;
  auto* featurize = app.add_subcommand("featurize", "WAV -> mel NLF1 features");
  featurize->add_option("--in", fz.in)->required()->check(CLI::ExistingFile);
  featurize->add_option("--out", fz.out)->required();
  featurize->add_option("--mode", fz.mode)->check(CLI::IsMember({"mel"}))->capture_default_str();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Cross-validated training run");
  train->add_option("--task", tr.task)->required()->check(task_check);
  train->add_option("--manifest", tr.manifest)->required()->check(CLI::ExistingFile);
  train->add_option("--features-dir", tr.features_dir)->required()->check(CLI::ExistingDirectory);
  train->add_option("--folds", tr.folds)->capture_default_str()->check(CLI::Range(2, 1000));
  train->add_option("--out", tr.out)->required();
  train->add_option("--models-dir", tr.models_dir);
  train->add_option("--jobs", tr.jobs, "Folds trained concurrently")->capture_default_str()
      ->check(CLI::Range(1, 256));
  train->add_option("--train-frac", tr.train_frac)->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  train->add_option("--epochs", tr.train.epochs)->capture_default_str()->check(CLI::Range(1u, 1000000u));
  train->add_option("--batch-size", tr.train.batch_size)->capture_default_str()
      ->check(CLI::Range(1u, 1000000u));
  train->add_option("--lr", tr.train.lr)->capture_default_str();
  train->add_option("--dropout", tr.train.dropout_rate)->capture_default_str();
  train->add_option("--max-steps", tr.train.max_steps, "Update cap per fold, 0 for none")
      ->capture_default_str();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Grouped accuracies of one checkpoint");
  evaluate->add_option("--model", ev.model)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--manifest", ev.manifest)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--groups", ev.groups)->capture_default_str();
  evaluate->add_option("--features-dir", ev.features_dir,
                       "Defaults to <manifest dir>/features");
  evaluate->add_option("--json", ev.json_out, "Also write the groups as JSON");

  SegmentArgs sg;
  auto* segment = app.add_subcommand("segment-units", "Saliency-based acoustic units");
  segment->add_option("--model", sg.model)->required()->check(CLI::ExistingFile);
  segment->add_option("--features", sg.features)->required()->check(CLI::ExistingFile);
  segment->add_option("--labels", sg.labels)->required();
  segment->add_option("--units", sg.units)->required();
  segment->add_option("--clip-id", sg.clip_id, "Defaults to the features file stem");

  EmbedArgs em;
  auto* embed = app.add_subcommand("embed", "t-SNE of unit embeddings or ensemble features");
  embed->add_option("--units", em.units)->check(CLI::ExistingFile);
  embed->add_option("--ensemble", em.ensemble, "Fold checkpoints; embeds manifest clips")
      ->check(CLI::ExistingFile);
  embed->add_option("--manifest", em.manifest)->check(CLI::ExistingFile);
  embed->add_option("--features-dir", em.features_dir);
  embed->add_option("--out", em.out)->required();
  embed->add_option("--perplexity", em.perplexity, "Defaults to min(30, (N - 1) / 3)");
  embed->add_option("--iterations", em.iterations)->capture_default_str();

  AssistantArgs as;
  auto* asst = app.add_subcommand("assistant", "Text REPL or HTTP service");
  asst->add_flag("--repl", as.repl);
  asst->add_flag("--serve", as.serve);
  asst->add_option("--addr", as.addr)->capture_default_str();
  asst->add_option("--contacts", as.contacts);
  asst->add_option("--asr-model", as.asr_model)->check(CLI::ExistingFile);
  asst->add_option("--langid-model", as.langid_model)->check(CLI::ExistingFile);
  asst->add_option("--number-length", as.number_length)->capture_default_str()
      ->check(CLI::Range(1, 32));

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth-fixture", "Write a synthetic manifest + features");
  synth->add_option("--task", sy.task)->required()->check(task_check);
  synth->add_option("--out", sy.out)->required();
  synth->add_option("--dims", sy.spec.dims)->capture_default_str();
  synth->add_option("--per-class", sy.spec.per_class)->capture_default_str();
  synth->add_option("--min-frames", sy.spec.min_frames)->capture_default_str();
  synth->add_option("--max-frames", sy.spec.max_frames)->capture_default_str();
  synth->add_option("--noise", sy.spec.noise)->capture_default_str();
  synth->add_option("--offset", sy.spec.offset)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error\tUsage\t" << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*featurize) return Featurize(fz, g);
    if (*train) return Train(tr, g);
    if (*evaluate) return Evaluate(ev, g);
    if (*segment) return SegmentUnits(sg, g);
    if (*embed) return Embed(em, g);
    if (*asst) return Assistant(as, g);
    if (*synth) return Synth(sy, g);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error\tUsage\t" << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error\t" << ErrorCodeName(e.code()) << "\t" << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error\tRuntime\t" << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace nlv

int main(int argc, char** argv) { return nlv::Main(argc, argv); }
