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

// Serial reference kernels against their OpenMP counterparts. Thread count
// is the benchmark argument after the shape; 0 means the reference path.

#include <benchmark/benchmark.h>

#include <vector>

#include "nlv/attribution/attribution.h"
#include "nlv/common/random.h"
#include "nlv/dsp/mel.h"
#include "nlv/tensorcore/kernels.h"

namespace nlv {
namespace {

std::vector<double> Random(size_t n, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(-1, 1);
  return v;
}

// ASR block 3 at batch 16: 64 -> 128 channels, 3 taps, 128 frames.
kernels::Conv1dDims ConvShape() { return {16, 64, 128, 3, 128, 1}; }

void BM_Conv1dForward(benchmark::State& state) {
  const auto d = ConvShape();
  const auto in = Random(d.batch * d.in_channels * d.in_frames, 1);
  const auto w = Random(d.out_channels * d.in_channels * d.kernel, 2);
  const auto b = Random(d.out_channels, 3);
  std::vector<double> out(d.batch * d.out_channels * d.out_frames());
  const int threads = static_cast<int>(state.range(0));
  if (threads > 0) kernels::SetNumThreads(threads);
  for (auto _ : state) {
    if (threads == 0) {
      kernels::reference::Conv1dForward(d, in, w, b, out);
    } else {
      kernels::parallel::Conv1dForward(d, in, w, b, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(out.size()));
}

void BM_Conv1dBackward(benchmark::State& state) {
  const auto d = ConvShape();
  const auto in = Random(d.batch * d.in_channels * d.in_frames, 1);
  const auto w = Random(d.out_channels * d.in_channels * d.kernel, 2);
  const auto g = Random(d.batch * d.out_channels * d.out_frames(), 3);
  std::vector<double> gin(in.size()), gw(w.size()), gb(d.out_channels);
  const int threads = static_cast<int>(state.range(0));
  if (threads > 0) kernels::SetNumThreads(threads);
  for (auto _ : state) {
    if (threads == 0) {
      kernels::reference::Conv1dBackwardInput(d, g, w, gin);
      kernels::reference::Conv1dBackwardWeight(d, g, in, gw, gb);
    } else {
      kernels::parallel::Conv1dBackwardInput(d, g, w, gin);
      kernels::parallel::Conv1dBackwardWeight(d, g, in, gw, gb);
    }
    benchmark::DoNotOptimize(gw.data());
  }
}

void BM_Linear(benchmark::State& state) {
  const kernels::LinearDims d{64, 448, 105};
  const auto in = Random(d.batch * d.in_features, 1);
  const auto w = Random(d.out_features * d.in_features, 2);
  const auto b = Random(d.out_features, 3);
  std::vector<double> out(d.batch * d.out_features);
  const int threads = static_cast<int>(state.range(0));
  if (threads > 0) kernels::SetNumThreads(threads);
  for (auto _ : state) {
    if (threads == 0) {
      kernels::reference::LinearForward(d, in, w, b, out);
    } else {
      kernels::parallel::LinearForward(d, in, w, b, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_PowerSpectrogram(benchmark::State& state) {
  Rng rng(4);
  std::vector<float> samples(16000);
  for (float& s : samples) s = static_cast<float>(rng.Uniform(-0.5, 0.5));
  const int threads = static_cast<int>(state.range(0));
  if (threads > 0) kernels::SetNumThreads(threads);
  for (auto _ : state) {
    auto p = threads == 0 ? dsp::reference::PowerSpectrogram(samples, 400, 160, 512)
                          : dsp::parallel::PowerSpectrogram(samples, 400, 160, 512);
    benchmark::DoNotOptimize(p.data());
  }
}

void BM_TsneGradient(benchmark::State& state) {
  Rng rng(5);
  std::vector<std::vector<double>> pts(84, std::vector<double>(90));
  for (auto& p : pts) {
    for (double& x : p) x = rng.Normal();
  }
  const auto p = attribution::JointProbabilities(pts, 25.0);
  std::vector<std::array<double, 2>> y(pts.size());
  for (auto& v : y) v = {rng.Normal(), rng.Normal()};
  const int threads = static_cast<int>(state.range(0));
  if (threads > 0) kernels::SetNumThreads(threads);
  for (auto _ : state) {
    auto g = threads == 0 ? attribution::reference::TsneGradient(p, y)
                          : attribution::parallel::TsneGradient(p, y);
    benchmark::DoNotOptimize(g.data());
  }
}

BENCHMARK(BM_Conv1dForward)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv1dBackward)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Linear)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_PowerSpectrogram)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TsneGradient)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace nlv

BENCHMARK_MAIN();
