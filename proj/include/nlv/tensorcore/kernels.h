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

#ifndef NLV_TENSORCORE_KERNELS_H_
#define NLV_TENSORCORE_KERNELS_H_

#include <cstddef>
#include <span>

// Dense inner loops of the CNN. Each kernel exists twice: a straightforward
// serial loop nest in `reference` (kept as the test oracle and benchmark
// baseline) and a cache-friendly OpenMP version in `parallel` that the ops
// call. Parallel kernels partition work by output element, so results do not
// depend on the thread count.
//
// Layouts are row-major: sequences [batch, channels, frames], conv weights
// [out, in, kernel], linear weights [out, in].
namespace nlv::kernels {

struct Conv1dDims {
  size_t batch;
  size_t in_channels;
  size_t out_channels;
  size_t kernel;
  size_t in_frames;
  size_t pad;  // zero frames added on each side
  size_t out_frames() const { return in_frames + 2 * pad - kernel + 1; }
};

struct LinearDims {
  size_t batch;
  size_t in_features;
  size_t out_features;
};

namespace reference {

void Conv1dForward(const Conv1dDims& d, std::span<const double> in,
                   std::span<const double> weight, std::span<const double> bias,
                   std::span<double> out);
// Backward kernels accumulate into their outputs.
void Conv1dBackwardInput(const Conv1dDims& d, std::span<const double> grad_out,
                         std::span<const double> weight, std::span<double> grad_in);
void Conv1dBackwardWeight(const Conv1dDims& d, std::span<const double> grad_out,
                          std::span<const double> in, std::span<double> grad_weight,
                          std::span<double> grad_bias);

void LinearForward(const LinearDims& d, std::span<const double> in,
                   std::span<const double> weight, std::span<const double> bias,
                   std::span<double> out);
void LinearBackward(const LinearDims& d, std::span<const double> grad_out,
                    std::span<const double> in, std::span<const double> weight,
                    std::span<double> grad_in, std::span<double> grad_weight,
                    std::span<double> grad_bias);

}  // namespace reference

namespace parallel {

void Conv1dForward(const Conv1dDims& d, std::span<const double> in,
                   std::span<const double> weight, std::span<const double> bias,
                   std::span<double> out);
void Conv1dBackwardInput(const Conv1dDims& d, std::span<const double> grad_out,
                         std::span<const double> weight, std::span<double> grad_in);
void Conv1dBackwardWeight(const Conv1dDims& d, std::span<const double> grad_out,
                          std::span<const double> in, std::span<double> grad_weight,
                          std::span<double> grad_bias);

void LinearForward(const LinearDims& d, std::span<const double> in,
                   std::span<const double> weight, std::span<const double> bias,
                   std::span<double> out);
void LinearBackward(const LinearDims& d, std::span<const double> grad_out,
                    std::span<const double> in, std::span<const double> weight,
                    std::span<double> grad_in, std::span<double> grad_weight,
                    std::span<double> grad_bias);

}  // namespace parallel

// Threads used by parallel kernels; 0 restores the OpenMP default.
void SetNumThreads(int threads);
int NumThreads();

}  // namespace nlv::kernels

#endif  // NLV_TENSORCORE_KERNELS_H_
