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

#include "nlv/tensorcore/kernels.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlv::kernels {

namespace {

// Below this many multiply-adds the fork/join cost dominates.
constexpr size_t kMinParallelWork = 1 << 15;

// Valid output range [lo, hi) for kernel tap j: frames whose source index
// t + j - pad falls inside the input.
inline void TapRange(const Conv1dDims& d, size_t j, size_t& lo, size_t& hi) {
  const size_t tout = d.out_frames();
  lo = d.pad > j ? d.pad - j : 0;
  hi = std::min(tout, d.in_frames + d.pad - j);
  if (hi < lo) hi = lo;
}

}  // namespace

void SetNumThreads(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
#else
  (void)threads;
#endif
}

int NumThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

void Conv1dForward(const Conv1dDims& d, std::span<const double> in,
                   std::span<const double> weight, std::span<const double> bias,
                   std::span<double> out) {
  const size_t tout = d.out_frames();
  const long rows = static_cast<long>(d.batch * d.out_channels);
  const size_t work = d.batch * d.out_channels * d.in_channels * d.kernel * tout;
#pragma omp parallel for schedule(static) if (work > kMinParallelWork)
  for (long row = 0; row < rows; ++row) {
    const size_t b = static_cast<size_t>(row) / d.out_channels;
    const size_t co = static_cast<size_t>(row) % d.out_channels;
    double* dst = out.data() + static_cast<size_t>(row) * tout;
    std::fill(dst, dst + tout, bias[co]);
    for (size_t ci = 0; ci < d.in_channels; ++ci) {
      const double* src = in.data() + (b * d.in_channels + ci) * d.in_frames;
      const double* w = weight.data() + (co * d.in_channels + ci) * d.kernel;
      for (size_t j = 0; j < d.kernel; ++j) {
        size_t lo, hi;
        TapRange(d, j, lo, hi);
        const double wj = w[j];
        const double* s = src + j - d.pad;  // s[t] is valid for t in [lo, hi)
        for (size_t t = lo; t < hi; ++t) dst[t] += wj * s[t];
      }
    }
  }
}

void Conv1dBackwardInput(const Conv1dDims& d, std::span<const double> grad_out,
                         std::span<const double> weight, std::span<double> grad_in) {
  const size_t tout = d.out_frames();
  const long rows = static_cast<long>(d.batch * d.in_channels);
  const size_t work = d.batch * d.out_channels * d.in_channels * d.kernel * tout;
#pragma omp parallel for schedule(static) if (work > kMinParallelWork)
  for (long row = 0; row < rows; ++row) {
    const size_t b = static_cast<size_t>(row) / d.in_channels;
    const size_t ci = static_cast<size_t>(row) % d.in_channels;
    double* dst = grad_in.data() + static_cast<size_t>(row) * d.in_frames;
    for (size_t co = 0; co < d.out_channels; ++co) {
      const double* g = grad_out.data() + (b * d.out_channels + co) * tout;
      const double* w = weight.data() + (co * d.in_channels + ci) * d.kernel;
      for (size_t j = 0; j < d.kernel; ++j) {
        size_t lo, hi;
        TapRange(d, j, lo, hi);
        const double wj = w[j];
        double* s = dst + j - d.pad;
        for (size_t t = lo; t < hi; ++t) s[t] += wj * g[t];
      }
    }
  }
}

void Conv1dBackwardWeight(const Conv1dDims& d, std::span<const double> grad_out,
                          std::span<const double> in, std::span<double> grad_weight,
                          std::span<double> grad_bias) {
  const size_t tout = d.out_frames();
  const long rows = static_cast<long>(d.out_channels);
  const size_t work = d.batch * d.out_channels * d.in_channels * d.kernel * tout;
#pragma omp parallel for schedule(static) if (work > kMinParallelWork)
  for (long row = 0; row < rows; ++row) {
    const size_t co = static_cast<size_t>(row);
    for (size_t b = 0; b < d.batch; ++b) {
      const double* g = grad_out.data() + (b * d.out_channels + co) * tout;
      double gb = 0.0;
      for (size_t t = 0; t < tout; ++t) gb += g[t];
      grad_bias[co] += gb;
      for (size_t ci = 0; ci < d.in_channels; ++ci) {
        const double* src = in.data() + (b * d.in_channels + ci) * d.in_frames;
        double* gw = grad_weight.data() + (co * d.in_channels + ci) * d.kernel;
        for (size_t j = 0; j < d.kernel; ++j) {
          size_t lo, hi;
          TapRange(d, j, lo, hi);
          const double* s = src + j - d.pad;
          double acc = 0.0;
          for (size_t t = lo; t < hi; ++t) acc += g[t] * s[t];
          gw[j] += acc;
        }
      }
    }
  }
}

void LinearForward(const LinearDims& d, std::span<const double> in,
                   std::span<const double> weight, std::span<const double> bias,
                   std::span<double> out) {
  const long rows = static_cast<long>(d.batch * d.out_features);
  const size_t work = d.batch * d.out_features * d.in_features;
#pragma omp parallel for schedule(static) if (work > kMinParallelWork)
  for (long row = 0; row < rows; ++row) {
    const size_t b = static_cast<size_t>(row) / d.out_features;
    const size_t k = static_cast<size_t>(row) % d.out_features;
    const double* w = weight.data() + k * d.in_features;
    const double* x = in.data() + b * d.in_features;
    double acc = 0.0;
    for (size_t i = 0; i < d.in_features; ++i) acc += w[i] * x[i];
    out[static_cast<size_t>(row)] = bias[k] + acc;
  }
}

void LinearBackward(const LinearDims& d, std::span<const double> grad_out,
                    std::span<const double> in, std::span<const double> weight,
                    std::span<double> grad_in, std::span<double> grad_weight,
                    std::span<double> grad_bias) {
  const size_t work = d.batch * d.out_features * d.in_features;
#pragma omp parallel if (work > kMinParallelWork)
  {
#pragma omp for schedule(static) nowait
    for (long b = 0; b < static_cast<long>(d.batch); ++b) {
      double* gx = grad_in.data() + static_cast<size_t>(b) * d.in_features;
      for (size_t k = 0; k < d.out_features; ++k) {
        const double g = grad_out[static_cast<size_t>(b) * d.out_features + k];
        const double* w = weight.data() + k * d.in_features;
        for (size_t i = 0; i < d.in_features; ++i) gx[i] += g * w[i];
      }
    }
#pragma omp for schedule(static)
    for (long k = 0; k < static_cast<long>(d.out_features); ++k) {
      double* gw = grad_weight.data() + static_cast<size_t>(k) * d.in_features;
      for (size_t b = 0; b < d.batch; ++b) {
        const double g = grad_out[b * d.out_features + static_cast<size_t>(k)];
        grad_bias[static_cast<size_t>(k)] += g;
        const double* x = in.data() + b * d.in_features;
        for (size_t i = 0; i < d.in_features; ++i) gw[i] += g * x[i];
      }
    }
  }
}

}  // namespace parallel
}  // namespace nlv::kernels
