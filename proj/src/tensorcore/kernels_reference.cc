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

#include "nlv/tensorcore/kernels.h"

namespace nlv::kernels::reference {

void Conv1dForward(const Conv1dDims& d, std::span<const double> in,
                   std::span<const double> weight, std::span<const double> bias,
                   std::span<double> out) {
  const size_t tout = d.out_frames();
  for (size_t b = 0; b < d.batch; ++b) {
    for (size_t co = 0; co < d.out_channels; ++co) {
      for (size_t t = 0; t < tout; ++t) {
        double acc = bias[co];
        for (size_t ci = 0; ci < d.in_channels; ++ci) {
          for (size_t j = 0; j < d.kernel; ++j) {
            const long src = static_cast<long>(t + j) - static_cast<long>(d.pad);
            if (src < 0 || src >= static_cast<long>(d.in_frames)) continue;
            acc += weight[(co * d.in_channels + ci) * d.kernel + j] *
                   in[(b * d.in_channels + ci) * d.in_frames + src];
          }
        }
        out[(b * d.out_channels + co) * tout + t] = acc;
      }
    }
  }
}

void Conv1dBackwardInput(const Conv1dDims& d, std::span<const double> grad_out,
                         std::span<const double> weight, std::span<double> grad_in) {
  const size_t tout = d.out_frames();
  for (size_t b = 0; b < d.batch; ++b) {
    for (size_t co = 0; co < d.out_channels; ++co) {
      for (size_t t = 0; t < tout; ++t) {
        const double g = grad_out[(b * d.out_channels + co) * tout + t];
        for (size_t ci = 0; ci < d.in_channels; ++ci) {
          for (size_t j = 0; j < d.kernel; ++j) {
            const long src = static_cast<long>(t + j) - static_cast<long>(d.pad);
            if (src < 0 || src >= static_cast<long>(d.in_frames)) continue;
            grad_in[(b * d.in_channels + ci) * d.in_frames + src] +=
                g * weight[(co * d.in_channels + ci) * d.kernel + j];
          }
        }
      }
    }
  }
}

void Conv1dBackwardWeight(const Conv1dDims& d, std::span<const double> grad_out,
                          std::span<const double> in, std::span<double> grad_weight,
                          std::span<double> grad_bias) {
  const size_t tout = d.out_frames();
  for (size_t b = 0; b < d.batch; ++b) {
    for (size_t co = 0; co < d.out_channels; ++co) {
      for (size_t t = 0; t < tout; ++t) {
        const double g = grad_out[(b * d.out_channels + co) * tout + t];
        grad_bias[co] += g;
        for (size_t ci = 0; ci < d.in_channels; ++ci) {
          for (size_t j = 0; j < d.kernel; ++j) {
            const long src = static_cast<long>(t + j) - static_cast<long>(d.pad);
            if (src < 0 || src >= static_cast<long>(d.in_frames)) continue;
            grad_weight[(co * d.in_channels + ci) * d.kernel + j] +=
                g * in[(b * d.in_channels + ci) * d.in_frames + src];
          }
        }
      }
    }
  }
}

void LinearForward(const LinearDims& d, std::span<const double> in,
                   std::span<const double> weight, std::span<const double> bias,
                   std::span<double> out) {
  for (size_t b = 0; b < d.batch; ++b) {
    for (size_t k = 0; k < d.out_features; ++k) {
      double acc = bias[k];
      for (size_t i = 0; i < d.in_features; ++i) {
        acc += weight[k * d.in_features + i] * in[b * d.in_features + i];
      }
      out[b * d.out_features + k] = acc;
    }
  }
}

void LinearBackward(const LinearDims& d, std::span<const double> grad_out,
                    std::span<const double> in, std::span<const double> weight,
                    std::span<double> grad_in, std::span<double> grad_weight,
                    std::span<double> grad_bias) {
  for (size_t b = 0; b < d.batch; ++b) {
    for (size_t k = 0; k < d.out_features; ++k) {
      const double g = grad_out[b * d.out_features + k];
      grad_bias[k] += g;
      for (size_t i = 0; i < d.in_features; ++i) {
        grad_in[b * d.in_features + i] += g * weight[k * d.in_features + i];
        grad_weight[k * d.in_features + i] += g * in[b * d.in_features + i];
      }
    }
  }
}

}  // namespace nlv::kernels::reference
