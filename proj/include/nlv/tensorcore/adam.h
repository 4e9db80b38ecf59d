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

#ifndef NLV_TENSORCORE_ADAM_H_
#define NLV_TENSORCORE_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "nlv/tensorcore/node.h"

namespace nlv::tc {

// Bias-corrected Adam. Moment buffers are laid out in parameter order:
// group 0 weight, group 0 bias, group 1 weight, ...
struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  uint64_t t = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

// Applies one update from the accumulated grads, then zeroes them.
void AdamStep(std::span<const ParameterGroup> params, AdamState& state);

void ZeroGrad(std::span<const ParameterGroup> params);

}  // namespace nlv::tc

#endif  // NLV_TENSORCORE_ADAM_H_
