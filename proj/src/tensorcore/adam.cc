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

#include "nlv/tensorcore/adam.h"

#include <cmath>

#include "nlv/common/error.h"

namespace nlv::tc {

namespace {

std::vector<Node*> Tensors(std::span<const ParameterGroup> params) {
  std::vector<Node*> out;
  for (const auto& g : params) {
    out.push_back(g.weight.get());
    if (g.bias) out.push_back(g.bias.get());
  }
  return out;
}

}  // namespace

void AdamStep(std::span<const ParameterGroup> params, AdamState& state) {
  const std::vector<Node*> tensors = Tensors(params);
  if (state.m.empty()) {
    for (const Node* n : tensors) {
      state.m.emplace_back(n->size(), 0.0);
      state.v.emplace_back(n->size(), 0.0);
    }
  }
  if (state.m.size() != tensors.size()) {
    throw Error(ErrorCode::kShapeMismatch, "adam state does not match parameters");
  }
  state.t += 1;
  const double correction1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double correction2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (size_t p = 0; p < tensors.size(); ++p) {
    Node& node = *tensors[p];
    auto& m = state.m[p];
    auto& v = state.v[p];
    if (m.size() != node.size()) {
      throw Error(ErrorCode::kShapeMismatch, "adam moment buffer size mismatch");
    }
    for (size_t i = 0; i < node.size(); ++i) {
      const double g = node.grad()[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      node.values()[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
    node.ZeroGrad();
  }
}

void ZeroGrad(std::span<const ParameterGroup> params) {
  for (Node* n : Tensors(params)) n->ZeroGrad();
}

}  // namespace nlv::tc
