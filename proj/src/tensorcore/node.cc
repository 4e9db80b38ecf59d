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

#include "nlv/tensorcore/node.h"

#include <algorithm>
#include <unordered_set>

#include "nlv/common/error.h"

namespace nlv::tc {

size_t NumElements(std::span<const size_t> shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

Node::Node(std::vector<size_t> shape, std::vector<double> values, std::string op)
    : shape_(std::move(shape)),
      values_(std::move(values)),
      grad_(values_.size(), 0.0),
      op_(std::move(op)) {
  if (NumElements(shape_) != values_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "value count does not match shape for op " + op_);
  }
}

void Node::ZeroGrad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

void Node::SetBackward(std::vector<Var> parents, std::function<void(Node&)> fn) {
  parents_ = std::move(parents);
  backward_ = std::move(fn);
}

Var MakeVar(std::vector<size_t> shape, std::vector<double> values, std::string op) {
  return std::make_shared<Node>(std::move(shape), std::move(values), std::move(op));
}

Var Zeros(std::vector<size_t> shape) {
  const size_t n = NumElements(shape);
  return MakeVar(std::move(shape), std::vector<double>(n, 0.0));
}

Var Scalar(double v) { return MakeVar({}, {v}); }

void Backward(const Var& loss) {
  if (loss->size() != 1) {
    throw Error(ErrorCode::kNonScalarLoss,
                "backward needs a single-element loss, got " +
                    std::to_string(loss->size()) + " elements");
  }
  // Iterative post-order DFS; reversed it is a topological order from loss.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, size_t>> stack{{loss.get(), 0}};
  visited.insert(loss.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents().size()) {
      Node* parent = node->parents()[next++].get();
      if (visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  // Interior grads are recomputed from scratch so that a second call on the
  // same graph adds exactly one more gradient to the leaves.
  for (Node* node : order) {
    if (node->has_backward()) node->ZeroGrad();
  }
  loss->grad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->has_backward()) (*it)->RunBackward();
  }
}

FrameMask::FrameMask(std::vector<bool> real) : real_(std::move(real)) {
  real_frames_ = static_cast<size_t>(std::count(real_.begin(), real_.end(), true));
  for (size_t t = 0; t < real_frames_; ++t) {
    if (!real_[t]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame mask padding must be a suffix");
    }
  }
}

FrameMask FrameMask::Prefix(size_t length, size_t real_frames) {
  std::vector<bool> real(length, false);
  std::fill_n(real.begin(), std::min(real_frames, length), true);
  return FrameMask(std::move(real));
}

}  // namespace nlv::tc
