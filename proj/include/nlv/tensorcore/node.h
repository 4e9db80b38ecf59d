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

#ifndef NLV_TENSORCORE_NODE_H_
#define NLV_TENSORCORE_NODE_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nlv::tc {

class Node;
using Var = std::shared_ptr<Node>;

// A tensor value in the computation graph. Leaves (parameters, inputs) own
// their storage for the lifetime of the model; interior nodes live as long
// as some downstream node or the caller keeps them.
class Node {
 public:
  Node(std::vector<size_t> shape, std::vector<double> values, std::string op);

  const std::vector<size_t>& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t dim(size_t i) const { return shape_[i]; }
  size_t size() const { return values_.size(); }
  const std::string& op() const { return op_; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& grad() { return grad_; }
  const std::vector<double>& grad() const { return grad_; }

  double value(size_t i = 0) const { return values_[i]; }

  void ZeroGrad();

  // Wiring used by ops. The backward function reads this node's grad and
  // accumulates into the parents' grads.
  void SetBackward(std::vector<Var> parents, std::function<void(Node&)> fn);
  const std::vector<Var>& parents() const { return parents_; }
  bool has_backward() const { return static_cast<bool>(backward_); }
  void RunBackward() { backward_(*this); }

 private:
  std::vector<size_t> shape_;
  std::vector<double> values_;
  std::vector<double> grad_;
  std::string op_;
  std::vector<Var> parents_;
  std::function<void(Node&)> backward_;
};

size_t NumElements(std::span<const size_t> shape);

Var MakeVar(std::vector<size_t> shape, std::vector<double> values,
            std::string op = "leaf");
Var Zeros(std::vector<size_t> shape);
// Rank-0 scalar.
Var Scalar(double v);

// Reverse-mode accumulation from a scalar node. Gradients accumulate into
// whatever is already stored, so callers zero them between steps.
void Backward(const Var& loss);

// Per-sequence validity of frames. Real frames form a prefix.
class FrameMask {
 public:
  FrameMask() = default;
  explicit FrameMask(std::vector<bool> real);

  static FrameMask All(size_t length) { return Prefix(length, length); }
  static FrameMask Prefix(size_t length, size_t real_frames);

  size_t length() const { return real_.size(); }
  size_t real_frames() const { return real_frames_; }
  bool operator[](size_t t) const { return real_[t]; }
  bool operator==(const FrameMask& other) const = default;

 private:
  std::vector<bool> real_;
  size_t real_frames_ = 0;
};

struct ParameterGroup {
  std::string name;
  Var weight;
  Var bias;  // may be null
};

}  // namespace nlv::tc

#endif  // NLV_TENSORCORE_NODE_H_
