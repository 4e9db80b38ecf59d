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

#include "nlv/tensorcore/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlv/common/error.h"
#include "nlv/tensorcore/kernels.h"

namespace nlv::tc {

namespace {

struct SeqDims {
  size_t batch;
  size_t channels;
  size_t frames;
};

SeqDims SequenceDims(const Node& x, const char* op) {
  if (x.rank() == 2) return {1, x.dim(0), x.dim(1)};
  if (x.rank() == 3) return {x.dim(0), x.dim(1), x.dim(2)};
  throw Error(ErrorCode::kShapeMismatch,
              std::string(op) + " expects [C, T] or [B, C, T] input");
}

std::vector<size_t> SequenceShape(bool batched, size_t b, size_t c, size_t t) {
  if (batched) return {b, c, t};
  return {c, t};
}

void CheckMasks(std::span<const FrameMask> masks, const SeqDims& d, const char* op) {
  if (masks.size() != d.batch) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(op) + ": one mask per batch element required");
  }
  for (const auto& m : masks) {
    if (m.length() != d.frames) {
      throw Error(ErrorCode::kShapeMismatch,
                  std::string(op) + ": mask length " + std::to_string(m.length()) +
                      " != frames " + std::to_string(d.frames));
    }
  }
}

}  // namespace

Var Conv1d(const Var& input, const Var& weight, const Var& bias, Padding padding) {
  const SeqDims s = SequenceDims(*input, "conv1d");
  if (weight->rank() != 3 || bias->rank() != 1) {
    throw Error(ErrorCode::kShapeMismatch, "conv1d weight must be [Cout, Cin, k]");
  }
  const size_t cout = weight->dim(0), cin = weight->dim(1), k = weight->dim(2);
  if (cin != s.channels) {
    throw Error(ErrorCode::kShapeMismatch,
                "conv1d: input has " + std::to_string(s.channels) +
                    " channels, weight expects " + std::to_string(cin));
  }
  if (k != 1 && k != 3) {
    throw Error(ErrorCode::kShapeMismatch, "conv1d supports kernel sizes 1 and 3");
  }
  if (bias->dim(0) != cout) {
    throw Error(ErrorCode::kShapeMismatch, "conv1d bias length != out channels");
  }
  const size_t pad = padding == Padding::kSame ? (k - 1) / 2 : 0;
  if (s.frames + 2 * pad < k) {
    throw Error(ErrorCode::kInputTooShort, "conv1d: fewer frames than kernel taps");
  }
  const kernels::Conv1dDims d{s.batch, cin, cout, k, s.frames, pad};
  const size_t tout = d.out_frames();
  auto out = MakeVar(SequenceShape(input->rank() == 3, s.batch, cout, tout),
                     std::vector<double>(s.batch * cout * tout), "conv1d");
  kernels::parallel::Conv1dForward(d, input->values(), weight->values(),
                                   bias->values(), out->values());
  out->SetBackward({input, weight, bias}, [d](Node& self) {
    const auto& p = self.parents();
    kernels::parallel::Conv1dBackwardInput(d, self.grad(), p[1]->values(),
                                           p[0]->grad());
    kernels::parallel::Conv1dBackwardWeight(d, self.grad(), p[0]->values(),
                                            p[1]->grad(), p[2]->grad());
  });
  return out;
}

Var Elu(const Var& x) {
  std::vector<double> y(x->size());
  const auto& xv = x->values();
  for (size_t i = 0; i < y.size(); ++i) {
    y[i] = xv[i] > 0.0 ? xv[i] : std::expm1(xv[i]);
  }
  auto out = MakeVar(x->shape(), std::move(y), "elu");
  out->SetBackward({x}, [](Node& self) {
    Node& in = *self.parents()[0];
    const auto& xv = in.values();
    const auto& yv = self.values();
    for (size_t i = 0; i < xv.size(); ++i) {
      in.grad()[i] += self.grad()[i] * (xv[i] > 0.0 ? 1.0 : yv[i] + 1.0);
    }
  });
  return out;
}

Var Dropout(const Var& x, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw Error(ErrorCode::kInvalidRate,
                "dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> scale(x->size());
  for (double& s : scale) s = rng.Uniform() < rate ? 0.0 : keep_scale;
  std::vector<double> y(x->size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = x->values()[i] * scale[i];
  auto out = MakeVar(x->shape(), std::move(y), "dropout");
  out->SetBackward({x}, [scale = std::move(scale)](Node& self) {
    Node& in = *self.parents()[0];
    for (size_t i = 0; i < scale.size(); ++i) in.grad()[i] += self.grad()[i] * scale[i];
  });
  return out;
}

Var MaskFrames(const Var& x, std::span<const FrameMask> masks) {
  const SeqDims s = SequenceDims(*x, "mask_frames");
  CheckMasks(masks, s, "mask_frames");
  bool any_padding = false;
  for (const auto& m : masks) any_padding |= m.real_frames() < m.length();
  if (!any_padding) return x;
  std::vector<double> keep(x->size(), 0.0);
  for (size_t b = 0; b < s.batch; ++b) {
    for (size_t c = 0; c < s.channels; ++c) {
      for (size_t t = 0; t < masks[b].real_frames(); ++t) {
        keep[(b * s.channels + c) * s.frames + t] = 1.0;
      }
    }
  }
  std::vector<double> y(x->size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = x->values()[i] * keep[i];
  auto out = MakeVar(x->shape(), std::move(y), "mask_frames");
  out->SetBackward({x}, [keep = std::move(keep)](Node& self) {
    Node& in = *self.parents()[0];
    for (size_t i = 0; i < keep.size(); ++i) in.grad()[i] += self.grad()[i] * keep[i];
  });
  return out;
}

Pooled AvgPool2(const Var& x, std::span<const FrameMask> masks) {
  const SeqDims s = SequenceDims(*x, "avgpool2");
  if (s.frames < 2) {
    throw Error(ErrorCode::kInputTooShort,
                "avgpool2 needs at least 2 frames, got " + std::to_string(s.frames));
  }
  CheckMasks(masks, s, "avgpool2");
  const size_t half = s.frames / 2;
  std::vector<double> y(s.batch * s.channels * half);
  const auto& xv = x->values();
  for (size_t row = 0; row < s.batch * s.channels; ++row) {
    const double* src = xv.data() + row * s.frames;
    double* dst = y.data() + row * half;
    for (size_t i = 0; i < half; ++i) dst[i] = 0.5 * (src[2 * i] + src[2 * i + 1]);
  }
  Pooled pooled;
  pooled.masks.reserve(s.batch);
  for (const auto& m : masks) {
    // Both frames real <=> 2i + 1 < real_frames.
    pooled.masks.push_back(FrameMask::Prefix(half, m.real_frames() / 2));
  }
  pooled.output = MakeVar(SequenceShape(x->rank() == 3, s.batch, s.channels, half),
                          std::move(y), "avgpool2");
  pooled.output->SetBackward({x}, [s, half](Node& self) {
    Node& in = *self.parents()[0];
    for (size_t row = 0; row < s.batch * s.channels; ++row) {
      const double* g = self.grad().data() + row * half;
      double* dst = in.grad().data() + row * s.frames;
      for (size_t i = 0; i < half; ++i) {
        dst[2 * i] += 0.5 * g[i];
        dst[2 * i + 1] += 0.5 * g[i];
      }
    }
  });
  return pooled;
}

Pooled AvgPool2(const Var& x, const FrameMask& mask) {
  return AvgPool2(x, std::span<const FrameMask>(&mask, 1));
}

Var TemporalMaxPool(const Var& x, std::span<const FrameMask> masks) {
  const SeqDims s = SequenceDims(*x, "temporal_maxpool");
  CheckMasks(masks, s, "temporal_maxpool");
  std::vector<double> y(s.batch * s.channels);
  std::vector<size_t> argmax(y.size());
  const auto& xv = x->values();
  for (size_t b = 0; b < s.batch; ++b) {
    const size_t real = masks[b].real_frames();
    if (real == 0) {
      throw Error(ErrorCode::kEmptySequence,
                  "temporal_maxpool: every frame of batch element " +
                      std::to_string(b) + " is masked");
    }
    for (size_t c = 0; c < s.channels; ++c) {
      const size_t row = b * s.channels + c;
      const double* src = xv.data() + row * s.frames;
      size_t best = 0;
      for (size_t t = 1; t < real; ++t) {
        if (src[t] > src[best]) best = t;
      }
      y[row] = src[best];
      argmax[row] = row * s.frames + best;
    }
  }
  std::vector<size_t> shape =
      x->rank() == 3 ? std::vector<size_t>{s.batch, s.channels}
                     : std::vector<size_t>{s.channels};
  auto out = MakeVar(std::move(shape), std::move(y), "temporal_maxpool");
  out->SetBackward({x}, [argmax = std::move(argmax)](Node& self) {
    Node& in = *self.parents()[0];
    for (size_t i = 0; i < argmax.size(); ++i) in.grad()[argmax[i]] += self.grad()[i];
  });
  return out;
}

Var TemporalMaxPool(const Var& x, const FrameMask& mask) {
  return TemporalMaxPool(x, std::span<const FrameMask>(&mask, 1));
}

Var Concat(std::span<const Var> parts) {
  if (parts.empty()) throw Error(ErrorCode::kShapeMismatch, "concat of nothing");
  const size_t rank = parts[0]->rank();
  if (rank != 1 && rank != 2) {
    throw Error(ErrorCode::kShapeMismatch, "concat expects [D] or [B, D] parts");
  }
  const size_t rows = rank == 2 ? parts[0]->dim(0) : 1;
  std::vector<size_t> widths;
  size_t total = 0;
  for (const auto& p : parts) {
    if (p->rank() != rank || (rank == 2 && p->dim(0) != rows)) {
      throw Error(ErrorCode::kShapeMismatch, "concat parts disagree on leading dims");
    }
    widths.push_back(p->shape().back());
    total += widths.back();
  }
  std::vector<double> y(rows * total);
  size_t offset = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    for (size_t r = 0; r < rows; ++r) {
      std::copy_n(parts[i]->values().data() + r * widths[i], widths[i],
                  y.data() + r * total + offset);
    }
    offset += widths[i];
  }
  std::vector<size_t> shape =
      rank == 2 ? std::vector<size_t>{rows, total} : std::vector<size_t>{total};
  auto out = MakeVar(std::move(shape), std::move(y), "concat");
  out->SetBackward(std::vector<Var>(parts.begin(), parts.end()),
                   [rows, total, widths](Node& self) {
                     size_t offset = 0;
                     for (size_t i = 0; i < widths.size(); ++i) {
                       Node& in = *self.parents()[i];
                       for (size_t r = 0; r < rows; ++r) {
                         for (size_t j = 0; j < widths[i]; ++j) {
                           in.grad()[r * widths[i] + j] +=
                               self.grad()[r * total + offset + j];
                         }
                       }
                       offset += widths[i];
                     }
                   });
  return out;
}

Var Linear(const Var& x, const Var& weight, const Var& bias) {
  if (weight->rank() != 2 || bias->rank() != 1 || bias->dim(0) != weight->dim(0)) {
    throw Error(ErrorCode::kShapeMismatch, "linear weight must be [K, D], bias [K]");
  }
  if (x->rank() != 1 && x->rank() != 2) {
    throw Error(ErrorCode::kShapeMismatch, "linear expects [D] or [B, D] input");
  }
  const size_t in_features = x->shape().back();
  if (in_features != weight->dim(1)) {
    throw Error(ErrorCode::kShapeMismatch,
                "linear: input has " + std::to_string(in_features) +
                    " features, weight expects " + std::to_string(weight->dim(1)));
  }
  const kernels::LinearDims d{x->rank() == 2 ? x->dim(0) : 1, in_features,
                              weight->dim(0)};
  std::vector<size_t> shape = x->rank() == 2
                                  ? std::vector<size_t>{d.batch, d.out_features}
                                  : std::vector<size_t>{d.out_features};
  auto out = MakeVar(std::move(shape), std::vector<double>(d.batch * d.out_features),
                     "linear");
  kernels::parallel::LinearForward(d, x->values(), weight->values(), bias->values(),
                                   out->values());
  out->SetBackward({x, weight, bias}, [d](Node& self) {
    const auto& p = self.parents();
    kernels::parallel::LinearBackward(d, self.grad(), p[0]->values(),
                                      p[1]->values(), p[0]->grad(), p[1]->grad(),
                                      p[2]->grad());
  });
  return out;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> p(logits.size());
  if (logits.empty()) return p;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - peak);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

Var SoftmaxCrossEntropy(const Var& logits, std::span<const int> targets) {
  if (logits->rank() != 1 && logits->rank() != 2) {
    throw Error(ErrorCode::kShapeMismatch, "cross entropy expects [K] or [B, K] logits");
  }
  const size_t rows = logits->rank() == 2 ? logits->dim(0) : 1;
  const size_t classes = logits->shape().back();
  if (targets.size() != rows) {
    throw Error(ErrorCode::kShapeMismatch, "cross entropy: one target per row");
  }
  std::vector<double> probs(rows * classes);
  double loss = 0.0;
  for (size_t r = 0; r < rows; ++r) {
    const int target = targets[r];
    if (target < 0 || static_cast<size_t>(target) >= classes) {
      throw Error(ErrorCode::kBadTarget, "target " + std::to_string(target) +
                                             " outside [0, " +
                                             std::to_string(classes) + ")");
    }
    std::span<const double> row(logits->values().data() + r * classes, classes);
    const double peak = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double v : row) total += std::exp(v - peak);
    const double log_total = std::log(total);
    loss += -(row[static_cast<size_t>(target)] - peak - log_total);
    for (size_t k = 0; k < classes; ++k) {
      probs[r * classes + k] = std::exp(row[k] - peak - log_total);
    }
  }
  loss /= static_cast<double>(rows);
  auto out = MakeVar({}, {loss}, "softmax_cross_entropy");
  std::vector<int> owned(targets.begin(), targets.end());
  out->SetBackward({logits}, [probs = std::move(probs), owned = std::move(owned),
                              rows, classes](Node& self) {
    Node& in = *self.parents()[0];
    const double g = self.grad()[0] / static_cast<double>(rows);
    for (size_t r = 0; r < rows; ++r) {
      for (size_t k = 0; k < classes; ++k) {
        const double onehot = static_cast<int>(k) == owned[r] ? 1.0 : 0.0;
        in.grad()[r * classes + k] += g * (probs[r * classes + k] - onehot);
      }
    }
  });
  return out;
}

Var SoftmaxCrossEntropy(const Var& logits, int target) {
  return SoftmaxCrossEntropy(logits, std::span<const int>(&target, 1));
}

Var Add(const Var& a, const Var& b) {
  if (a->shape() != b->shape()) throw Error(ErrorCode::kShapeMismatch, "add");
  std::vector<double> y(a->size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = a->values()[i] + b->values()[i];
  auto out = MakeVar(a->shape(), std::move(y), "add");
  out->SetBackward({a, b}, [](Node& self) {
    for (const auto& p : self.parents()) {
      for (size_t i = 0; i < self.size(); ++i) p->grad()[i] += self.grad()[i];
    }
  });
  return out;
}

Var Mul(const Var& a, const Var& b) {
  if (a->shape() != b->shape()) throw Error(ErrorCode::kShapeMismatch, "mul");
  std::vector<double> y(a->size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = a->values()[i] * b->values()[i];
  auto out = MakeVar(a->shape(), std::move(y), "mul");
  out->SetBackward({a, b}, [](Node& self) {
    Node& l = *self.parents()[0];
    Node& r = *self.parents()[1];
    for (size_t i = 0; i < self.size(); ++i) {
      const double g = self.grad()[i];
      const double lv = l.values()[i];
      const double rv = r.values()[i];
      l.grad()[i] += g * rv;
      r.grad()[i] += g * lv;
    }
  });
  return out;
}

Var Scale(const Var& x, double factor) {
  std::vector<double> y(x->values());
  for (double& v : y) v *= factor;
  auto out = MakeVar(x->shape(), std::move(y), "scale");
  out->SetBackward({x}, [factor](Node& self) {
    Node& in = *self.parents()[0];
    for (size_t i = 0; i < self.size(); ++i) in.grad()[i] += factor * self.grad()[i];
  });
  return out;
}

Var Sum(const Var& x) {
  double total = 0.0;
  for (double v : x->values()) total += v;
  auto out = MakeVar({}, {total}, "sum");
  out->SetBackward({x}, [](Node& self) {
    Node& in = *self.parents()[0];
    for (double& g : in.grad()) g += self.grad()[0];
  });
  return out;
}

Var Pick(const Var& x, size_t index) {
  if (index >= x->size()) throw Error(ErrorCode::kShapeMismatch, "pick index");
  auto out = MakeVar({}, {x->values()[index]}, "pick");
  out->SetBackward({x}, [index](Node& self) {
    self.parents()[0]->grad()[index] += self.grad()[0];
  });
  return out;
}

}  // namespace nlv::tc
