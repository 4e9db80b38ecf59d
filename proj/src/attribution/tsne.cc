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

#include <cmath>
#include <limits>
#include <string>

#include "nlv/attribution/attribution.h"
#include "nlv/common/error.h"
#include "nlv/common/random.h"

namespace nlv::attribution {

namespace {

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return acc;
}

// Conditional p_{j|i} for one row, bandwidth searched on beta = 1 / (2 sigma^2).
void ConditionalRow(std::span<const double> dist, size_t self, double perplexity,
                    double tolerance, std::span<double> row) {
  double min_dist = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < dist.size(); ++j) {
    if (j != self) min_dist = std::min(min_dist, dist[j]);
  }
  double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    double total = 0.0, weighted = 0.0;
    for (size_t j = 0; j < dist.size(); ++j) {
      row[j] = j == self ? 0.0 : std::exp(-(dist[j] - min_dist) * beta);
      total += row[j];
      weighted += (dist[j] - min_dist) * row[j];
    }
    const double entropy = std::log(total) + beta * weighted / total;
    for (double& p : row) p /= total;
    const double diff = std::exp(entropy) - perplexity;
    if (std::fabs(diff) < tolerance) break;
    if (diff > 0.0) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
    } else {
      hi = beta;
      beta = (beta + lo) / 2.0;
    }
  }
}

}  // namespace

std::vector<double> JointProbabilities(const std::vector<std::vector<double>>& points,
                                       double perplexity, double tolerance) {
  const size_t n = points.size();
  std::vector<double> cond(n * n);
#pragma omp parallel
  {
    std::vector<double> dist(n);
#pragma omp for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const size_t r = static_cast<size_t>(i);
      for (size_t j = 0; j < n; ++j) dist[j] = SquaredDistance(points[r], points[j]);
      ConditionalRow(dist, r, perplexity, tolerance,
                     std::span<double>(cond).subspan(r * n, n));
    }
  }
  std::vector<double> p(n * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      p[i * n + j] = (cond[i * n + j] + cond[j * n + i]) / (2.0 * static_cast<double>(n));
    }
  }
  return p;
}

std::vector<double> StudentQ(const std::vector<std::array<double, 2>>& y) {
  const size_t n = y.size();
  std::vector<double> q(n * n, 0.0);
  std::vector<double> row_sums(n, 0.0);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const size_t r = static_cast<size_t>(i);
    for (size_t j = 0; j < n; ++j) {
      if (j == r) continue;
      const double dx = y[r][0] - y[j][0], dy = y[r][1] - y[j][1];
      q[r * n + j] = 1.0 / (1.0 + dx * dx + dy * dy);
      row_sums[r] += q[r * n + j];
    }
  }
  double total = 0.0;
  for (double s : row_sums) total += s;
  for (double& v : q) v /= total;
  return q;
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) kl += p[i] * std::log(p[i] / std::max(q[i], 1e-300));
  }
  return kl;
}

namespace reference {

std::vector<std::array<double, 2>> TsneGradient(std::span<const double> p,
                                                const std::vector<std::array<double, 2>>& y) {
  const size_t n = y.size();
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
      total += 1.0 / (1.0 + dx * dx + dy * dy);
    }
  }
  std::vector<std::array<double, 2>> grad(n, {0.0, 0.0});
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = y[i][0] - y[j][0], dy = y[i][1] - y[j][1];
      const double num = 1.0 / (1.0 + dx * dx + dy * dy);
      const double coeff = 4.0 * (p[i * n + j] - num / total) * num;
      grad[i][0] += coeff * dx;
      grad[i][1] += coeff * dy;
    }
  }
  return grad;
}

}  // namespace reference

namespace parallel {

std::vector<std::array<double, 2>> TsneGradient(std::span<const double> p,
                                                const std::vector<std::array<double, 2>>& y) {
  const size_t n = y.size();
  std::vector<double> num(n * n, 0.0);
  std::vector<double> row_sums(n, 0.0);
  std::vector<std::array<double, 2>> grad(n, {0.0, 0.0});
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const size_t r = static_cast<size_t>(i);
      double sum = 0.0;
      for (size_t j = 0; j < n; ++j) {
        if (j == r) continue;
        const double dx = y[r][0] - y[j][0], dy = y[r][1] - y[j][1];
        num[r * n + j] = 1.0 / (1.0 + dx * dx + dy * dy);
        sum += num[r * n + j];
      }
      row_sums[r] = sum;
    }
    // Serial total keeps the normalizer independent of the thread count.
    double total = 0.0;
    for (double s : row_sums) total += s;
#pragma omp for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) {
      const size_t r = static_cast<size_t>(i);
      double gx = 0.0, gy = 0.0;
      for (size_t j = 0; j < n; ++j) {
        if (j == r) continue;
        const double w = num[r * n + j];
        const double coeff = 4.0 * (p[r * n + j] - w / total) * w;
        gx += coeff * (y[r][0] - y[j][0]);
        gy += coeff * (y[r][1] - y[j][1]);
      }
      grad[r] = {gx, gy};
    }
  }
  return grad;
}

}  // namespace parallel

Embedding2D Tsne(const std::vector<std::vector<double>>& points, const TsneConfig& config) {
  const size_t n = points.size();
  if (n < 4) {
    throw Error(ErrorCode::kTooFewPoints, "t-SNE needs at least 4 points, got " +
                                              std::to_string(n));
  }
  if (!(config.perplexity > 0.0) || config.perplexity >= static_cast<double>(n)) {
    throw Error(ErrorCode::kPerplexityTooHigh,
                "perplexity " + std::to_string(config.perplexity) + " must be below N = " +
                    std::to_string(n));
  }
  for (const auto& p : points) {
    if (p.size() != points[0].size()) {
      throw Error(ErrorCode::kShapeMismatch, "t-SNE points have different dimensions");
    }
  }
  const std::vector<double> p =
      JointProbabilities(points, config.perplexity, config.perplexity_tolerance);
  std::vector<double> p_exaggerated(p);
  for (double& v : p_exaggerated) v *= config.early_exaggeration;

  Rng rng(config.seed);
  Embedding2D out;
  out.points.resize(n);
  for (auto& y : out.points) y = {1e-4 * rng.Normal(), 1e-4 * rng.Normal()};
  out.initial_kl = KlDivergence(p, StudentQ(out.points));

  std::vector<std::array<double, 2>> update(n, {0.0, 0.0});
  std::vector<std::array<double, 2>> gains(n, {1.0, 1.0});
  for (int iter = 0; iter < config.iterations; ++iter) {
    const bool exaggerate = iter < config.exaggeration_iterations;
    const double momentum = iter < config.momentum_switch_iteration ? config.initial_momentum
                                                                    : config.final_momentum;
    const auto grad = parallel::TsneGradient(exaggerate ? p_exaggerated : p, out.points);
    for (size_t i = 0; i < n; ++i) {
      for (size_t d = 0; d < 2; ++d) {
        const bool same_sign = (grad[i][d] > 0.0) == (update[i][d] > 0.0);
        gains[i][d] = same_sign ? std::max(gains[i][d] * 0.8, 0.01) : gains[i][d] + 0.2;
        update[i][d] = momentum * update[i][d] - config.learning_rate * gains[i][d] * grad[i][d];
        out.points[i][d] += update[i][d];
      }
    }
    std::array<double, 2> mean{0.0, 0.0};
    for (const auto& y : out.points) {
      mean[0] += y[0];
      mean[1] += y[1];
    }
    for (auto& y : out.points) {
      y[0] -= mean[0] / static_cast<double>(n);
      y[1] -= mean[1] / static_cast<double>(n);
    }
  }
  out.kl_divergence = KlDivergence(p, StudentQ(out.points));
  return out;
}

}  // namespace nlv::attribution
