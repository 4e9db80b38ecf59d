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

#include "nlv/dsp/fft.h"

#include <cmath>
#include <utility>

#include "nlv/common/error.h"

namespace nlv::dsp {

bool IsPowerOfTwo(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void Fft(std::span<std::complex<double>> data) {
  const size_t n = data.size();
  if (!IsPowerOfTwo(n)) {
    throw Error(ErrorCode::kInvalidArgument, "FFT length must be a power of two");
  }
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * M_PI / static_cast<double>(len);
    const size_t half = len / 2;
    for (size_t k = 0; k < half; ++k) {
      // Twiddles from cos/sin directly rather than by recurrence, which
      // keeps the error flat across stages.
      const std::complex<double> w(std::cos(angle * k), std::sin(angle * k));
      for (size_t start = 0; start < n; start += len) {
        const std::complex<double> u = data[start + k];
        const std::complex<double> v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace nlv::dsp
