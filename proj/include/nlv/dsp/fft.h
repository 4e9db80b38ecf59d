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

#ifndef NLV_DSP_FFT_H_
#define NLV_DSP_FFT_H_

#include <complex>
#include <span>

namespace nlv::dsp {

// In-place iterative radix-2 decimation-in-time FFT (forward, unscaled).
// The length must be a power of two.
void Fft(std::span<std::complex<double>> data);

bool IsPowerOfTwo(size_t n);

}  // namespace nlv::dsp

#endif  // NLV_DSP_FFT_H_
