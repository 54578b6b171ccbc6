// core/include/pedfuse/fft.h

// Copyright 2026  pedfuse authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PEDFUSE_FFT_H_
#define PEDFUSE_FFT_H_

#include <complex>
#include <vector>

namespace pedfuse {

// In-place iterative radix-2 FFT. Size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& x, bool inverse = false);

// Power spectrum |X_k|^2 of a real frame for bins k = 0..n/2 (n/2+1 values).
// Frame length must be a power of two.
std::vector<double> power_spectrum(const std::vector<double>& frame);

}  // namespace pedfuse

#endif  // PEDFUSE_FFT_H_
