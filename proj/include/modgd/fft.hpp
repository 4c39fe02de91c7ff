// include/modgd/fft.hpp
//
// Copyright 2026 modgd-multipitch contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace modgd::fft {

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n);

// In-place radix-2 transform. Size must be a power of two.
// The inverse transform includes the 1/N scaling.
void transform(std::vector<std::complex<double>>& data, bool inverse);

// Forward transform of a real sequence zero-padded to n_fft, returning the
// half spectrum, bins 0..n_fft/2 inclusive.
std::vector<std::complex<double>> real_half_spectrum(std::span<const double> x,
                                                     std::size_t n_fft);

}  // namespace modgd::fft
