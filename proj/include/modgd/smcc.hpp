// include/modgd/smcc.hpp
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
//
// Source-MODGD cepstral coefficients: filter-bank energies of the modified
// group delay of the flattened power spectrum, followed by a DCT.

#pragma once

#include <cstddef>
#include <vector>

#include "modgd/groupdelay.hpp"
#include "modgd/spectral.hpp"
#include "modgd/types.hpp"

namespace modgd {

struct SmccConfig {
  FrameConfig frame{20.0, 10.0, WindowKind::hamming};
  std::size_t n_coeffs = 20;
  std::size_t n_filters = 40;
  std::size_t flatten_lifter = 30;
  double flatten_gamma = 1.0;
  ModgdConfig modgd;
  std::size_t n_fft = 0;  // 0 = auto
};

// Mel-spaced triangular filter weights over `n_bins` spectrum bins treated
// as spanning [0, sample_rate/2]. Returned as n_filters rows of n_bins.
std::vector<std::vector<double>> mel_filterbank(std::size_t n_filters,
                                                std::size_t n_bins,
                                                int sample_rate);

// Orthonormal DCT-II of x, first n_out coefficients.
std::vector<double> dct2(const std::vector<double>& x, std::size_t n_out);

// One feature vector of n_coeffs values per frame.
std::vector<std::vector<double>> smcc_features(const SignalBuffer& signal,
                                               const SmccConfig& cfg);

}  // namespace modgd
