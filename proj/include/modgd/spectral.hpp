// include/modgd/spectral.hpp
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
// Framing, windowing, power spectra, cepstral smoothing, spectral
// flattening and spectral flux: the shared DSP substrate.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "modgd/types.hpp"

namespace modgd {

enum class WindowKind { hamming, rectangular };

struct FrameConfig {
  double frame_len_ms = 30.0;
  double hop_ms = 10.0;
  WindowKind window = WindowKind::hamming;

  void validate() const {
    if (!(hop_ms > 0.0) || hop_ms > frame_len_ms) {
      throw NumericError("frame config requires 0 < hop_ms <= frame_len_ms");
    }
  }
  int frame_len_samples(int sample_rate) const {
    return static_cast<int>(frame_len_ms * 1e-3 * sample_rate + 0.5);
  }
  int hop_samples(int sample_rate) const {
    return static_cast<int>(hop_ms * 1e-3 * sample_rate + 0.5);
  }
};

struct PowerSpectrum {
  std::vector<double> bins;  // squared DFT magnitudes, k = 0..n_fft/2
  double bin_width = 0.0;    // Hz, sample_rate / n_fft
  std::size_t n_fft = 0;
};

// Per-frame source-emphasized spectrum treated as a signal: the power
// spectrum divided by its cepstrally smoothed envelope, raised to gamma,
// with the mean removed.
struct FlattenedSpectrum {
  std::vector<double> values;  // zero-mean
  double bin_width = 0.0;
  double flatten_gamma = 1.0;
  std::size_t band_limit = 0;  // bins kept by the source-band mask; 0 = all
};

// Symmetric window coefficients, all <= 1.
std::vector<double> make_window(WindowKind kind, std::size_t length);

// Cut the signal into windowed frames starting at multiples of the hop.
// Every start position below the signal length yields a frame; trailing
// partial frames are zero-padded before windowing.
std::vector<std::vector<double>> frame_signal(const SignalBuffer& signal,
                                              const FrameConfig& cfg);

// Squared-magnitude half spectrum of the zero-padded frame.
// sample_rate only sets bin_width; pass 0 to leave it at 1/n_fft units.
PowerSpectrum power_spectrum(std::span<const double> frame, std::size_t n_fft,
                             int sample_rate = 0);

// Smoothed envelope of a positive half-spectrum sequence:
// exp(low-quefrency-liftered log of the (floored) bins). Output has the
// units of the input, is strictly positive and matches its length.
// lifter_len counts retained low-quefrency cepstral coefficients; values
// >= bins.size() reproduce the floored input exactly.
std::vector<double> cepstral_envelope(std::span<const double> bins,
                                      std::size_t lifter_len);

inline std::vector<double> cepstral_envelope(const PowerSpectrum& spec,
                                             std::size_t lifter_len) {
  return cepstral_envelope(std::span<const double>(spec.bins), lifter_len);
}

// (bins/env)^gamma with the DC component (mean) removed.
FlattenedSpectrum flatten_spectrum(const PowerSpectrum& spec,
                                   std::span<const double> env, double gamma);

// Sum of squared differences between magnitudes normalized to unit maximum.
double spectral_flux(const PowerSpectrum& cur, const PowerSpectrum& prev);

// Zero the flattened spectrum above the band where the envelope carries
// energy (env < floor_rel * max(env)), with a raised-cosine roll-off, then
// re-center. Flattening divides the spectrum by its envelope, so bins far
// below the envelope peak hold window-sidelobe noise amplified to O(1);
// for sources with few partials that noise would otherwise dominate the
// lag analysis.
void mask_to_source_band(FlattenedSpectrum& flat, std::span<const double> env,
                         double floor_rel, std::size_t taper_bins = 16);

// Relative floor applied before logarithms; silent frames fall back to an
// absolute floor so the cepstrum stays finite.
inline constexpr double kSpectralFloorRel = 1e-10;
inline constexpr double kSpectralFloorAbs = 1e-30;

// Default transform size: next power of two >= 4x the frame length.
std::size_t default_n_fft(std::size_t frame_len);

}  // namespace modgd
