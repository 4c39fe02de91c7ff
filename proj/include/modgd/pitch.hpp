// include/modgd/pitch.hpp
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
// Per-frame two-pass multipitch estimation: predominant pitch from modified
// group delay peaks on the flattened spectrum, comb annihilation of that
// pitch and its partials, second estimate from the residual.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "modgd/groupdelay.hpp"
#include "modgd/spectral.hpp"
#include "modgd/types.hpp"

namespace modgd {

struct PitchRange {
  double f_min = 60.0;   // Hz
  double f_max = 400.0;  // Hz

  void validate(int sample_rate) const {
    if (!(f_min > 0.0) || !(f_min < f_max) || !(f_max < sample_rate / 2.0)) {
      throw NumericError("pitch range requires 0 < f_min < f_max < sample_rate/2");
    }
  }
};

struct CombConfig {
  double alpha_c = -0.98;  // gain coefficient in [-1, 0)
  std::size_t delay = 1;   // D, in spectral-sequence samples

  void validate() const {
    if (!(alpha_c >= -1.0) || !(alpha_c < 0.0)) {
      throw NumericError("comb alpha_c must lie in [-1, 0)");
    }
    if (delay < 1) throw NumericError("comb delay must be >= 1");
  }
};

struct FramePitches {
  std::optional<double> f0_a;  // predominant pitch, Hz
  std::optional<double> f0_b;  // second pitch, Hz
  double salience_a = 0.0;
  double salience_b = 0.0;
  double lag_a = 0.0;  // fractional lag bins (pitch period in samples)
  double lag_b = 0.0;
};

struct PitchEngineConfig {
  PitchRange range;
  ModgdConfig modgd;
  std::size_t flatten_lifter = 30;
  double flatten_gamma = 1.0;
  std::size_t n_fft = 0;  // 0: next power of two >= 4x frame length
  double comb_alpha = -0.98;
  // A candidate peak must reach salience_rel of the lag-window maximum and
  // be corroborated by the frame's normalized autocorrelation at its lag.
  // MODGD peak height alone does not separate noise from band-limited
  // voiced frames.
  double salience_rel = 0.1;
  double voicing_min = 0.35;         // first pass
  double voicing_min_second = 0.18;  // second pass (residual candidate)
  // When a corroborated peak also appears at half its lag with at least
  // this fraction of its height, the half-lag peak is the true period.
  // The comb can attenuate a residual fundamental line well below its
  // double, so the bar is deliberately low; the autocorrelation gate keeps
  // bogus half-lag peaks out of the candidate set.
  double octave_ratio = 0.15;
  double silence_rms = 1e-4;  // of full scale
  // Second-pass peaks within this many bins of the first-pass lag are the
  // comb remnant, not a second source.
  double second_pass_exclusion_bins = 2.0;
  // Envelope level (relative to its peak) below which flattened bins are
  // masked out of the lag analysis.
  double band_floor_rel = 1e-3;
  // Window the frames were cut with; needed to normalize the
  // autocorrelation for the window taper.
  WindowKind window = WindowKind::hamming;
};

// |H(e^{jw})| = sqrt((1 + a^2) + 2 a cos(w D)) for H(z) = 1 + a z^{-D}.
double comb_magnitude(double omega, const CombConfig& cfg);

// Run the FIR comb along the flattened-spectrum sequence with
// D = round(f0 / bin_width), then re-center to zero mean. Samples before
// the delay line fills pass through unchanged.
FlattenedSpectrum comb_annihilate(const FlattenedSpectrum& flat, double f0_hz,
                                  double alpha_c);

// Detail record for dumps and tests; estimate_frame_pitches is built on it.
struct FrameAnalysis {
  PowerSpectrum spectrum;
  FlattenedSpectrum flattened;
  ModgdVector modgd_pass1;
  ModgdVector modgd_pass2;  // empty when the first pass found nothing
  FramePitches pitches;
  double rms = 0.0;
};

// Autocorrelation of the windowed frame normalized by the window's own
// autocorrelation: ~1 at lags the frame is periodic over, ~0 elsewhere.
std::vector<double> normalized_autocorr(std::span<const double> windowed_frame,
                                        WindowKind window, std::size_t n_fft);

FrameAnalysis analyze_frame(std::span<const double> windowed_frame,
                            int sample_rate, const PitchEngineConfig& cfg);

FramePitches estimate_frame_pitches(std::span<const double> windowed_frame,
                                    int sample_rate,
                                    const PitchEngineConfig& cfg);

// First pass only.
std::optional<double> estimate_monopitch(std::span<const double> windowed_frame,
                                         int sample_rate,
                                         const PitchEngineConfig& cfg);

// Lag window [sample_rate/f_max, sample_rate/f_min] in bins, clamped to the
// valid interior of a vector of the given length.
std::pair<std::size_t, std::size_t> lag_window(const PitchRange& range,
                                               int sample_rate,
                                               std::size_t vector_len);

}  // namespace modgd
