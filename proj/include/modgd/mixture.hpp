// include/modgd/mixture.hpp
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
// Test-signal factory: harmonic-model synthesis, TMR-controlled mixing,
// SNR-controlled noise and stochastic-model reverberation.

#pragma once

#include <cstdint>
#include <vector>

#include "modgd/rng.hpp"
#include "modgd/types.hpp"

namespace modgd {

struct SyntheticSource {
  std::vector<double> f0_contour;    // Hz, one value per contour frame
  double contour_hop_ms = 10.0;      // spacing of contour samples
  std::size_t num_harmonics = 5;     // L
  std::vector<double> amplitudes;    // per harmonic; empty = all 1
  std::vector<double> phases;        // radians per harmonic; empty = all 0
  double duration_s = 0.0;
};

enum class NoiseKind { white, babble };

struct NoiseConfig {
  NoiseKind kind = NoiseKind::white;
  double snr_db = 10.0;  // +infinity disables the noise entirely
  std::uint64_t seed = 0;
};

struct RirConfig {
  double t60_s = 0.2;
  std::uint64_t seed = 0;
  std::size_t length = 0;  // samples; 0 = 1.25 * t60 * sample_rate
};

// Sum of A_l * cos(2*pi*l*phi(t) + phase_l) with phase phi accumulated from
// the per-sample interpolated f0 contour. Deterministic in its fields.
SignalBuffer synth_harmonic(const SyntheticSource& src, int sample_rate);

// target + masker rescaled so the average-power ratio over the region where
// both are active equals tmr_db. The masker is truncated or looped to the
// target length first.
SignalBuffer mix_tmr(const SignalBuffer& target, const SignalBuffer& masker,
                     double tmr_db);

// Additive noise scaled against the signal power. White is Gaussian; babble
// is a sum of drifting synthetic voice-like harmonic streams.
SignalBuffer add_noise(const SignalBuffer& signal, const NoiseConfig& cfg);

// Schroeder-model room impulse response h[n] = b[n] * exp(-delta*n) with
// b centered Gaussian noise and delta chosen so the energy envelope decays
// 60 dB at t60.
std::vector<double> gen_rir(const RirConfig& cfg, int sample_rate);

// Full linear convolution: output length = len(signal) + len(h) - 1.
SignalBuffer apply_reverb(const SignalBuffer& signal, const std::vector<double>& h);

double mean_power(const std::vector<double>& x);

}  // namespace modgd
