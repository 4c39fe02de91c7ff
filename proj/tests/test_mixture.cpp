// tests/test_mixture.cpp
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "modgd/mixture.hpp"
#include "modgd/rng.hpp"

using namespace modgd;

namespace {

constexpr int kSr = 16000;

SyntheticSource constant_source(double f0, std::size_t harmonics, double secs) {
  SyntheticSource src;
  src.f0_contour.assign(static_cast<std::size_t>(secs * 100) + 1, f0);
  src.num_harmonics = harmonics;
  src.duration_s = secs;
  return src;
}

double autocorr_pitch(const std::vector<double>& x, double f_min, double f_max) {
  const auto lag_lo = static_cast<std::size_t>(kSr / f_max);
  const auto lag_hi = static_cast<std::size_t>(kSr / f_min);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_lag = lag_lo;
  for (std::size_t lag = lag_lo; lag <= lag_hi; ++lag) {
    double acc = 0.0;
    for (std::size_t n = 0; n + lag < x.size(); ++n) acc += x[n] * x[n + lag];
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  return static_cast<double>(kSr) / static_cast<double>(best_lag);
}

}  // namespace

TEST_CASE("synth_harmonic: pure cosine power and determinism") {
  auto src = constant_source(200.0, 1, 2.0);
  const auto a = synth_harmonic(src, kSr);
  CHECK(a.samples.size() == 32000);
  CHECK(mean_power(a.samples) == doctest::Approx(0.5).epsilon(1e-3));

  const auto b = synth_harmonic(src, kSr);
  CHECK(a.samples == b.samples);
}

TEST_CASE("synth_harmonic: aliasing and validation errors") {
  auto src = constant_source(2000.0, 5, 0.5);  // 10 kHz > Nyquist
  CHECK_THROWS_AS(synth_harmonic(src, kSr), NumericError);
  src = constant_source(200.0, 5, 0.5);
  src.f0_contour.clear();
  CHECK_THROWS_AS(synth_harmonic(src, kSr), NumericError);
}

TEST_CASE("synth_harmonic pitch matches the autocorrelation oracle") {
  auto src = constant_source(200.0, 5, 1.0);
  const auto s = synth_harmonic(src, kSr);
  CHECK(std::abs(autocorr_pitch(s.samples, 60.0, 400.0) - 200.0) <= 1.0);
}

TEST_CASE("mix_tmr: power ratios and symmetry") {
  const auto a = synth_harmonic(constant_source(150.0, 3, 1.0), kSr);
  const auto b = synth_harmonic(constant_source(230.0, 3, 1.0), kSr);

  // 0 dB: equal average powers; verify by reconstructing the masker gain.
  const auto mix0 = mix_tmr(a, b, 0.0);
  std::vector<double> masker_part(mix0.samples.size());
  for (std::size_t i = 0; i < masker_part.size(); ++i) {
    masker_part[i] = mix0.samples[i] - a.samples[i];
  }
  CHECK(mean_power(masker_part) ==
        doctest::Approx(mean_power(a.samples)).epsilon(1e-6));

  // +3 dB: power ratio 10^0.3.
  const auto mix3 = mix_tmr(a, b, 3.0);
  for (std::size_t i = 0; i < masker_part.size(); ++i) {
    masker_part[i] = mix3.samples[i] - a.samples[i];
  }
  CHECK(mean_power(a.samples) / mean_power(masker_part) ==
        doctest::Approx(std::pow(10.0, 0.3)).epsilon(1e-6));

  // Total power is symmetric at 0 dB.
  const auto mix_ba = mix_tmr(b, a, 0.0);
  CHECK(mean_power(mix0.samples) ==
        doctest::Approx(mean_power(mix_ba.samples)).epsilon(1e-6));

  SignalBuffer zeros;
  zeros.sample_rate = kSr;
  zeros.samples.assign(1000, 0.0);
  CHECK_THROWS_AS(mix_tmr(a, zeros, 0.0), NumericError);
}

TEST_CASE("add_noise: sentinel, measured SNR, determinism") {
  const auto s = synth_harmonic(constant_source(180.0, 4, 1.0), kSr);

  NoiseConfig quiet;
  quiet.snr_db = std::numeric_limits<double>::infinity();
  const auto untouched = add_noise(s, quiet);
  CHECK(untouched.samples == s.samples);

  NoiseConfig white{NoiseKind::white, 10.0, 7};
  const auto noisy = add_noise(s, white);
  std::vector<double> noise_part(s.samples.size());
  for (std::size_t i = 0; i < noise_part.size(); ++i) {
    noise_part[i] = noisy.samples[i] - s.samples[i];
  }
  const double snr =
      10.0 * std::log10(mean_power(s.samples) / mean_power(noise_part));
  CHECK(std::abs(snr - 10.0) <= 0.1);

  const auto noisy2 = add_noise(s, white);
  CHECK(noisy.samples == noisy2.samples);

  NoiseConfig babble{NoiseKind::babble, 5.0, 11};
  const auto bab = add_noise(s, babble);
  for (std::size_t i = 0; i < noise_part.size(); ++i) {
    noise_part[i] = bab.samples[i] - s.samples[i];
  }
  const double bsnr =
      10.0 * std::log10(mean_power(s.samples) / mean_power(noise_part));
  CHECK(std::abs(bsnr - 5.0) <= 0.1);
  CHECK(add_noise(s, babble).samples == bab.samples);
}

TEST_CASE("white noise variance tracks the requested SNR") {
  SignalBuffer s;
  s.sample_rate = kSr;
  s.samples.assign(200000, 1.0);  // unit-power signal
  NoiseConfig cfg{NoiseKind::white, 10.0, 3};
  const auto noisy = add_noise(s, cfg);
  std::vector<double> noise(s.samples.size());
  for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = noisy.samples[i] - 1.0;
  const double var = mean_power(noise);
  // Requested sigma^2 = 10^{-1}; sample variance within 2%.
  CHECK(std::abs(var - 0.1) <= 0.002);
}

TEST_CASE("gen_rir: determinism and t60 decay") {
  RirConfig cfg;
  cfg.t60_s = 0.2;
  cfg.seed = 21;
  const auto h1 = gen_rir(cfg, kSr);
  const auto h2 = gen_rir(cfg, kSr);
  CHECK(h1 == h2);
  CHECK(h1.size() >= static_cast<std::size_t>(0.2 * kSr));

  // Pooled log-energy regression over seeds: the fitted envelope must fall
  // 60 dB at t60 within 0.5 dB.
  const std::size_t n = static_cast<std::size_t>(0.2 * kSr);
  std::vector<double> energy(n, 0.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RirConfig c = cfg;
    c.seed = seed;
    const auto h = gen_rir(c, kSr);
    for (std::size_t i = 0; i < n; ++i) energy[i] += h[i] * h[i];
  }
  // Least squares on log energy: slope in dB per sample.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    const double y = 10.0 * std::log10(energy[i] + 1e-300);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(n);
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double drop_at_t60 = slope * 0.2 * kSr;
  CHECK(std::abs(drop_at_t60 + 60.0) <= 0.5);
}

TEST_CASE("apply_reverb: identity, delay and convolution oracle") {
  const auto s = synth_harmonic(constant_source(220.0, 3, 0.1), kSr);

  std::vector<double> unit{1.0};
  auto out = apply_reverb(s, unit);
  REQUIRE(out.samples.size() == s.samples.size());
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    CHECK(out.samples[i] == doctest::Approx(s.samples[i]).epsilon(1e-12));
  }

  std::vector<double> delayed(8, 0.0);
  delayed[7] = 1.0;
  out = apply_reverb(s, delayed);
  REQUIRE(out.samples.size() == s.samples.size() + 7);
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    CHECK(out.samples[i + 7] == doctest::Approx(s.samples[i]).epsilon(1e-9));
  }

  // Random signal and kernel against the O(N*M) brute-force convolution.
  Rng rng(17);
  SignalBuffer sig;
  sig.sample_rate = kSr;
  sig.samples.resize(2000);
  for (auto& v : sig.samples) v = rng.uniform(-1.0, 1.0);
  std::vector<double> h(200);
  for (auto& v : h) v = rng.uniform(-0.5, 0.5);
  out = apply_reverb(sig, h);
  REQUIRE(out.samples.size() == sig.samples.size() + h.size() - 1);
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (i >= j && i - j < sig.samples.size()) acc += h[j] * sig.samples[i - j];
    }
    CHECK(std::abs(out.samples[i] - acc) <= 1e-9);
  }
}
