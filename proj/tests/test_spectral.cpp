// tests/test_spectral.cpp
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
#include <complex>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "modgd/fft.hpp"
#include "modgd/rng.hpp"
#include "modgd/spectral.hpp"

using namespace modgd;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Brute-force DFT magnitude squared: the oracle for power_spectrum.
std::vector<double> direct_power(const std::vector<double>& x, std::size_t n_fft) {
  std::vector<double> out(n_fft / 2 + 1);
  for (std::size_t k = 0; k <= n_fft / 2; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double a = -2.0 * kPi * static_cast<double>(k * n) /
                       static_cast<double>(n_fft);
      acc += x[n] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = std::norm(acc);
  }
  return out;
}

SignalBuffer constant_signal(double value, double seconds, int sr) {
  SignalBuffer s;
  s.sample_rate = sr;
  s.samples.assign(static_cast<std::size_t>(seconds * sr), value);
  return s;
}

}  // namespace

TEST_CASE("framing: counts, hop and zero padding") {
  SignalBuffer s = constant_signal(1.0, 2.0, 16000);
  FrameConfig cfg{30.0, 10.0, WindowKind::rectangular};
  const auto frames = frame_signal(s, cfg);

  // 2 s at 16 kHz, 30 ms / 10 ms: 480-sample frames, hop 160, 198 full.
  CHECK(frames.front().size() == 480);
  std::size_t full = 0;
  for (const auto& f : frames) {
    if (std::count(f.begin(), f.end(), 1.0) == 480) ++full;
  }
  CHECK(full == 198);
  CHECK(frames.size() == 200);  // trailing partial frames, zero padded

  // Rectangular window on a constant signal: all-ones frames.
  for (double v : frames[0]) CHECK(v == 1.0);
  // Last frame is mostly padding.
  const auto& last = frames.back();
  CHECK(last[0] == 1.0);
  CHECK(last[200] == 0.0);
}

TEST_CASE("framing: hamming window applied pointwise") {
  SignalBuffer s = constant_signal(1.0, 0.1, 16000);
  FrameConfig cfg{30.0, 10.0, WindowKind::hamming};
  const auto frames = frame_signal(s, cfg);
  const auto w = make_window(WindowKind::hamming, 480);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(frames[0][i] == doctest::Approx(w[i]).epsilon(1e-12));
  }
}

TEST_CASE("framing: empty input is an error") {
  SignalBuffer s;
  s.sample_rate = 16000;
  CHECK_THROWS_AS(frame_signal(s, FrameConfig{}), NumericError);
}

TEST_CASE("windowing is energy bounded") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> frame(480);
    for (auto& v : frame) v = rng.uniform(-1.0, 1.0);
    const auto w = make_window(WindowKind::hamming, frame.size());
    double raw = 0.0, windowed = 0.0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      raw += frame[i] * frame[i];
      windowed += frame[i] * w[i] * frame[i] * w[i];
    }
    CHECK(windowed <= raw);
  }
}

TEST_CASE("power_spectrum: trivial cases") {
  std::vector<double> zeros(64, 0.0);
  auto ps = power_spectrum(zeros, 64);
  for (double b : ps.bins) CHECK(b == 0.0);

  std::vector<double> impulse(8, 0.0);
  impulse[0] = 1.0;
  ps = power_spectrum(impulse, 8);
  REQUIRE(ps.bins.size() == 5);
  for (double b : ps.bins) CHECK(b == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(power_spectrum(zeros, 32), NumericError);
}

TEST_CASE("power_spectrum: 1 kHz cosine vs direct DFT oracle") {
  const int sr = 16000;
  std::vector<double> frame(1024);
  for (std::size_t n = 0; n < frame.size(); ++n) {
    frame[n] = std::cos(2.0 * kPi * 1000.0 * static_cast<double>(n) / sr);
  }
  const auto ps = power_spectrum(frame, 1024, sr);
  const auto oracle = direct_power(frame, 1024);
  REQUIRE(ps.bins.size() == oracle.size());
  double peak = 0.0;
  for (double b : oracle) peak = std::max(peak, b);
  for (std::size_t k = 0; k < oracle.size(); ++k) {
    CHECK(std::abs(ps.bins[k] - oracle[k]) <= 1e-9 * peak);
  }
  // 1000 Hz on a 1024-point grid at 16 kHz lands on bin 64.
  std::size_t argmax = 0;
  for (std::size_t k = 1; k < ps.bins.size(); ++k) {
    if (ps.bins[k] > ps.bins[argmax]) argmax = k;
  }
  CHECK(argmax == 64);
  CHECK(ps.bin_width == doctest::Approx(sr / 1024.0));
}

TEST_CASE("power_spectrum satisfies Parseval on random frames") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> frame(300);
    for (auto& v : frame) v = rng.uniform(-1.0, 1.0);
    const std::size_t n_fft = 512;
    const auto ps = power_spectrum(frame, n_fft);
    double full_energy = ps.bins[0] + ps.bins[n_fft / 2];
    for (std::size_t k = 1; k < n_fft / 2; ++k) full_energy += 2.0 * ps.bins[k];
    full_energy /= static_cast<double>(n_fft);
    double time_energy = 0.0;
    for (double v : frame) time_energy += v * v;
    CHECK(full_energy == doctest::Approx(time_energy).epsilon(1e-6));
  }
}

TEST_CASE("cepstral_envelope: constant spectrum maps to itself") {
  std::vector<double> bins(129, 3.5);
  const auto env = cepstral_envelope(bins, 1);
  for (double e : env) CHECK(e == doctest::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("cepstral_envelope: full lifter reproduces the input") {
  Rng rng(5);
  std::vector<double> bins(513);
  for (auto& b : bins) b = std::exp(rng.uniform(-2.0, 2.0));
  const auto env = cepstral_envelope(bins, bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    CHECK(env[k] == doctest::Approx(bins[k]).epsilon(1e-6));
  }
}

TEST_CASE("cepstral_envelope: smooths picket-fence ripple by 10x") {
  // Harmonic picket fence at 100 Hz spacing over a 2048-point transform at
  // 16 kHz: peaks every 12.8 bins.
  const int sr = 16000;
  const std::size_t n_fft = 2048;
  const std::size_t k_bins = n_fft / 2 + 1;
  std::vector<double> bins(k_bins);
  for (std::size_t k = 0; k < k_bins; ++k) {
    const double f = static_cast<double>(k) * sr / n_fft;
    const double ripple = std::cos(2.0 * kPi * f / 100.0);
    bins[k] = std::exp(1.5 + ripple);  // strictly positive, strong ripple
  }
  const auto env = cepstral_envelope(bins, 30);

  // Ripple = max - min within one 100 Hz period, away from the edges.
  auto ripple_of = [&](const std::vector<double>& v) {
    const std::size_t start = 100, period = 13;
    double lo = v[start], hi = v[start];
    for (std::size_t k = start; k < start + period; ++k) {
      lo = std::min(lo, v[k]);
      hi = std::max(hi, v[k]);
    }
    return hi - lo;
  };
  CHECK(ripple_of(bins) >= 10.0 * ripple_of(env));
}

TEST_CASE("cepstral_envelope is idempotent") {
  Rng rng(17);
  const std::size_t k_bins = 257;
  std::vector<double> bins(k_bins);
  for (auto& b : bins) b = std::exp(rng.uniform(-1.0, 1.0));
  const auto env1 = cepstral_envelope(bins, 20);
  const auto env2 = cepstral_envelope(env1, 20);
  for (std::size_t k = 0; k < k_bins; ++k) {
    CHECK(env2[k] == doctest::Approx(env1[k]).epsilon(1e-6));
  }
}

TEST_CASE("flatten_spectrum: identity and dc removal") {
  PowerSpectrum spec;
  spec.n_fft = 16;
  spec.bin_width = 1.0;
  spec.bins = {1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 3.0, 2.0, 1.0};

  // spec == env: all values 1 before dc removal, 0 after.
  auto flat = flatten_spectrum(spec, spec.bins, 0.7);
  for (double v : flat.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

  // gamma = 1, env = 1: bins minus their mean.
  std::vector<double> ones(spec.bins.size(), 1.0);
  flat = flatten_spectrum(spec, ones, 1.0);
  const double mean =
      std::accumulate(spec.bins.begin(), spec.bins.end(), 0.0) / spec.bins.size();
  for (std::size_t k = 0; k < spec.bins.size(); ++k) {
    CHECK(flat.values[k] == doctest::Approx(spec.bins[k] - mean).epsilon(1e-12));
  }

  // Zero-mean invariant.
  double m = std::accumulate(flat.values.begin(), flat.values.end(), 0.0) /
             flat.values.size();
  double peak = 0.0;
  for (double v : flat.values) peak = std::max(peak, std::abs(v));
  CHECK(std::abs(m) <= 1e-9 * std::max(peak, 1.0));

  // Errors: non-positive envelope, gamma out of range.
  std::vector<double> bad_env(spec.bins.size(), 1.0);
  bad_env[3] = 0.0;
  CHECK_THROWS_AS(flatten_spectrum(spec, bad_env, 1.0), NumericError);
  CHECK_THROWS_AS(flatten_spectrum(spec, ones, 0.0), NumericError);
  CHECK_THROWS_AS(flatten_spectrum(spec, ones, 1.5), NumericError);
}

TEST_CASE("flatten_spectrum: harmonic excitation yields periodic ripple") {
  // Impulse train with period 80 samples through a 2-pole resonator; after
  // flattening, the spectrum-as-signal has its dominant DFT peak at a lag
  // of 80 samples (the period).
  const int sr = 16000;
  const std::size_t period = 80;
  std::vector<double> x(480, 0.0);
  for (std::size_t n = 0; n < x.size(); n += period) x[n] = 1.0;
  // y[n] = x[n] + 1.2 y[n-1] - 0.72 y[n-2] (stable resonator)
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    y[n] = x[n];
    if (n >= 1) y[n] += 1.2 * y[n - 1];
    if (n >= 2) y[n] -= 0.72 * y[n - 2];
  }
  const auto w = make_window(WindowKind::hamming, y.size());
  for (std::size_t n = 0; n < y.size(); ++n) y[n] *= w[n];

  const std::size_t n_fft = default_n_fft(y.size());
  const auto spec = power_spectrum(y, n_fft, sr);
  const auto env = cepstral_envelope(spec, 30);
  const auto flat = flatten_spectrum(spec, env, 1.0);

  // Oracle: direct DFT of the flattened sequence; with the transform size
  // equal to n_fft, the ripple of a period-T excitation peaks at bin T.
  const auto lag_power = power_spectrum(flat.values, n_fft);
  std::size_t argmax = 20;  // skip the low-lag envelope remnant
  for (std::size_t k = 20; k < lag_power.bins.size(); ++k) {
    if (lag_power.bins[k] > lag_power.bins[argmax]) argmax = k;
  }
  CHECK(std::abs(static_cast<int>(argmax) - static_cast<int>(period)) <= 1);
}

TEST_CASE("spectral_flux: trivial values and boundary detection") {
  PowerSpectrum a, b;
  a.bins = {0.0, 1.0, 4.0, 1.0};
  b.bins = a.bins;
  CHECK(spectral_flux(a, b) == 0.0);

  // prev all-zero: flux is the sum of squared normalized magnitudes.
  PowerSpectrum zero;
  zero.bins.assign(4, 0.0);
  const double expected = 0.0 + 0.5 * 0.5 + 1.0 + 0.5 * 0.5;
  CHECK(spectral_flux(a, zero) == doctest::Approx(expected).epsilon(1e-12));

  PowerSpectrum short_spec;
  short_spec.bins = {1.0, 2.0};
  CHECK_THROWS_AS(spectral_flux(a, short_spec), NumericError);
}

TEST_CASE("spectral_flux spikes at a silence-to-voiced boundary") {
  const int sr = 16000;
  SignalBuffer s;
  s.sample_rate = sr;
  s.samples.assign(16000, 0.0);
  for (std::size_t n = 8000; n < s.samples.size(); ++n) {
    const double t = static_cast<double>(n) / sr;
    s.samples[n] = std::sin(2.0 * kPi * 220.0 * t) +
                   0.5 * std::sin(2.0 * kPi * 440.0 * t);
  }
  const auto frames = frame_signal(s, FrameConfig{});
  std::vector<double> flux(frames.size(), 0.0);
  PowerSpectrum prev;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    auto ps = power_spectrum(frames[t], 2048, sr);
    if (t > 0) flux[t] = spectral_flux(ps, prev);
    prev = ps;
  }
  // The boundary lies at frame 50; steady frames are well after it.
  std::vector<double> steady(flux.begin() + 60, flux.end() - 5);
  std::sort(steady.begin(), steady.end());
  const double median = steady[steady.size() / 2];
  const double boundary = *std::max_element(flux.begin() + 45, flux.begin() + 55);
  CHECK(boundary >= 5.0 * std::max(median, 1e-12));
}
