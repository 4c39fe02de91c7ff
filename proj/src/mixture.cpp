// src/mixture.cpp
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

#include "modgd/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "modgd/fft.hpp"
#include "modgd/kernels.hpp"

namespace modgd {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kActiveEps = 1e-8;  // fraction of peak below which a sample is inactive
}  // namespace

double mean_power(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  return kernels::active().sum_sq(x.data(), x.size()) /
         static_cast<double>(x.size());
}

SignalBuffer synth_harmonic(const SyntheticSource& src, int sample_rate) {
  if (sample_rate <= 0) throw NumericError("synth: sample_rate must be positive");
  if (src.f0_contour.empty()) throw NumericError("synth: empty f0 contour");
  if (src.num_harmonics < 1) throw NumericError("synth: need at least one harmonic");
  if (!(src.duration_s > 0.0)) throw NumericError("synth: duration must be positive");
  for (double f0 : src.f0_contour) {
    if (!(f0 > 0.0)) throw NumericError("synth: contour values must be positive");
    if (f0 * static_cast<double>(src.num_harmonics) >= sample_rate / 2.0) {
      throw NumericError("synth: harmonics exceed the Nyquist frequency");
    }
  }

  const auto n = static_cast<std::size_t>(src.duration_s * sample_rate + 0.5);
  const double hop_s = src.contour_hop_ms * 1e-3;

  // Per-sample f0 by linear interpolation between contour points.
  auto f0_at = [&](double t) {
    const double pos = t / hop_s;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= src.f0_contour.size()) return src.f0_contour.back();
    const double frac = pos - static_cast<double>(i);
    return src.f0_contour[i] * (1.0 - frac) + src.f0_contour[i + 1] * frac;
  };

  SignalBuffer out;
  out.sample_rate = sample_rate;
  out.samples.assign(n, 0.0);

  const double dt = 1.0 / sample_rate;
  double phase_cycles = 0.0;  // accumulated fundamental phase, in cycles
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    double v = 0.0;
    for (std::size_t l = 1; l <= src.num_harmonics; ++l) {
      const double amp =
          src.amplitudes.empty() ? 1.0 : src.amplitudes[l - 1];
      const double ph = src.phases.empty() ? 0.0 : src.phases[l - 1];
      v += amp * std::cos(2.0 * kPi * static_cast<double>(l) * phase_cycles + ph);
    }
    out.samples[i] = v;
    phase_cycles += f0_at(t) * dt;
  }
  return out;
}

SignalBuffer mix_tmr(const SignalBuffer& target, const SignalBuffer& masker,
                     double tmr_db) {
  if (target.sample_rate != masker.sample_rate) {
    throw NumericError("mix_tmr: sample rates differ");
  }
  if (target.samples.empty() || masker.samples.empty()) {
    throw NumericError("mix_tmr: empty signal");
  }

  // Truncate or loop the masker to the target length.
  const std::size_t n = target.samples.size();
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = masker.samples[i % masker.samples.size()];

  // Powers over the overlap where both signals carry energy, judged on
  // 10 ms blocks so waveform zero crossings do not bias the averages.
  const std::size_t block = std::max<std::size_t>(target.sample_rate / 100, 1);
  const std::size_t n_blocks = (n + block - 1) / block;
  std::vector<double> bt(n_blocks, 0.0), bm(n_blocks, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    bt[i / block] += target.samples[i] * target.samples[i];
    bm[i / block] += m[i] * m[i];
  }
  double bt_peak = 0.0, bm_peak = 0.0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    bt_peak = std::max(bt_peak, bt[b]);
    bm_peak = std::max(bm_peak, bm[b]);
  }
  if (bm_peak <= 0.0) throw NumericError("mix_tmr: masker has zero power");

  double p_t = 0.0, p_m = 0.0;
  std::size_t count = 0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    if (bt[b] > kActiveEps * bt_peak && bm[b] > kActiveEps * bm_peak) {
      p_t += bt[b];
      p_m += bm[b];
      count += std::min(block, n - b * block);
    }
  }
  if (count == 0 || p_m <= 0.0) throw NumericError("mix_tmr: masker has zero power");
  p_t /= static_cast<double>(count);
  p_m /= static_cast<double>(count);

  const double gain = std::sqrt(p_t / (p_m * std::pow(10.0, tmr_db / 10.0)));

  SignalBuffer out;
  out.sample_rate = target.sample_rate;
  out.samples = target.samples;
  kernels::active().axpy(gain, m.data(), out.samples.data(), n);
  return out;
}

namespace {

// Voice-like babble proxy: several independent harmonic streams with slowly
// drifting f0, summed with random offsets.
std::vector<double> babble_noise(std::size_t n, int sample_rate, Rng& rng) {
  constexpr int kStreams = 6;
  std::vector<double> noise(n, 0.0);
  for (int s = 0; s < kStreams; ++s) {
    Rng stream_rng = rng.fork(static_cast<std::uint64_t>(s) + 100);
    SyntheticSource src;
    src.duration_s = static_cast<double>(n) / sample_rate + 0.05;
    src.num_harmonics = 4;
    const double base = stream_rng.uniform(90.0, 250.0);
    const std::size_t contour_len =
        static_cast<std::size_t>(src.duration_s / 0.01) + 2;
    src.f0_contour.resize(contour_len);
    double f = base;
    for (auto& c : src.f0_contour) {
      f = std::clamp(f + stream_rng.uniform(-2.0, 2.0), 0.7 * base, 1.3 * base);
      c = f;
    }
    src.phases.resize(src.num_harmonics);
    for (auto& p : src.phases) p = stream_rng.uniform(0.0, 2.0 * kPi);
    src.amplitudes.resize(src.num_harmonics);
    for (std::size_t l = 0; l < src.num_harmonics; ++l) {
      src.amplitudes[l] = 1.0 / static_cast<double>(l + 1);
    }
    const SignalBuffer stream = synth_harmonic(src, sample_rate);
    const std::size_t offset = stream_rng.integer(sample_rate / 100 + 1);
    for (std::size_t i = 0; i < n; ++i) {
      noise[i] += stream.samples[(i + offset) % stream.samples.size()];
    }
  }
  return noise;
}

}  // namespace

SignalBuffer add_noise(const SignalBuffer& signal, const NoiseConfig& cfg) {
  SignalBuffer out = signal;
  if (std::isinf(cfg.snr_db) && cfg.snr_db > 0.0) return out;  // noise gain 0
  if (!std::isfinite(cfg.snr_db)) throw NumericError("add_noise: snr_db must be finite");

  const std::size_t n = signal.samples.size();
  if (n == 0) return out;

  Rng rng(cfg.seed);
  std::vector<double> noise(n);
  if (cfg.kind == NoiseKind::white) {
    for (auto& v : noise) v = rng.gaussian();
  } else {
    noise = babble_noise(n, signal.sample_rate, rng);
  }

  const double p_sig = mean_power(signal.samples);
  const double p_noise = mean_power(noise);
  if (p_noise <= 0.0) return out;
  const double gain =
      std::sqrt(p_sig / (p_noise * std::pow(10.0, cfg.snr_db / 10.0)));
  kernels::active().axpy(gain, noise.data(), out.samples.data(), n);
  return out;
}

std::vector<double> gen_rir(const RirConfig& cfg, int sample_rate) {
  if (!(cfg.t60_s > 0.0)) throw NumericError("gen_rir: t60 must be positive");
  if (sample_rate <= 0) throw NumericError("gen_rir: sample_rate must be positive");

  // Energy envelope exp(-2*delta*n) reaches -60 dB at n = t60 * fs.
  const double delta = 3.0 * std::log(10.0) / (cfg.t60_s * sample_rate);
  const std::size_t len =
      cfg.length ? cfg.length
                 : static_cast<std::size_t>(1.25 * cfg.t60_s * sample_rate) + 1;

  Rng rng(cfg.seed);
  std::vector<double> h(len);
  for (std::size_t i = 0; i < len; ++i) {
    h[i] = rng.gaussian() * std::exp(-delta * static_cast<double>(i));
  }
  return h;
}

SignalBuffer apply_reverb(const SignalBuffer& signal, const std::vector<double>& h) {
  if (signal.samples.empty() || h.empty()) {
    throw NumericError("apply_reverb: empty input");
  }
  const std::size_t out_len = signal.samples.size() + h.size() - 1;
  const std::size_t n_fft = fft::next_pow2(out_len);

  std::vector<std::complex<double>> a(n_fft, {0.0, 0.0});
  std::vector<std::complex<double>> b(n_fft, {0.0, 0.0});
  for (std::size_t i = 0; i < signal.samples.size(); ++i) a[i] = {signal.samples[i], 0.0};
  for (std::size_t i = 0; i < h.size(); ++i) b[i] = {h[i], 0.0};
  fft::transform(a, false);
  fft::transform(b, false);
  for (std::size_t i = 0; i < n_fft; ++i) a[i] *= b[i];
  fft::transform(a, true);

  SignalBuffer out;
  out.sample_rate = signal.sample_rate;
  out.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out.samples[i] = a[i].real();
  return out;
}

}  // namespace modgd
