// src/spectral.cpp
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

#include "modgd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "modgd/fft.hpp"
#include "modgd/kernels.hpp"

namespace modgd {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::size_t default_n_fft(std::size_t frame_len) {
  return fft::next_pow2(4 * frame_len);
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (kind == WindowKind::hamming && length > 1) {
    for (std::size_t n = 0; n < length; ++n) {
      w[n] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(n) /
                                    static_cast<double>(length - 1));
    }
  }
  return w;
}

std::vector<std::vector<double>> frame_signal(const SignalBuffer& signal,
                                              const FrameConfig& cfg) {
  cfg.validate();
  if (signal.samples.empty()) throw NumericError("empty input");
  if (signal.sample_rate <= 0) throw NumericError("sample_rate must be positive");

  const std::size_t frame_len =
      static_cast<std::size_t>(cfg.frame_len_samples(signal.sample_rate));
  const std::size_t hop =
      static_cast<std::size_t>(cfg.hop_samples(signal.sample_rate));
  if (frame_len < 2) throw NumericError("frame length must be >= 2 samples");

  const std::vector<double> window = make_window(cfg.window, frame_len);
  const auto& ops = kernels::active();
  const std::size_t n = signal.samples.size();

  std::vector<std::vector<double>> frames;
  frames.reserve(n / hop + 1);
  for (std::size_t start = 0; start < n; start += hop) {
    std::vector<double> frame(frame_len, 0.0);
    const std::size_t avail = std::min(frame_len, n - start);
    std::copy_n(signal.samples.begin() + static_cast<std::ptrdiff_t>(start),
                avail, frame.begin());
    ops.multiply(frame.data(), window.data(), frame.data(), frame_len);
    frames.push_back(std::move(frame));
  }
  return frames;
}

PowerSpectrum power_spectrum(std::span<const double> frame, std::size_t n_fft,
                             int sample_rate) {
  if (n_fft < frame.size()) throw NumericError("n_fft smaller than frame length");
  if (!fft::is_power_of_two(n_fft)) {
    throw NumericError("n_fft must be a power of two");
  }
  auto spec = fft::real_half_spectrum(frame, n_fft);
  PowerSpectrum out;
  out.n_fft = n_fft;
  out.bin_width = sample_rate > 0
                      ? static_cast<double>(sample_rate) / static_cast<double>(n_fft)
                      : 1.0 / static_cast<double>(n_fft);
  out.bins.resize(spec.size());
  kernels::active().complex_dot_real(spec.data(), spec.data(), out.bins.data(),
                                     spec.size());
  return out;
}

std::vector<double> cepstral_envelope(std::span<const double> bins,
                                      std::size_t lifter_len) {
  const std::size_t k_bins = bins.size();
  if (k_bins < 2) throw NumericError("cepstral_envelope: need at least 2 bins");
  const std::size_t n = 2 * (k_bins - 1);
  if (!fft::is_power_of_two(n)) {
    throw NumericError("cepstral_envelope: bins must span n/2+1 of a power-of-two n");
  }
  if (lifter_len < 1) throw NumericError("cepstral_envelope: lifter_len must be >= 1");

  double maxv = 0.0;
  for (double b : bins) maxv = std::max(maxv, b);
  const double floor_v =
      maxv > 0.0 ? kSpectralFloorRel * maxv : kSpectralFloorAbs;

  // Even-symmetric log spectrum over the full transform circle.
  std::vector<std::complex<double>> buf(n);
  for (std::size_t k = 0; k < k_bins; ++k) {
    double v = std::log(std::max(bins[k], floor_v));
    buf[k] = {v, 0.0};
    if (k > 0 && k < k_bins - 1) buf[n - k] = {v, 0.0};
  }
  fft::transform(buf, true);  // real even cepstrum

  // Keep quefrencies |q| < lifter_len (circularly), zero the rest.
  const std::size_t keep = std::min(lifter_len, k_bins);
  for (std::size_t q = keep; q + keep <= n; ++q) buf[q] = {0.0, 0.0};
  // Re-zero imaginary residue so the smoothed spectrum is exactly even.
  for (auto& c : buf) c = {c.real(), 0.0};

  fft::transform(buf, false);
  std::vector<double> env(k_bins);
  for (std::size_t k = 0; k < k_bins; ++k) env[k] = std::exp(buf[k].real());
  return env;
}

FlattenedSpectrum flatten_spectrum(const PowerSpectrum& spec,
                                   std::span<const double> env, double gamma) {
  if (env.size() != spec.bins.size()) {
    throw NumericError("flatten_spectrum: envelope length mismatch");
  }
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw NumericError("flatten_spectrum: gamma must lie in (0, 1]");
  }
  for (double e : env) {
    if (!(e > 0.0)) throw NumericError("flatten_spectrum: envelope must be positive");
  }

  FlattenedSpectrum out;
  out.bin_width = spec.bin_width;
  out.flatten_gamma = gamma;
  out.values.resize(spec.bins.size());
  if (gamma == 1.0) {
    for (std::size_t k = 0; k < env.size(); ++k) {
      out.values[k] = spec.bins[k] / env[k];
    }
  } else {
    for (std::size_t k = 0; k < env.size(); ++k) {
      out.values[k] = std::pow(spec.bins[k] / env[k], gamma);
    }
  }

  const auto& ops = kernels::active();
  const double mean =
      ops.sum(out.values.data(), out.values.size()) /
      static_cast<double>(out.values.size());
  ops.add_scalar(out.values.data(), -mean, out.values.data(), out.values.size());
  return out;
}

void mask_to_source_band(FlattenedSpectrum& flat, std::span<const double> env,
                         double floor_rel, std::size_t taper_bins) {
  if (env.size() != flat.values.size()) {
    throw NumericError("mask_to_source_band: envelope length mismatch");
  }
  if (flat.values.empty()) return;

  double env_max = 0.0;
  for (double e : env) env_max = std::max(env_max, e);
  if (env_max <= 0.0) return;
  const double floor_v = floor_rel * env_max;

  std::size_t cut = 0;
  for (std::size_t k = 0; k < env.size(); ++k) {
    if (env[k] >= floor_v) cut = k;
  }
  // Keep at least a sliver of band, and skip the mask when it would not
  // remove anything.
  cut = std::max<std::size_t>(cut, 16);
  if (cut + taper_bins >= flat.values.size() - 1) {
    flat.band_limit = flat.values.size();
    return;
  }
  flat.band_limit = cut;

  for (std::size_t k = cut + 1; k < flat.values.size(); ++k) {
    if (k <= cut + taper_bins) {
      const double t = static_cast<double>(k - cut) / static_cast<double>(taper_bins);
      flat.values[k] *= 0.5 * (1.0 + std::cos(kPi * t));
    } else {
      flat.values[k] = 0.0;
    }
  }
  const auto& ops = kernels::active();
  const double mean = ops.sum(flat.values.data(), flat.values.size()) /
                      static_cast<double>(flat.values.size());
  ops.add_scalar(flat.values.data(), -mean, flat.values.data(),
                 flat.values.size());
}

double spectral_flux(const PowerSpectrum& cur, const PowerSpectrum& prev) {
  if (cur.bins.size() != prev.bins.size()) {
    throw NumericError("spectral_flux: length mismatch");
  }
  const std::size_t n = cur.bins.size();
  auto normalized_magnitude = [n](const PowerSpectrum& s) {
    std::vector<double> m(n);
    double peak = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      m[k] = std::sqrt(std::max(s.bins[k], 0.0));
      peak = std::max(peak, m[k]);
    }
    if (peak > 0.0) {
      kernels::active().scale(m.data(), 1.0 / peak, m.data(), n);
    }
    return m;
  };
  const auto mc = normalized_magnitude(cur);
  const auto mp = normalized_magnitude(prev);
  return kernels::active().sum_sq_diff(mc.data(), mp.data(), n);
}

}  // namespace modgd
