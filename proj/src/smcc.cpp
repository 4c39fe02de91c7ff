// src/smcc.cpp
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

#include "modgd/smcc.hpp"

#include <algorithm>
#include <cmath>

namespace modgd {

namespace {

constexpr double kPi = 3.14159265358979323846;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

std::vector<std::vector<double>> mel_filterbank(std::size_t n_filters,
                                                std::size_t n_bins,
                                                int sample_rate) {
  if (n_filters < 1 || n_bins < 3) throw NumericError("mel_filterbank: bad sizes");
  const double f_max = sample_rate / 2.0;
  const double mel_max = hz_to_mel(f_max);

  // n_filters + 2 edge points, uniformly spaced in mel, mapped to bins.
  std::vector<double> edges(n_filters + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double mel = mel_max * static_cast<double>(i) /
                       static_cast<double>(n_filters + 1);
    edges[i] = mel_to_hz(mel) / f_max * static_cast<double>(n_bins - 1);
  }

  std::vector<std::vector<double>> bank(n_filters, std::vector<double>(n_bins, 0.0));
  for (std::size_t j = 0; j < n_filters; ++j) {
    const double lo = edges[j], mid = edges[j + 1], hi = edges[j + 2];
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double b = static_cast<double>(k);
      if (b <= lo || b >= hi) continue;
      bank[j][k] = b <= mid ? (b - lo) / std::max(mid - lo, 1e-12)
                            : (hi - b) / std::max(hi - mid, 1e-12);
    }
  }
  return bank;
}

std::vector<double> dct2(const std::vector<double>& x, std::size_t n_out) {
  const std::size_t n = x.size();
  if (n == 0) throw NumericError("dct2: empty input");
  n_out = std::min(n_out, n);
  std::vector<double> out(n_out, 0.0);
  const double norm0 = std::sqrt(1.0 / static_cast<double>(n));
  const double norm = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n_out; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(kPi * static_cast<double>(k) *
                             (static_cast<double>(i) + 0.5) /
                             static_cast<double>(n));
    }
    out[k] = acc * (k == 0 ? norm0 : norm);
  }
  return out;
}

std::vector<std::vector<double>> smcc_features(const SignalBuffer& signal,
                                               const SmccConfig& cfg) {
  if (signal.samples.empty()) throw NumericError("smcc_features: empty signal");
  cfg.modgd.validate();

  const auto frames = frame_signal(signal, cfg.frame);
  const std::size_t frame_len = frames.front().size();
  const std::size_t n_fft = cfg.n_fft ? cfg.n_fft : default_n_fft(frame_len);
  const std::size_t n_bins = n_fft / 2 + 1;
  const auto bank = mel_filterbank(cfg.n_filters, n_bins, signal.sample_rate);

  std::vector<std::vector<double>> features;
  features.reserve(frames.size());
  for (const auto& frame : frames) {
    const PowerSpectrum spec = power_spectrum(frame, n_fft, signal.sample_rate);
    const auto env = cepstral_envelope(spec, cfg.flatten_lifter);
    FlattenedSpectrum flat = flatten_spectrum(spec, env, cfg.flatten_gamma);
    mask_to_source_band(flat, env, 1e-3);
    ModgdVector v = modified_group_delay(flat.values, cfg.modgd);

    // MODGD behaves like a squared magnitude but is signed; shift so the
    // filter-bank energies are non-negative before the log.
    double vmin = 0.0;
    for (double value : v.values) vmin = std::min(vmin, value);
    if (vmin < 0.0) {
      for (double& value : v.values) value -= vmin;
    }

    std::vector<double> log_fbe(cfg.n_filters);
    double fbe_max = 0.0;
    std::vector<double> fbe(cfg.n_filters, 0.0);
    for (std::size_t j = 0; j < cfg.n_filters; ++j) {
      double acc = 0.0;
      const auto& w = bank[j];
      for (std::size_t k = 0; k < n_bins && k < v.values.size(); ++k) {
        acc += w[k] * v.values[k];
      }
      fbe[j] = acc;
      fbe_max = std::max(fbe_max, acc);
    }
    const double floor_v =
        fbe_max > 0.0 ? kSpectralFloorRel * fbe_max : kSpectralFloorAbs;
    for (std::size_t j = 0; j < cfg.n_filters; ++j) {
      log_fbe[j] = std::log(std::max(fbe[j], floor_v));
    }
    features.push_back(dct2(log_fbe, cfg.n_coeffs));
  }
  return features;
}

}  // namespace modgd
