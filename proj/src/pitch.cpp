// src/pitch.cpp
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

#include "modgd/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "modgd/fft.hpp"
#include "modgd/kernels.hpp"

namespace modgd {

double comb_magnitude(double omega, const CombConfig& cfg) {
  cfg.validate();
  const double a = cfg.alpha_c;
  const double radicand =
      (1.0 + a * a) + 2.0 * a * std::cos(omega * static_cast<double>(cfg.delay));
  return std::sqrt(std::max(radicand, 0.0));
}

FlattenedSpectrum comb_annihilate(const FlattenedSpectrum& flat, double f0_hz,
                                  double alpha_c) {
  if (flat.values.empty()) throw NumericError("comb_annihilate: empty spectrum");
  if (!(flat.bin_width > 0.0)) throw NumericError("comb_annihilate: bin_width unset");
  const std::size_t d =
      static_cast<std::size_t>(std::llround(f0_hz / flat.bin_width));
  if (d == 0) throw NumericError("pitch below spectral resolution");
  CombConfig comb{alpha_c, d};
  comb.validate();

  FlattenedSpectrum out;
  out.bin_width = flat.bin_width;
  out.flatten_gamma = flat.flatten_gamma;
  out.values.resize(flat.values.size());
  const auto& ops = kernels::active();
  ops.comb_fir(flat.values.data(), out.values.data(), flat.values.size(), d,
               alpha_c);
  const double mean = ops.sum(out.values.data(), out.values.size()) /
                      static_cast<double>(out.values.size());
  ops.add_scalar(out.values.data(), -mean, out.values.data(), out.values.size());
  return out;
}

std::pair<std::size_t, std::size_t> lag_window(const PitchRange& range,
                                               int sample_rate,
                                               std::size_t vector_len) {
  range.validate(sample_rate);
  auto lo = static_cast<std::size_t>(std::ceil(sample_rate / range.f_max));
  auto hi = static_cast<std::size_t>(std::floor(sample_rate / range.f_min));
  lo = std::max<std::size_t>(lo, 1);
  hi = std::min(hi, vector_len >= 2 ? vector_len - 2 : 0);
  if (lo >= hi) throw NumericError("pitch range maps to an empty lag window");
  return {lo, hi};
}

std::vector<double> normalized_autocorr(std::span<const double> windowed_frame,
                                        WindowKind window, std::size_t n_fft) {
  auto autocorr = [n_fft](std::span<const double> x) {
    std::vector<std::complex<double>> buf(n_fft, {0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = {x[i], 0.0};
    fft::transform(buf, false);
    for (auto& c : buf) c = {std::norm(c), 0.0};
    fft::transform(buf, true);
    std::vector<double> r(n_fft / 2);
    for (std::size_t t = 0; t < r.size(); ++t) r[t] = buf[t].real();
    return r;
  };

  const auto r = autocorr(windowed_frame);
  const auto w = make_window(window, windowed_frame.size());
  const auto rw = autocorr(w);

  std::vector<double> rho(r.size(), 0.0);
  if (!(r[0] > 0.0)) return rho;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const double taper = rw[t] / rw[0];
    // Beyond the window support the normalization blows up noise; leave 0.
    if (taper > 0.05) rho[t] = (r[t] / r[0]) / taper;
  }
  return rho;
}

namespace {

double max_near(const std::vector<double>& v, double center, double radius) {
  const auto lo = static_cast<std::size_t>(
      std::clamp(center - radius, 0.0, static_cast<double>(v.size() - 1)));
  const auto hi = static_cast<std::size_t>(
      std::clamp(center + radius, 0.0, static_cast<double>(v.size() - 1)));
  double best = v[lo];
  for (std::size_t k = lo; k <= hi; ++k) best = std::max(best, v[k]);
  return best;
}

struct PeakCandidate {
  std::size_t bin = 0;
  double value = 0.0;
};

// Predominant corroborated peak: the highest local maximum that clears the
// fraction-of-window-maximum test and whose lag the frame autocorrelation
// supports. A corroborated peak at half the lag with comparable height wins
// (period, not its multiple).
std::optional<PeakPick> select_pitch_peak(const ModgdVector& v, std::size_t lo,
                                          std::size_t hi,
                                          const std::vector<double>& rho,
                                          double rho_min,
                                          const PitchEngineConfig& cfg,
                                          double exclude_center = -1.0,
                                          double exclude_radius = 0.0) {
  ModgdVector masked = v;
  if (exclude_center >= 0.0) {
    // The comb remnant sits at the excluded lag and its multiples; a frame
    // periodic at L is also periodic at m*L, so those lags cannot witness a
    // distinct second source either.
    for (double center = exclude_center;
         center - exclude_radius <= static_cast<double>(hi);
         center += exclude_center) {
      const auto mask_lo =
          static_cast<std::ptrdiff_t>(std::floor(center - exclude_radius));
      const auto mask_hi =
          static_cast<std::ptrdiff_t>(std::ceil(center + exclude_radius));
      for (std::ptrdiff_t k = mask_lo; k <= mask_hi; ++k) {
        if (k >= 0 && k < static_cast<std::ptrdiff_t>(masked.values.size())) {
          masked.values[static_cast<std::size_t>(k)] = 0.0;
        }
      }
    }
  }
  const auto& a = masked.values;

  double window_max = a[lo];
  for (std::size_t k = lo; k <= hi; ++k) window_max = std::max(window_max, a[k]);

  std::vector<PeakCandidate> peaks;
  const std::size_t scan_lo = std::max<std::size_t>(lo, 1);
  const std::size_t scan_hi = std::min(hi, a.size() - 2);
  for (std::size_t k = scan_lo; k <= scan_hi; ++k) {
    if (a[k] > a[k - 1] && a[k] > a[k + 1] &&
        a[k] >= cfg.salience_rel * window_max &&
        max_near(rho, static_cast<double>(k), 2.0) >= rho_min) {
      peaks.push_back({k, a[k]});
    }
  }
  if (peaks.empty()) return std::nullopt;

  PeakCandidate best = peaks.front();
  for (const auto& p : peaks) {
    if (p.value > best.value) best = p;
  }
  // Sub-lag correction: the argmax can land on a multiple of the period
  // (the 2T/3T family lines); prefer a corroborated peak near an integer
  // divisor of the lag when it carries comparable weight.
  for (;;) {
    const PeakCandidate* better = nullptr;
    for (int divisor = 2; divisor <= 6; ++divisor) {
      const double sub = static_cast<double>(best.bin) / divisor;
      if (sub < static_cast<double>(lo)) break;
      for (const auto& p : peaks) {
        if (std::abs(static_cast<double>(p.bin) - sub) <= 3.0 &&
            p.value >= cfg.octave_ratio * best.value) {
          if (!better || p.value > better->value) better = &p;
        }
      }
      if (better) break;  // deepest subdivision comes from later iterations
    }
    if (!better) break;
    best = *better;
  }

  // Parabolic refinement around the winning bin.
  const std::size_t i = best.bin;
  const double ym = a[i - 1], y0 = a[i], yp = a[i + 1];
  const double denom = ym - 2.0 * y0 + yp;
  double delta = 0.0;
  if (denom != 0.0) delta = 0.5 * (ym - yp) / denom;
  delta = std::clamp(delta, -0.5, 0.5);
  PeakPick pick;
  pick.bin = static_cast<double>(i) + delta;
  pick.value = y0 - 0.25 * (ym - yp) * delta;
  if (exclude_center > 0.0) {
    const double nearest = std::round(pick.bin / exclude_center);
    if (nearest >= 1.0 &&
        std::abs(pick.bin - nearest * exclude_center) <= exclude_radius) {
      return std::nullopt;
    }
  }
  return pick;
}

// Highest local maximum of v within radius of center, parabolically
// refined. Bounds are clamped to [lo, hi] and the vector interior.
std::optional<PeakPick> refine_local_max(const std::vector<double>& v,
                                         double center, double radius,
                                         std::size_t lo, std::size_t hi) {
  const std::size_t from = static_cast<std::size_t>(std::max(
      {static_cast<double>(lo), 1.0, std::floor(center - radius)}));
  const std::size_t to = static_cast<std::size_t>(std::min(
      {static_cast<double>(hi), static_cast<double>(v.size() - 2),
       std::ceil(center + radius)}));
  std::size_t best = 0;
  for (std::size_t k = from; k <= to; ++k) {
    if (v[k] > v[k - 1] && v[k] > v[k + 1] && (best == 0 || v[k] > v[best])) {
      best = k;
    }
  }
  if (best == 0) return std::nullopt;
  const double ym = v[best - 1], y0 = v[best], yp = v[best + 1];
  const double denom = ym - 2.0 * y0 + yp;
  const double delta =
      denom != 0.0 ? std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5) : 0.0;
  return PeakPick{static_cast<double>(best) + delta,
                  y0 - 0.25 * (ym - yp) * delta};
}

FrameAnalysis analyze_frame_impl(std::span<const double> windowed_frame,
                                 int sample_rate, const PitchEngineConfig& cfg,
                                 bool run_second_pass) {
  if (windowed_frame.empty()) throw NumericError("analyze_frame: empty frame");
  cfg.modgd.validate();
  cfg.range.validate(sample_rate);

  FrameAnalysis fa;
  const auto& ops = kernels::active();
  fa.rms = std::sqrt(ops.sum_sq(windowed_frame.data(), windowed_frame.size()) /
                     static_cast<double>(windowed_frame.size()));

  const std::size_t n_fft =
      cfg.n_fft ? cfg.n_fft : default_n_fft(windowed_frame.size());
  fa.spectrum = power_spectrum(windowed_frame, n_fft, sample_rate);
  const auto env = cepstral_envelope(fa.spectrum, cfg.flatten_lifter);
  fa.flattened = flatten_spectrum(fa.spectrum, env, cfg.flatten_gamma);
  mask_to_source_band(fa.flattened, env, cfg.band_floor_rel);

  if (fa.rms < cfg.silence_rms) return fa;  // silent: no candidates

  fa.modgd_pass1 = modified_group_delay(fa.flattened.values, cfg.modgd);
  fa.modgd_pass1.lag_unit_seconds = 1.0 / sample_rate;
  const auto [lo, hi] = lag_window(cfg.range, sample_rate, fa.modgd_pass1.size());
  const auto rho = normalized_autocorr(windowed_frame, cfg.window, n_fft);

  const auto first = select_pitch_peak(fa.modgd_pass1, lo, hi, rho,
                                       cfg.voicing_min, cfg);
  if (!first) return fa;

  auto lag_to_f0 = [&](double lag) {
    return std::clamp(sample_rate / lag, cfg.range.f_min, cfg.range.f_max);
  };

  // Width of a lag line: the flattened spectrum only carries coherent
  // ripple over the masked source band.
  const double line_width =
      fa.flattened.band_limit > 0
          ? static_cast<double>(n_fft) / static_cast<double>(fa.flattened.band_limit)
          : 2.0;
  const bool narrow_band = line_width > 4.0;
  const double refine_radius = std::max(3.0, 0.3 * line_width);

  fa.pitches.lag_a = first->bin;
  fa.pitches.salience_a = first->value;
  if (narrow_band) {
    // Wide overlapping lag lines displace MODGD peaks; the normalized
    // autocorrelation peak at the same lag is unbiased as long as the
    // sources are separated, so it provides the location.
    if (const auto r = refine_local_max(rho, first->bin, refine_radius, lo, hi)) {
      fa.pitches.lag_a = r->bin;
    }
  }
  fa.pitches.f0_a = lag_to_f0(fa.pitches.lag_a);
  if (!run_second_pass) return fa;

  // Second pass on the comb-filtered residual. The comb remnant around the
  // first lag is as wide as the lag line itself.
  const FlattenedSpectrum residual =
      comb_annihilate(fa.flattened, *fa.pitches.f0_a, cfg.comb_alpha);
  fa.modgd_pass2 = modified_group_delay(residual.values, cfg.modgd);
  fa.modgd_pass2.lag_unit_seconds = 1.0 / sample_rate;

  const double exclusion = std::max(cfg.second_pass_exclusion_bins, line_width);
  const auto second = select_pitch_peak(fa.modgd_pass2, lo, hi, rho,
                                        cfg.voicing_min_second, cfg,
                                        fa.pitches.lag_a, exclusion);
  if (second) {
    // The residual detects the second source; location comes from the
    // cleanest surface available. Narrow band: the autocorrelation peak.
    // Wide band: the untouched first-pass vector (the comb can smear the
    // residual), guarded against the first source's remnant family.
    double lag_b = second->bin;
    double value_b = second->value;
    if (narrow_band) {
      if (const auto r = refine_local_max(rho, lag_b, refine_radius, lo, hi)) {
        lag_b = r->bin;
      }
    } else if (const auto r = refine_local_max(fa.modgd_pass1.values, lag_b, 3.0,
                                               lo, hi)) {
      const double nearest = std::round(r->bin / fa.pitches.lag_a);
      const bool in_remnant =
          nearest >= 1.0 &&
          std::abs(r->bin - nearest * fa.pitches.lag_a) <= exclusion;
      if (!in_remnant) {
        lag_b = r->bin;
        value_b = r->value;
      }
    }
    fa.pitches.lag_b = lag_b;
    // Both passes are reported on the first-pass scale so saliences are
    // comparable; the comb can amplify the surviving component.
    fa.pitches.salience_b = std::min(value_b, fa.pitches.salience_a);
    fa.pitches.f0_b = lag_to_f0(lag_b);
  }
  return fa;
}

}  // namespace

FrameAnalysis analyze_frame(std::span<const double> windowed_frame,
                            int sample_rate, const PitchEngineConfig& cfg) {
  return analyze_frame_impl(windowed_frame, sample_rate, cfg, true);
}

FramePitches estimate_frame_pitches(std::span<const double> windowed_frame,
                                    int sample_rate,
                                    const PitchEngineConfig& cfg) {
  return analyze_frame(windowed_frame, sample_rate, cfg).pitches;
}

std::optional<double> estimate_monopitch(std::span<const double> windowed_frame,
                                         int sample_rate,
                                         const PitchEngineConfig& cfg) {
  return analyze_frame_impl(windowed_frame, sample_rate, cfg, false).pitches.f0_a;
}

}  // namespace modgd
