// src/groupdelay.cpp
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

#include "modgd/groupdelay.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "modgd/fft.hpp"
#include "modgd/kernels.hpp"
#include "modgd/spectral.hpp"

namespace modgd {

namespace {

struct GdParts {
  std::vector<std::complex<double>> x_spec;  // transform of x[n]
  std::vector<std::complex<double>> y_spec;  // transform of n*x[n]
  std::vector<double> numerator;             // Xr*Yr + Xi*Yi
};

GdParts gd_parts(std::span<const double> x) {
  if (x.empty()) throw NumericError("group_delay: empty input");
  const std::size_t n_fft = fft::next_pow2(x.size());

  std::vector<double> ramped(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    ramped[n] = static_cast<double>(n) * x[n];
  }

  GdParts parts;
  parts.x_spec = fft::real_half_spectrum(x, n_fft);
  parts.y_spec = fft::real_half_spectrum(ramped, n_fft);
  parts.numerator.resize(parts.x_spec.size());
  kernels::active().complex_dot_real(parts.x_spec.data(), parts.y_spec.data(),
                                     parts.numerator.data(),
                                     parts.numerator.size());
  return parts;
}

// Divide the numerator by a floored denominator; bins under the floor get 0.
std::vector<double> floored_divide(const std::vector<double>& num,
                                   const std::vector<double>& den) {
  double den_max = 0.0;
  for (double d : den) den_max = std::max(den_max, d);
  std::vector<double> out(num.size(), 0.0);
  if (den_max <= 0.0) return out;
  const double floor_v = kGdDenomFloorRel * den_max;
  for (std::size_t k = 0; k < num.size(); ++k) {
    out[k] = den[k] >= floor_v ? num[k] / den[k] : 0.0;
  }
  return out;
}

}  // namespace

std::vector<double> group_delay(std::span<const double> x) {
  GdParts parts = gd_parts(x);
  std::vector<double> power(parts.x_spec.size());
  kernels::active().complex_dot_real(parts.x_spec.data(), parts.x_spec.data(),
                                     power.data(), power.size());
  return floored_divide(parts.numerator, power);
}

ModgdVector modified_group_delay(std::span<const double> x,
                                 const ModgdConfig& cfg) {
  cfg.validate();
  GdParts parts = gd_parts(x);

  std::vector<double> magnitude(parts.x_spec.size());
  for (std::size_t k = 0; k < magnitude.size(); ++k) {
    magnitude[k] = std::abs(parts.x_spec[k]);
  }
  const std::vector<double> smoothed = cepstral_envelope(magnitude, cfg.lifter_len);

  std::vector<double> den(smoothed.size());
  if (cfg.gamma == 1.0) {
    for (std::size_t k = 0; k < den.size(); ++k) den[k] = smoothed[k] * smoothed[k];
  } else {
    for (std::size_t k = 0; k < den.size(); ++k) {
      den[k] = std::pow(smoothed[k], 2.0 * cfg.gamma);
    }
  }

  ModgdVector out;
  out.values = floored_divide(parts.numerator, den);
  if (cfg.alpha != 1.0) {
    for (double& v : out.values) {
      v = v >= 0.0 ? std::pow(v, cfg.alpha) : -std::pow(-v, cfg.alpha);
    }
  }
  return out;
}

std::optional<PeakPick> pick_peak(const ModgdVector& v, std::size_t lag_lo,
                                  std::size_t lag_hi) {
  if (lag_lo >= lag_hi || lag_hi >= v.values.size()) {
    throw NumericError("pick_peak: invalid lag range");
  }
  const auto& a = v.values;
  std::optional<std::size_t> best;
  // Strict local maxima only; neighbours may sit just outside the range.
  const std::size_t lo = std::max<std::size_t>(lag_lo, 1);
  const std::size_t hi = std::min(lag_hi, a.size() - 2);
  for (std::size_t i = lo; i <= hi; ++i) {
    if (a[i] > a[i - 1] && a[i] > a[i + 1]) {
      if (!best || a[i] > a[*best]) best = i;
    }
  }
  if (!best) return std::nullopt;

  const std::size_t i = *best;
  const double ym = a[i - 1], y0 = a[i], yp = a[i + 1];
  const double denom = ym - 2.0 * y0 + yp;
  double delta = 0.0;
  if (denom != 0.0) delta = 0.5 * (ym - yp) / denom;
  delta = std::clamp(delta, -0.5, 0.5);
  PeakPick pick;
  pick.bin = static_cast<double>(i) + delta;
  pick.value = y0 - 0.25 * (ym - yp) * delta;
  return pick;
}

}  // namespace modgd
