// include/modgd/groupdelay.hpp
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
// Group delay and modified group delay of real sequences, plus peak
// picking in a lag window. When the input is a flattened power spectrum
// the abscissa of the output is time lag and a peak at bin L corresponds
// to a pitch period of L samples.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "modgd/types.hpp"

namespace modgd {

struct ModgdConfig {
  double alpha = 0.9;           // post-hoc magnitude compression exponent
  double gamma = 0.4;           // denominator exponent
  std::size_t lifter_len = 30;  // cepstral smoothing of |X| for the denominator

  void validate() const {
    if (!(alpha > 0.0) || alpha > 1.0) throw NumericError("modgd alpha must lie in (0, 1]");
    if (!(gamma > 0.0) || gamma > 1.0) throw NumericError("modgd gamma must lie in (0, 1]");
    if (lifter_len < 1) throw NumericError("modgd lifter_len must be >= 1");
  }
};

struct ModgdVector {
  std::vector<double> values;     // one value per lag/frequency bin
  double lag_unit_seconds = 0.0;  // seconds per bin; 0 when abstract

  std::size_t size() const { return values.size(); }
};

struct PeakPick {
  double bin = 0.0;    // fractional bin after parabolic refinement
  double value = 0.0;  // interpolated peak height
};

// Relative floor on the denominator before division.
inline constexpr double kGdDenomFloorRel = 1e-12;

// tau[k] = (Xr*Yr + Xi*Yi)[k] / |X[k]|^2 where Y transforms n*x[n].
// Transform size is the next power of two >= x.size(); bins whose |X|^2
// falls below the relative floor are set to zero.
std::vector<double> group_delay(std::span<const double> x);

// Same numerator with |S|^{2*gamma} in the denominator, S being the
// cepstrally smoothed |X|, followed by sign(t)*|t|^alpha compression.
ModgdVector modified_group_delay(std::span<const double> x, const ModgdConfig& cfg);

// Highest strict local maximum in [lag_lo, lag_hi], refined by 3-point
// parabolic interpolation. nullopt when the range has no interior peak.
std::optional<PeakPick> pick_peak(const ModgdVector& v, std::size_t lag_lo,
                                  std::size_t lag_hi);

}  // namespace modgd
