// src/tracker.cpp
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

#include "modgd/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modgd {

std::pair<PitchTrack, PitchTrack> group_high_low(
    const std::vector<FramePitches>& per_frame) {
  PitchTrack high, low;
  high.label = TrackLabel::high;
  low.label = TrackLabel::low;
  high.f0.assign(per_frame.size(), 0.0);
  low.f0.assign(per_frame.size(), 0.0);

  double last_high = 0.0, last_low = 0.0;
  for (std::size_t t = 0; t < per_frame.size(); ++t) {
    const auto& fp = per_frame[t];
    if (fp.f0_a && fp.f0_b) {
      high.f0[t] = std::max(*fp.f0_a, *fp.f0_b);
      low.f0[t] = std::min(*fp.f0_a, *fp.f0_b);
      last_high = high.f0[t];
      last_low = low.f0[t];
    } else if (fp.f0_a || fp.f0_b) {
      const double f0 = fp.f0_a ? *fp.f0_a : *fp.f0_b;
      bool to_high;
      if (last_high > 0.0 && last_low > 0.0) {
        to_high = std::abs(f0 - last_high) <= std::abs(f0 - last_low);
      } else if (last_high > 0.0 || last_low > 0.0) {
        to_high = last_high > 0.0;
      } else {
        to_high = false;  // no history yet: default to the low track
      }
      if (to_high) {
        high.f0[t] = f0;
        last_high = f0;
      } else {
        low.f0[t] = f0;
        last_low = f0;
      }
    }
  }
  return {std::move(high), std::move(low)};
}

double transition_cost(double location, double prev_location) {
  return std::abs(location - prev_location);
}

std::vector<double> dp_group(const std::vector<std::vector<double>>& candidates) {
  if (candidates.empty()) return {};
  for (const auto& frame : candidates) {
    if (frame.empty()) throw NumericError("candidate gap in DP block");
  }

  const std::size_t m = candidates.size();
  std::vector<std::vector<double>> cost(m);
  std::vector<std::vector<std::size_t>> back(m);
  cost[0].assign(candidates[0].size(), 0.0);
  back[0].assign(candidates[0].size(), 0);

  for (std::size_t j = 1; j < m; ++j) {
    cost[j].resize(candidates[j].size());
    back[j].resize(candidates[j].size());
    for (std::size_t c = 0; c < candidates[j].size(); ++c) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_prev = 0;
      for (std::size_t p = 0; p < candidates[j - 1].size(); ++p) {
        const double total =
            cost[j - 1][p] + transition_cost(candidates[j][c], candidates[j - 1][p]);
        const bool better =
            total < best ||
            (total == best && candidates[j - 1][p] < candidates[j - 1][best_prev]);
        if (better) {
          best = total;
          best_prev = p;
        }
      }
      cost[j][c] = best;
      back[j][c] = best_prev;
    }
  }

  std::size_t pick = 0;
  for (std::size_t c = 1; c < cost[m - 1].size(); ++c) {
    if (cost[m - 1][c] < cost[m - 1][pick] ||
        (cost[m - 1][c] == cost[m - 1][pick] &&
         candidates[m - 1][c] < candidates[m - 1][pick])) {
      pick = c;
    }
  }

  std::vector<double> path(m);
  for (std::size_t j = m; j-- > 0;) {
    path[j] = candidates[j][pick];
    pick = back[j][pick];
  }
  return path;
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw NumericError("percentile of empty sample");
  std::sort(values.begin(), values.end());
  const double rank =
      std::clamp(pct, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto i = static_cast<std::size_t>(rank);
  const double frac = rank - static_cast<double>(i);
  if (i + 1 >= values.size()) return values.back();
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

std::vector<RegionLabel> detect_single_or_silent(
    const std::vector<double>& flux, const std::vector<double>& energy,
    const std::vector<int>& n_candidates, const PostprocessConfig& cfg,
    double energy_floor) {
  if (flux.size() != energy.size() || flux.size() != n_candidates.size()) {
    throw NumericError("detect_single_or_silent: length mismatch");
  }
  std::vector<RegionLabel> labels(flux.size(), RegionLabel::none);
  if (flux.empty()) return labels;

  // Soft threshold from the distribution of flux over non-silent frames.
  std::vector<double> active_flux;
  for (std::size_t t = 0; t < flux.size(); ++t) {
    if (energy[t] >= energy_floor) active_flux.push_back(flux[t]);
  }
  const double flux_thresh =
      active_flux.empty() ? 0.0 : percentile(active_flux, cfg.flux_percentile);

  for (std::size_t t = 0; t < flux.size(); ++t) {
    if (energy[t] < energy_floor) {
      labels[t] = RegionLabel::none;
    } else if (flux[t] <= flux_thresh && n_candidates[t] == 1) {
      labels[t] = RegionLabel::one;
    } else {
      labels[t] = RegionLabel::two;
    }
  }
  return labels;
}

namespace {

// Fill frames (a, b) exclusive by the line through (a, f[a]) and (b, f[b]).
void lerp_fill(std::vector<double>& f, std::size_t a, std::size_t b) {
  const double span = static_cast<double>(b - a);
  for (std::size_t t = a + 1; t < b; ++t) {
    const double w = static_cast<double>(t - a) / span;
    f[t] = f[a] * (1.0 - w) + f[b] * w;
  }
}

}  // namespace

PitchTrack remove_strays(const PitchTrack& track, const PostprocessConfig& cfg,
                         double hop_ms) {
  if (!(cfg.rho_hz > 0.0) || !(cfg.max_gap_ms > 0.0)) {
    throw NumericError("postprocess config requires rho > 0 and max_gap_ms > 0");
  }
  PitchTrack out = track;
  auto& f = out.f0;
  const std::size_t n = f.size();

  // Short unvoiced gaps between voiced anchors first; stray repair then
  // sees fully voiced runs (and a second application changes nothing).
  std::size_t prev_voiced = n;
  for (std::size_t t = 0; t < n; ++t) {
    if (!(f[t] > 0.0)) continue;
    if (prev_voiced < n && t - prev_voiced > 1) {
      const double gap_ms = static_cast<double>(t - prev_voiced - 1) * hop_ms;
      if (gap_ms < cfg.max_gap_ms) lerp_fill(f, prev_voiced, t);
    }
    prev_voiced = t;
  }

  // Stray values: a jump beyond rho that comes back to the pre-jump value
  // within two frames is interpolated away; longer excursions are treated
  // as genuine pitch movement.
  for (std::size_t t = 1; t < n; ++t) {
    if (!(f[t] > 0.0) || !(f[t - 1] > 0.0)) continue;
    if (std::abs(f[t] - f[t - 1]) <= cfg.rho_hz) continue;
    std::size_t ret = 0;
    for (std::size_t k = t + 1; k <= t + 2 && k < n; ++k) {
      if (f[k] > 0.0 && std::abs(f[k] - f[t - 1]) <= cfg.rho_hz) {
        ret = k;
        break;
      }
    }
    if (ret > 0) {
      lerp_fill(f, t - 1, ret);
      t = ret;  // resume after the repaired run
    }
  }
  return out;
}

}  // namespace modgd
