// src/metrics.cpp
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

#include "modgd/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace modgd {

namespace {

std::size_t common_frames(std::size_t a, std::size_t b) {
  return std::min(a, b);
}

bool is_hit(double det, double ref, double pct) {
  return det > 0.0 && std::abs(det - ref) / ref < pct / 100.0;
}

}  // namespace

double accuracy(const std::vector<double>& det, const std::vector<double>& ref,
                double pct_threshold) {
  const std::size_t n = common_frames(det.size(), ref.size());
  std::size_t voiced = 0, hits = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (!(ref[t] > 0.0)) continue;
    ++voiced;
    if (is_hit(det[t], ref[t], pct_threshold)) ++hits;
  }
  if (voiced == 0) throw NumericError("empty evaluation set");
  return 100.0 * static_cast<double>(hits) / static_cast<double>(voiced);
}

FineStats fine_pitch_stats(const std::vector<double>& det,
                           const std::vector<double>& ref,
                           double pct_threshold) {
  const std::size_t n = common_frames(det.size(), ref.size());
  FineStats stats;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    if (!(ref[t] > 0.0) || !is_hit(det[t], ref[t], pct_threshold)) continue;
    const double err = ref[t] - det[t];
    sum += err;
    sum_sq += err * err;
    ++stats.n_correct;
  }
  if (stats.n_correct == 0) {
    throw NumericError("fine_pitch_stats: no correct frames");
  }
  const double inv_n = 1.0 / static_cast<double>(stats.n_correct);
  stats.mean_error = sum * inv_n;
  const double radicand = sum_sq * inv_n - stats.mean_error * stats.mean_error;
  stats.sigma_e = std::sqrt(std::max(radicand, 0.0));
  return stats;
}

EvalReport score_single(const std::vector<double>& det,
                        const std::vector<double>& ref) {
  EvalReport report;
  report.accuracy_10 = accuracy(det, ref, 10.0);
  report.accuracy_20 = accuracy(det, ref, 20.0);
  const std::size_t n = common_frames(det.size(), ref.size());
  for (std::size_t t = 0; t < n; ++t) {
    if (ref[t] > 0.0) ++report.n_voiced;
  }
  try {
    const FineStats fine = fine_pitch_stats(det, ref, 10.0);
    report.mean_fine_error = fine.mean_error;
    report.e_fs = fine.sigma_e;
    report.n_correct_10 = fine.n_correct;
  } catch (const NumericError&) {
    // No correct frames: fine statistics stay at zero.
  }
  return report;
}

namespace {

// Assignment score: mean |det - ref| over reference-voiced frames, with a
// detected-unvoiced frame contributing its full reference value.
double assignment_error(const std::vector<double>& det,
                        const std::vector<double>& ref) {
  const std::size_t n = common_frames(det.size(), ref.size());
  double sum = 0.0;
  std::size_t voiced = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (!(ref[t] > 0.0)) continue;
    sum += std::abs(det[t] - ref[t]);
    ++voiced;
  }
  return voiced ? sum / static_cast<double>(voiced) : 0.0;
}

}  // namespace

std::array<EvalReport, 2> score_pair(const PitchTrack& det_a,
                                     const PitchTrack& det_b,
                                     const std::vector<double>& ref_1,
                                     const std::vector<double>& ref_2) {
  const double identity_cost = assignment_error(det_a.f0, ref_1) +
                               assignment_error(det_b.f0, ref_2);
  const double swapped_cost = assignment_error(det_b.f0, ref_1) +
                              assignment_error(det_a.f0, ref_2);
  bool swap = swapped_cost < identity_cost;
  if (swapped_cost == identity_cost) {
    // Tie: take a canonical order so the result does not depend on the
    // order the detected tracks were passed in.
    swap = std::lexicographical_compare(det_b.f0.begin(), det_b.f0.end(),
                                        det_a.f0.begin(), det_a.f0.end());
  }
  const auto& d1 = swap ? det_b.f0 : det_a.f0;
  const auto& d2 = swap ? det_a.f0 : det_b.f0;
  return {score_single(d1, ref_1), score_single(d2, ref_2)};
}

}  // namespace modgd
