// tests/test_metrics.cpp
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
#include <vector>

#include "doctest.h"
#include "modgd/metrics.hpp"
#include "modgd/rng.hpp"

using namespace modgd;

TEST_CASE("accuracy: exact, near and gross deviations") {
  std::vector<double> ref(10, 100.0);
  std::vector<double> det(10, 100.0);
  CHECK(accuracy(det, ref, 10.0) == 100.0);
  CHECK(accuracy(det, ref, 20.0) == 100.0);

  det.assign(10, 109.0);  // 9% off: hit at both thresholds
  CHECK(accuracy(det, ref, 10.0) == 100.0);
  CHECK(accuracy(det, ref, 20.0) == 100.0);

  det.assign(10, 115.0);  // 15% off: miss at 10, hit at 20
  CHECK(accuracy(det, ref, 10.0) == 0.0);
  CHECK(accuracy(det, ref, 20.0) == 100.0);

  // Detected-unvoiced on a voiced reference counts as a miss.
  det.assign(10, 0.0);
  CHECK(accuracy(det, ref, 20.0) == 0.0);

  std::vector<double> unvoiced(10, 0.0);
  CHECK_THROWS_AS(accuracy(det, unvoiced, 10.0), NumericError);
}

TEST_CASE("accuracy is monotone in the threshold") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> ref(50), det(50);
    for (std::size_t t = 0; t < ref.size(); ++t) {
      ref[t] = rng.uniform() < 0.2 ? 0.0 : rng.uniform(80.0, 300.0);
      det[t] = rng.uniform() < 0.2 ? 0.0 : rng.uniform(80.0, 300.0);
    }
    bool any_voiced = false;
    for (double r : ref) any_voiced |= r > 0.0;
    if (!any_voiced) continue;
    CHECK(accuracy(det, ref, 10.0) <= accuracy(det, ref, 20.0));
  }
}

TEST_CASE("fine_pitch_stats: trivial instances") {
  std::vector<double> ref(5, 100.0);
  std::vector<double> det(5, 100.0);
  auto stats = fine_pitch_stats(det, ref);
  CHECK(stats.mean_error == 0.0);
  CHECK(stats.sigma_e == 0.0);

  det.assign(5, 98.0);  // constant offset d = 2
  stats = fine_pitch_stats(det, ref);
  CHECK(stats.mean_error == doctest::Approx(2.0));
  CHECK(stats.sigma_e == doctest::Approx(0.0));

  ref = {100.0, 100.0};
  det = {99.0, 101.0};
  stats = fine_pitch_stats(det, ref);
  CHECK(stats.mean_error == doctest::Approx(0.0));
  CHECK(stats.sigma_e == doctest::Approx(1.0));

  det = {0.0, 0.0};
  CHECK_THROWS_AS(fine_pitch_stats(det, ref), NumericError);
}

TEST_CASE("sigma_e equals the two-pass population deviation") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> ref(80), det(80);
    for (std::size_t t = 0; t < ref.size(); ++t) {
      ref[t] = rng.uniform(100.0, 250.0);
      det[t] = ref[t] + rng.uniform(-5.0, 5.0);
    }
    const auto stats = fine_pitch_stats(det, ref, 10.0);

    // Oracle: two-pass mean and deviation over the same correct set.
    std::vector<double> errors;
    for (std::size_t t = 0; t < ref.size(); ++t) {
      if (det[t] > 0.0 && std::abs(det[t] - ref[t]) / ref[t] < 0.1) {
        errors.push_back(ref[t] - det[t]);
      }
    }
    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= static_cast<double>(errors.size());
    double var = 0.0;
    for (double e : errors) var += (e - mean) * (e - mean);
    var /= static_cast<double>(errors.size());
    CHECK(std::abs(stats.sigma_e - std::sqrt(var)) <= 1e-9);
  }
}

TEST_CASE("score_pair: permutation handling") {
  PitchTrack a, b;
  a.f0.assign(30, 210.0);
  b.f0.assign(30, 120.0);
  std::vector<double> ref1(30, 120.0), ref2(30, 210.0);

  const auto r1 = score_pair(a, b, ref1, ref2);
  CHECK(r1[0].accuracy_10 == 100.0);
  CHECK(r1[1].accuracy_10 == 100.0);

  // Swapping the detected tracks leaves the report unchanged.
  const auto r2 = score_pair(b, a, ref1, ref2);
  CHECK(r2[0].accuracy_10 == r1[0].accuracy_10);
  CHECK(r2[1].accuracy_10 == r1[1].accuracy_10);
  CHECK(r2[0].e_fs == r1[0].e_fs);
  CHECK(r2[1].e_fs == r1[1].e_fs);
}

TEST_CASE("score_pair picks the brute-force best assignment") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    PitchTrack a, b;
    std::vector<double> ref1(20), ref2(20);
    a.f0.resize(20);
    b.f0.resize(20);
    for (std::size_t t = 0; t < 20; ++t) {
      ref1[t] = rng.uniform(100.0, 150.0);
      ref2[t] = rng.uniform(180.0, 240.0);
      a.f0[t] = rng.uniform(100.0, 240.0);
      b.f0[t] = rng.uniform(100.0, 240.0);
    }

    auto err = [](const std::vector<double>& det, const std::vector<double>& ref) {
      double s = 0.0;
      for (std::size_t t = 0; t < ref.size(); ++t) s += std::abs(det[t] - ref[t]);
      return s / static_cast<double>(ref.size());
    };
    const bool brute_swap =
        err(b.f0, ref1) + err(a.f0, ref2) < err(a.f0, ref1) + err(b.f0, ref2);

    const auto reports = score_pair(a, b, ref1, ref2);
    const auto expected_first = brute_swap ? score_single(b.f0, ref1)
                                           : score_single(a.f0, ref1);
    CHECK(reports[0].accuracy_20 == expected_first.accuracy_20);
    CHECK(reports[0].e_fs == expected_first.e_fs);
  }
}
