// include/modgd/gmm.hpp
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
// Diagonal-covariance Gaussian mixtures: k-means-seeded EM training,
// likelihood evaluation, speaker-count classification and a text model
// format.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "modgd/types.hpp"

namespace modgd {

struct GmmModel {
  int class_label = 0;  // speaker count this model represents
  std::vector<double> weights;
  std::vector<std::vector<double>> means;      // [component][dim]
  std::vector<std::vector<double>> variances;  // diagonal, floored positive

  std::size_t n_components() const { return weights.size(); }
  std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
  void validate() const;

  // Log density of one vector under the mixture.
  double log_likelihood(const std::vector<double>& x) const;
  // Summed log density over a sequence of vectors.
  double total_log_likelihood(const std::vector<std::vector<double>>& xs) const;
};

struct GmmTrainOptions {
  std::size_t n_components = 12;
  std::size_t max_iter = 50;
  double rel_tol = 1e-6;  // stop when the relative gain drops below this
  std::uint64_t seed = 0;
  double variance_floor_factor = 1e-6;  // of the global per-dim variance
};

struct GmmTrainResult {
  GmmModel model;
  std::vector<double> log_likelihood_history;  // one entry per EM iteration
};

GmmTrainResult gmm_train(const std::vector<std::vector<double>>& features,
                         const GmmTrainOptions& opts, int class_label = 0);

// Per-frame responsibilities of each component; rows sum to one.
std::vector<std::vector<double>> gmm_responsibilities(
    const GmmModel& model, const std::vector<std::vector<double>>& features);

// Highest accumulated likelihood wins; ties go to the smaller class label.
int count_speakers(const std::vector<std::vector<double>>& features,
                   const std::vector<GmmModel>& models);

void save_models(const std::vector<GmmModel>& models, const std::string& path);
std::vector<GmmModel> load_models(const std::string& path);

}  // namespace modgd
