// src/gmm.cpp
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

#include "modgd/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "modgd/kernels.hpp"
#include "modgd/rng.hpp"

namespace modgd {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// log N(x; mean, diag var) with precomputed inverse variances and the
// constant term  -0.5 * (d*log(2pi) + sum log var).
struct ComponentScorer {
  std::vector<double> inv_var;
  double log_const = 0.0;

  void prepare(const std::vector<double>& var) {
    inv_var.resize(var.size());
    double log_det = 0.0;
    for (std::size_t d = 0; d < var.size(); ++d) {
      inv_var[d] = 1.0 / var[d];
      log_det += std::log(var[d]);
    }
    log_const = -0.5 * (static_cast<double>(var.size()) * kLog2Pi + log_det);
  }

  double score(const std::vector<double>& x, const std::vector<double>& mean) const {
    const double maha = kernels::active().weighted_sq_dist(
        x.data(), mean.data(), inv_var.data(), x.size());
    return log_const - 0.5 * maha;
  }
};

double log_sum_exp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return m + std::log(acc);
}

std::vector<ComponentScorer> make_scorers(const GmmModel& model) {
  std::vector<ComponentScorer> scorers(model.n_components());
  for (std::size_t c = 0; c < model.n_components(); ++c) {
    scorers[c].prepare(model.variances[c]);
  }
  return scorers;
}

std::vector<double> component_log_posts(const GmmModel& model,
                                        const std::vector<ComponentScorer>& scorers,
                                        const std::vector<double>& x) {
  std::vector<double> lp(model.n_components());
  for (std::size_t c = 0; c < model.n_components(); ++c) {
    lp[c] = std::log(model.weights[c]) + scorers[c].score(x, model.means[c]);
  }
  return lp;
}

}  // namespace

void GmmModel::validate() const {
  if (weights.empty() || means.size() != weights.size() ||
      variances.size() != weights.size()) {
    throw NumericError("gmm: inconsistent model shape");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw NumericError("gmm: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw NumericError("gmm: weights must sum to 1");
  for (const auto& var : variances) {
    for (double v : var) {
      if (!(v > 0.0)) throw NumericError("gmm: variances must be positive");
    }
  }
}

double GmmModel::log_likelihood(const std::vector<double>& x) const {
  const auto scorers = make_scorers(*this);
  return log_sum_exp(component_log_posts(*this, scorers, x));
}

double GmmModel::total_log_likelihood(
    const std::vector<std::vector<double>>& xs) const {
  const auto scorers = make_scorers(*this);
  double total = 0.0;
  for (const auto& x : xs) {
    total += log_sum_exp(component_log_posts(*this, scorers, x));
  }
  return total;
}

namespace {

// Plain Lloyd iterations from seeded random starting points; empty clusters
// are reseeded to random vectors.
std::vector<std::size_t> kmeans_assign(const std::vector<std::vector<double>>& xs,
                                       std::vector<std::vector<double>>& centers,
                                       Rng& rng) {
  const auto& ops = kernels::active();
  const std::size_t k = centers.size();
  std::vector<std::size_t> assign(xs.size(), 0);
  for (int iter = 0; iter < 10; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = ops.sum_sq_diff(xs[i].data(), centers[c].data(),
                                         xs[i].size());
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    std::vector<std::size_t> counts(k, 0);
    std::vector<std::vector<double>> sums(k,
                                          std::vector<double>(xs[0].size(), 0.0));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ++counts[assign[i]];
      for (std::size_t d = 0; d < xs[i].size(); ++d) sums[assign[i]][d] += xs[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        centers[c] = xs[rng.integer(xs.size())];
        changed = true;
        continue;
      }
      for (std::size_t d = 0; d < sums[c].size(); ++d) {
        centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
      }
    }
    if (!changed) break;
  }
  return assign;
}

}  // namespace

GmmTrainResult gmm_train(const std::vector<std::vector<double>>& features,
                         const GmmTrainOptions& opts, int class_label) {
  if (features.size() < opts.n_components) {
    throw NumericError("gmm_train: fewer vectors than components");
  }
  const std::size_t n = features.size();
  const std::size_t dim = features.front().size();
  const std::size_t k = opts.n_components;
  for (const auto& x : features) {
    if (x.size() != dim) throw NumericError("gmm_train: inconsistent dimensions");
  }

  // Global per-dimension variance sets the floor.
  std::vector<double> global_mean(dim, 0.0), global_var(dim, 0.0);
  for (const auto& x : features) {
    for (std::size_t d = 0; d < dim; ++d) global_mean[d] += x[d];
  }
  for (std::size_t d = 0; d < dim; ++d) global_mean[d] /= static_cast<double>(n);
  for (const auto& x : features) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = x[d] - global_mean[d];
      global_var[d] += diff * diff;
    }
  }
  std::vector<double> var_floor(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    global_var[d] /= static_cast<double>(n);
    var_floor[d] = std::max(opts.variance_floor_factor * global_var[d], 1e-12);
  }

  // k-means initialization from distinct random picks.
  Rng rng(opts.seed);
  std::vector<std::size_t> picks;
  while (picks.size() < k) {
    const std::size_t cand = rng.integer(n);
    if (std::find(picks.begin(), picks.end(), cand) == picks.end()) {
      picks.push_back(cand);
    }
  }
  std::vector<std::vector<double>> centers;
  centers.reserve(k);
  for (std::size_t c : picks) centers.push_back(features[c]);
  const auto assign = kmeans_assign(features, centers, rng);

  GmmModel model;
  model.class_label = class_label;
  model.weights.assign(k, 0.0);
  model.means = centers;
  model.variances.assign(k, std::vector<double>(dim, 0.0));
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) ++counts[assign[i]];
  for (std::size_t c = 0; c < k; ++c) {
    model.weights[c] =
        std::max(static_cast<double>(counts[c]), 1.0) / static_cast<double>(n);
  }
  double weight_total = 0.0;
  for (double w : model.weights) weight_total += w;
  for (double& w : model.weights) w /= weight_total;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = assign[i];
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = features[i][d] - model.means[c][d];
      model.variances[c][d] += diff * diff;
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double denom = std::max<double>(static_cast<double>(counts[c]), 1.0);
      model.variances[c][d] =
          std::max(model.variances[c][d] / denom, var_floor[d]);
    }
  }

  // EM on diagonal Gaussians.
  GmmTrainResult result;
  double prev_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    const auto scorers = make_scorers(model);

    std::vector<double> resp_sum(k, 0.0);
    std::vector<std::vector<double>> mean_acc(k, std::vector<double>(dim, 0.0));
    std::vector<std::vector<double>> var_acc(k, std::vector<double>(dim, 0.0));
    double ll = 0.0;
    for (const auto& x : features) {
      auto lp = component_log_posts(model, scorers, x);
      const double frame_ll = log_sum_exp(lp);
      ll += frame_ll;
      for (std::size_t c = 0; c < k; ++c) {
        const double r = std::exp(lp[c] - frame_ll);
        resp_sum[c] += r;
        for (std::size_t d = 0; d < dim; ++d) {
          mean_acc[c][d] += r * x[d];
          var_acc[c][d] += r * x[d] * x[d];
        }
      }
    }
    result.log_likelihood_history.push_back(ll);

    // M step.
    for (std::size_t c = 0; c < k; ++c) {
      const double denom = std::max(resp_sum[c], 1e-10);
      model.weights[c] = resp_sum[c] / static_cast<double>(n);
      for (std::size_t d = 0; d < dim; ++d) {
        const double mu = mean_acc[c][d] / denom;
        model.means[c][d] = mu;
        model.variances[c][d] =
            std::max(var_acc[c][d] / denom - mu * mu, var_floor[d]);
      }
    }
    double wsum = 0.0;
    for (double& w : model.weights) {
      w = std::max(w, 1e-10);
      wsum += w;
    }
    for (double& w : model.weights) w /= wsum;

    if (iter > 0 && std::abs(ll - prev_ll) < opts.rel_tol * std::abs(prev_ll)) {
      break;
    }
    prev_ll = ll;
  }

  result.model = std::move(model);
  result.model.validate();
  return result;
}

std::vector<std::vector<double>> gmm_responsibilities(
    const GmmModel& model, const std::vector<std::vector<double>>& features) {
  const auto scorers = make_scorers(model);
  std::vector<std::vector<double>> resp;
  resp.reserve(features.size());
  for (const auto& x : features) {
    auto lp = component_log_posts(model, scorers, x);
    const double lse = log_sum_exp(lp);
    std::vector<double> r(lp.size());
    for (std::size_t c = 0; c < lp.size(); ++c) r[c] = std::exp(lp[c] - lse);
    resp.push_back(std::move(r));
  }
  return resp;
}

int count_speakers(const std::vector<std::vector<double>>& features,
                   const std::vector<GmmModel>& models) {
  if (features.empty()) throw NumericError("count_speakers: empty feature sequence");
  if (models.empty()) throw NumericError("count_speakers: no models");

  int best_label = models.front().class_label;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (const auto& model : models) {
    const double ll = model.total_log_likelihood(features);
    const bool better =
        ll > best_ll || (ll == best_ll && model.class_label < best_label);
    if (better) {
      best_ll = ll;
      best_label = model.class_label;
    }
  }
  return best_label;
}

// ---------------------------------------------------------------------------
// Text serialization: versioned, whitespace separated, %.17g round-trips.

void save_models(const std::vector<GmmModel>& models, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out << "smccgmm 1\n";
  out << "classes " << models.size() << "\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (const auto& m : models) {
    m.validate();
    out << "class " << m.class_label << " components " << m.n_components()
        << " dim " << m.dim() << "\n";
    out << "weights";
    for (double w : m.weights) {
      out << ' ';
      put(w);
    }
    out << "\n";
    for (std::size_t c = 0; c < m.n_components(); ++c) {
      out << "mean " << c;
      for (double v : m.means[c]) {
        out << ' ';
        put(v);
      }
      out << "\nvar " << c;
      for (double v : m.variances[c]) {
        out << ' ';
        put(v);
      }
      out << "\n";
    }
  }
  if (!out) throw IoError("failed writing model file: " + path);
}

std::vector<GmmModel> load_models(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "smccgmm" || version != 1) {
    throw IoError("unrecognized model file format: " + path);
  }
  std::size_t n_classes = 0;
  in >> tag >> n_classes;
  if (tag != "classes") throw IoError("malformed model file: " + path);

  std::vector<GmmModel> models;
  for (std::size_t m = 0; m < n_classes; ++m) {
    GmmModel model;
    std::size_t comps = 0, dim = 0;
    std::string kw;
    in >> kw >> model.class_label;
    if (kw != "class") throw IoError("malformed model file: " + path);
    in >> kw >> comps;
    if (kw != "components") throw IoError("malformed model file: " + path);
    in >> kw >> dim;
    if (kw != "dim") throw IoError("malformed model file: " + path);
    in >> kw;
    if (kw != "weights") throw IoError("malformed model file: " + path);
    model.weights.resize(comps);
    for (auto& w : model.weights) in >> w;
    model.means.assign(comps, std::vector<double>(dim));
    model.variances.assign(comps, std::vector<double>(dim));
    for (std::size_t c = 0; c < comps; ++c) {
      std::size_t idx = 0;
      in >> kw >> idx;
      if (kw != "mean" || idx != c) throw IoError("malformed model file: " + path);
      for (auto& v : model.means[c]) in >> v;
      in >> kw >> idx;
      if (kw != "var" || idx != c) throw IoError("malformed model file: " + path);
      for (auto& v : model.variances[c]) in >> v;
    }
    if (!in) throw IoError("truncated model file: " + path);
    model.validate();
    models.push_back(std::move(model));
  }
  return models;
}

}  // namespace modgd
