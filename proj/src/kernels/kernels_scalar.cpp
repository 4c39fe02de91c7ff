// src/kernels/kernels_scalar.cpp
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
// Reference kernels. These define the semantics the SIMD variants are
// tested against.

#include <complex>
#include <cstddef>

#include "modgd/kernels.hpp"

namespace modgd::kernels {

namespace {

void multiply_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_scalar(const double* x, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * c;
}

void add_scalar_scalar(const double* x, double c, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + c;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void complex_dot_real_scalar(const std::complex<double>* x,
                             const std::complex<double>* y, double* out,
                             std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
  }
}

void comb_fir_scalar(const double* x, double* y, std::size_t n, std::size_t d,
                     double alpha) {
  const std::size_t head = d < n ? d : n;
  for (std::size_t i = 0; i < head; ++i) y[i] = x[i];
  for (std::size_t i = head; i < n; ++i) y[i] = x[i] + alpha * x[i - d];
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double sum_sq_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double sum_sq_diff_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double weighted_sq_dist_scalar(const double* x, const double* m,
                               const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = x[i] - m[i];
    acc += w[i] * d * d;
  }
  return acc;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops = {
      "scalar",
      multiply_scalar,
      scale_scalar,
      add_scalar_scalar,
      axpy_scalar,
      complex_dot_real_scalar,
      comb_fir_scalar,
      sum_scalar,
      sum_sq_scalar,
      sum_sq_diff_scalar,
      weighted_sq_dist_scalar,
  };
  return ops;
}

}  // namespace modgd::kernels
