// include/modgd/kernels.hpp
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

#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace modgd::kernels {

// Data-parallel inner loops of the toolkit. Each operation has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the active set
// is chosen once at startup from CPU capabilities. Reduction variants may
// reassociate sums, so cross-backend comparisons are tolerance-based.
//
// Buffers passed as separate in/out pointers must not alias.
struct Ops {
  const char* name;

  // out[i] = a[i] * b[i]
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = x[i] * c
  void (*scale)(const double* x, double c, double* out, std::size_t n);
  // out[i] = x[i] + c
  void (*add_scalar)(const double* x, double c, double* out, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out[k] = Re(x[k])*Re(y[k]) + Im(x[k])*Im(y[k]).
  // With y == x this is the squared magnitude.
  void (*complex_dot_real)(const std::complex<double>* x,
                           const std::complex<double>* y, double* out,
                           std::size_t n);
  // FIR comb along a sequence: y[i] = x[i] + alpha * x[i - d] for i >= d,
  // y[i] = x[i] otherwise. x and y must not alias.
  void (*comb_fir)(const double* x, double* y, std::size_t n, std::size_t d,
                   double alpha);

  double (*sum)(const double* x, std::size_t n);
  double (*sum_sq)(const double* x, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // sum_i w[i] * (x[i] - m[i])^2 — the Mahalanobis part of a diagonal
  // Gaussian log density.
  double (*weighted_sq_dist)(const double* x, const double* m, const double* w,
                             std::size_t n);
};

enum class Backend { auto_detect, scalar, avx2 };

// Active kernel set. Defaults to the best available backend; the
// MODGD_KERNELS environment variable ("scalar" or "avx2") overrides.
const Ops& active();

// Force a backend (throws NumericError if unavailable). Not thread safe;
// intended for tests and startup configuration.
void select(Backend backend);

const Ops& scalar_ops();
// nullptr when the build or the CPU lacks AVX2.
const Ops* avx2_ops();

std::string backend_name();

}  // namespace modgd::kernels
