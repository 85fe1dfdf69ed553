// Copyright 2026 The foamask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scalar reference kernels. These define the semantics; the SIMD variants are
// equivalence-tested against them.

#include <cmath>
#include <cstddef>

#include "kernels_internal.hpp"

namespace foamask::kernels {
namespace {

float dot_scalar(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void axpy_scalar(float alpha, const float* x, float* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

float sum_scalar(const float* x, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t k = 0; k < n; ++k) acc += x[k];
  return acc;
}

double sumsq_scalar(const float* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = x[k];
    acc += v * v;
  }
  return acc;
}

void cmag_scalar(const float* x, float* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const float re = x[2 * k];
    const float im = x[2 * k + 1];
    out[k] = std::sqrt(re * re + im * im);
  }
}

void crowscale_scalar(const float* x, const float* gains, float* y,
                      std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    y[2 * k] = gains[k] * x[2 * k];
    y[2 * k + 1] = gains[k] * x[2 * k + 1];
  }
}

void caxpy_scalar(float ar, float ai, const float* x, float* y,
                  std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const float re = x[2 * k];
    const float im = x[2 * k + 1];
    y[2 * k] += ar * re - ai * im;
    y[2 * k + 1] += ar * im + ai * re;
  }
}

void cmac_conj_scalar(const float* w, const float* x, float* y,
                      std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const float wr = w[2 * k];
    const float wi = w[2 * k + 1];
    const float xr = x[2 * k];
    const float xi = x[2 * k + 1];
    // conj(w) * x
    y[2 * k] += wr * xr + wi * xi;
    y[2 * k + 1] += wr * xi - wi * xr;
  }
}

void wouter_accum_scalar(const float* xi, const float* xj, const float* w,
                         double* acc_re, double* acc_im, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double ar = xi[2 * k];
    const double ai = xi[2 * k + 1];
    const double br = xj[2 * k];
    const double bi = xj[2 * k + 1];
    const double wk = w[k];
    // xi * conj(xj)
    acc_re[k] += wk * (ar * br + ai * bi);
    acc_im[k] += wk * (ai * br - ar * bi);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table = {
      dot_scalar,    axpy_scalar,      sum_scalar,
      sumsq_scalar,  cmag_scalar,      crowscale_scalar,
      caxpy_scalar,  cmac_conj_scalar, wouter_accum_scalar,
  };
  return table;
}

}  // namespace foamask::kernels
