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

#ifndef FOAMASK_KERNELS_HPP_
#define FOAMASK_KERNELS_HPP_

#include <cstddef>

// Row kernels behind the hot loops (convolutions, covariance accumulation,
// per-bin complex arithmetic). Each kernel has a scalar reference and an AVX2
// variant; the backend is selected once at startup from CPU capabilities and
// can be overridden for equivalence testing or via FOAMASK_KERNELS=scalar.
//
// Complex rows are interleaved (re, im) pairs; `n` counts complex elements.
// Within one call the accumulation order over the row is the same for every
// backend lane, so per-bin reductions (wouter_accum_f32) match the scalar
// reference to rounding, not to reassociation.

namespace foamask::kernels {

enum class Backend { kScalar = 0, kAvx2 = 1 };

const char* backend_name(Backend b);
Backend active_backend();
bool backend_supported(Backend b);
// Returns false (and leaves the backend unchanged) if unsupported.
bool set_backend(Backend b);
// Re-runs auto-selection: best supported backend unless FOAMASK_KERNELS says
// otherwise.
void reset_backend();

// sum_k a[k] * b[k]
float dot_f32(const float* a, const float* b, std::size_t n);
// y[k] += alpha * x[k]
void axpy_f32(float alpha, const float* x, float* y, std::size_t n);
// sum_k x[k]
float sum_f32(const float* x, std::size_t n);
// sum_k x[k]^2, accumulated in double
double sumsq_f32(const float* x, std::size_t n);

// out[k] = |x[k]| for complex x
void cmag_f32(const float* x, float* out, std::size_t n);
// y[k] = gains[k] * x[k] for complex x, real gains
void crowscale_f32(const float* x, const float* gains, float* y,
                   std::size_t n);
// y[k] += (ar + i*ai) * x[k] for complex x, y
void caxpy_f32(float ar, float ai, const float* x, float* y, std::size_t n);
// y[k] += conj(w[k]) * x[k] for complex w, x, y
void cmac_conj_f32(const float* w, const float* x, float* y, std::size_t n);

// Weighted outer-product row for covariance accumulation:
//   acc_re[k] += w[k] * Re(xi[k] * conj(xj[k]))
//   acc_im[k] += w[k] * Im(xi[k] * conj(xj[k]))
// xi, xj complex rows; w real; accumulators double.
void wouter_accum_f32(const float* xi, const float* xj, const float* w,
                      double* acc_re, double* acc_im, std::size_t n);

}  // namespace foamask::kernels

#endif  // FOAMASK_KERNELS_HPP_
