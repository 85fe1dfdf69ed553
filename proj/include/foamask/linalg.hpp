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

#ifndef FOAMASK_LINALG_HPP_
#define FOAMASK_LINALG_HPP_

#include <complex>
#include <vector>

#include "foamask/common.hpp"

// Direct algorithms for tiny dense complex matrices (<= 4x4 systems, 4xK
// steering stacks): normal-equations pseudo-inverse, unblocked Cholesky and
// a cyclic Jacobi Hermitian eigensolver. Deterministic: identical inputs
// give bit-identical outputs.

namespace foamask::linalg {

using cplx = std::complex<double>;

struct CMat {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> v;  // row-major

  CMat() = default;
  CMat(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c) {}

  cplx& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
  const cplx& at(int r, int c) const {
    return v[static_cast<size_t>(r) * cols + c];
  }

  static CMat identity(int n);
  CMat adjoint() const;  // conjugate transpose
};

CMat operator*(const CMat& a, const CMat& b);
CMat operator+(const CMat& a, const CMat& b);
CMat operator-(const CMat& a, const CMat& b);
CMat operator*(cplx s, const CMat& a);

double fro_norm(const CMat& m);
double max_abs(const CMat& m);
// Largest relative asymmetry |m - m^H| / |m|.
double hermitian_defect(const CMat& m);

struct Eigh {
  std::vector<double> values;  // descending
  CMat vectors;                // columns are the eigenvectors
};

// Moore-Penrose pseudo-inverse (m^H m)^{-1} m^H for a full-column-rank m.
// Throws NumericalError with the condition estimate if m is rank-deficient
// (condition above ~1e10).
CMat pinv(const CMat& m);

// Condition number estimate sqrt(lmax/lmin) of m from its Gram matrix.
double cond_estimate(const CMat& m);

// Lower-triangular L with L L^H == m. Throws NumericalError naming the
// failing pivot index if m is not positive definite.
CMat cholesky(const CMat& m);

// Hermitian eigendecomposition by cyclic Jacobi sweeps; eigenvalues sorted
// descending, eigenvectors orthonormal. Inputs with asymmetry below 1e-10
// relative are symmetrized first; anything worse is rejected.
Eigh eigh(const CMat& m);

// Solves a x = b for Hermitian a via its eigendecomposition. Throws
// NumericalError if 1/cond(a) < 1e-12.
CMat solve_hermitian(const CMat& a, const CMat& b);

}  // namespace foamask::linalg

#endif  // FOAMASK_LINALG_HPP_
