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

#include "foamask/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace foamask::linalg {

namespace {
constexpr double kPinvCondLimit = 1e10;
constexpr double kSolveRcondLimit = 1e-12;
constexpr double kSymmetrizeTol = 1e-10;

double off_diag_fro(const CMat& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (i != j) s += std::norm(m.at(i, j));
  return std::sqrt(s);
}
}  // namespace

CMat CMat::identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

CMat CMat::adjoint() const {
  CMat out(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.at(j, i) = std::conj(at(i, j));
  return out;
}

CMat operator*(const CMat& a, const CMat& b) {
  CMat out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const cplx aik = a.at(i, k);
      for (int j = 0; j < b.cols; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

CMat operator+(const CMat& a, const CMat& b) {
  CMat out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

CMat operator-(const CMat& a, const CMat& b) {
  CMat out = a;
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

CMat operator*(cplx s, const CMat& a) {
  CMat out = a;
  for (auto& e : out.v) e *= s;
  return out;
}

double fro_norm(const CMat& m) {
  double s = 0.0;
  for (const auto& e : m.v) s += std::norm(e);
  return std::sqrt(s);
}

double max_abs(const CMat& m) {
  double s = 0.0;
  for (const auto& e : m.v) s = std::max(s, std::abs(e));
  return s;
}

double hermitian_defect(const CMat& m) {
  const double denom = fro_norm(m);
  if (denom == 0.0) return 0.0;
  return fro_norm(m - m.adjoint()) / denom;
}

Eigh eigh(const CMat& m) {
  if (m.rows != m.cols) throw DataError("eigh: matrix not square");
  const double defect = hermitian_defect(m);
  if (defect > kSymmetrizeTol)
    throw NumericalError("eigh: input not Hermitian (relative defect " +
                         std::to_string(defect) + ")");
  const int n = m.rows;
  CMat a = 0.5 * (m + m.adjoint());
  CMat vec = CMat::identity(n);

  const double norm = fro_norm(a);
  const double target = 0.5e-12 * norm;

  // Cyclic sweeps: each rotation zeroes one off-diagonal pair; 4x4 inputs
  // converge in a handful of sweeps.
  for (int sweep = 0; sweep < 100 && off_diag_fro(a) > target; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a.at(p, q);
        const double r = std::abs(apq);
        if (r <= 1e-300) continue;
        const cplx phase = apq / r;  // a_pq = r * e^{i alpha}
        const double app = a.at(p, p).real();
        const double aqq = a.at(q, q).real();
        const double phi = (app - aqq) / (2.0 * r);
        const double t =
            (phi >= 0.0 ? 1.0 : -1.0) /
            (std::abs(phi) + std::sqrt(phi * phi + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx sp = s * phase;             // s * e^{i alpha}
        const cplx spc = s * std::conj(phase); // s * e^{-i alpha}

        for (int i = 0; i < n; ++i) {  // columns p,q: A <- A J
          const cplx aip = a.at(i, p);
          const cplx aiq = a.at(i, q);
          a.at(i, p) = c * aip + spc * aiq;
          a.at(i, q) = c * aiq - sp * aip;
        }
        for (int j = 0; j < n; ++j) {  // rows p,q: A <- J^H A
          const cplx apj = a.at(p, j);
          const cplx aqj = a.at(q, j);
          a.at(p, j) = c * apj + sp * aqj;
          a.at(q, j) = c * aqj - spc * apj;
        }
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        a.at(p, p) = a.at(p, p).real();
        a.at(q, q) = a.at(q, q).real();
        for (int i = 0; i < n; ++i) {  // accumulate V <- V J
          const cplx vip = vec.at(i, p);
          const cplx viq = vec.at(i, q);
          vec.at(i, p) = c * vip + spc * viq;
          vec.at(i, q) = c * viq - sp * vip;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
    return a.at(lhs, lhs).real() > a.at(rhs, rhs).real();
  });

  Eigh out;
  out.values.resize(n);
  out.vectors = CMat(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a.at(order[j], order[j]).real();
    for (int i = 0; i < n; ++i) out.vectors.at(i, j) = vec.at(i, order[j]);
  }
  return out;
}

double cond_estimate(const CMat& m) {
  const Eigh e = eigh(m.adjoint() * m);
  const double lmax = e.values.front();
  const double lmin = e.values.back();
  if (lmax <= 0.0) return std::numeric_limits<double>::infinity();
  if (lmin <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(lmax / lmin);
}

CMat pinv(const CMat& m) {
  const CMat gram = m.adjoint() * m;
  const Eigh e = eigh(gram);
  const double lmax = e.values.front();
  const double lmin = e.values.back();
  const double cond =
      (lmax <= 0.0 || lmin <= 0.0) ? std::numeric_limits<double>::infinity()
                                   : std::sqrt(lmax / lmin);
  if (!(cond < kPinvCondLimit))
    throw NumericalError("pinv: rank-deficient input, condition estimate " +
                         std::to_string(cond));
  const int n = m.cols;
  CMat inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k)
        s += e.vectors.at(i, k) * std::conj(e.vectors.at(j, k)) /
             e.values[k];
      inv.at(i, j) = s;
    }
  return inv * m.adjoint();
}

CMat cholesky(const CMat& m) {
  if (m.rows != m.cols) throw DataError("cholesky: matrix not square");
  const int n = m.rows;
  CMat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = m.at(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(l.at(j, k));
    if (!(d > 0.0))
      throw NumericalError("cholesky: non-positive pivot at index " +
                           std::to_string(j));
    const double ljj = std::sqrt(d);
    l.at(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      cplx s = m.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * std::conj(l.at(j, k));
      l.at(i, j) = s / ljj;
    }
  }
  return l;
}

CMat solve_hermitian(const CMat& a, const CMat& b) {
  if (a.rows != b.rows) throw DataError("solve: shape mismatch");
  const Eigh e = eigh(a);
  double amax = 0.0, amin = std::numeric_limits<double>::infinity();
  for (double lv : e.values) {
    amax = std::max(amax, std::abs(lv));
    amin = std::min(amin, std::abs(lv));
  }
  if (amax == 0.0 || amin < amax * kSolveRcondLimit)
    throw NumericalError("solve: matrix singular to working precision (cond " +
                         std::to_string(amax / std::max(amin, 1e-300)) + ")");
  // x = V diag(1/lambda) V^H b
  const CMat y = e.vectors.adjoint() * b;
  CMat z = y;
  for (int i = 0; i < z.rows; ++i)
    for (int j = 0; j < z.cols; ++j) z.at(i, j) = y.at(i, j) / e.values[i];
  return e.vectors * z;
}

}  // namespace foamask::linalg
