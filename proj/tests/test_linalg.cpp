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

#include <cmath>
#include <complex>

#include "doctest.h"
#include "foamask/linalg.hpp"
#include "foamask/rng.hpp"

using namespace foamask;
using linalg::CMat;
using linalg::cplx;

namespace {

CMat rand_mat(Rng& rng, int r, int c) {
  CMat m(r, c);
  for (auto& v : m.v) v = {rng.gaussian(), rng.gaussian()};
  return m;
}

// Random Hermitian positive definite via A^H A + eps I.
CMat rand_hpd(Rng& rng, int n, double eps = 0.1) {
  const CMat a = rand_mat(rng, n, n);
  CMat m = a.adjoint() * a;
  for (int i = 0; i < n; ++i) m.at(i, i) += eps;
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("pinv satisfies the Moore-Penrose identities") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int cols = 1 + static_cast<int>(rng.uniform_index(3));
    const CMat a = rand_mat(rng, 4, cols);
    const CMat p = linalg::pinv(a);
    REQUIRE(p.rows == cols);
    REQUIRE(p.cols == 4);
    CHECK(linalg::max_abs(a * p * a - a) < 1e-10);
    CHECK(linalg::max_abs(p * a * p - p) < 1e-10);
    const CMat ap = a * p;
    const CMat pa = p * a;
    CHECK(linalg::max_abs(ap - ap.adjoint()) < 1e-10);
    CHECK(linalg::max_abs(pa - pa.adjoint()) < 1e-10);
    // full column rank: p a == I
    CHECK(linalg::max_abs(pa - CMat::identity(cols)) < 1e-10);
  }
}

TEST_CASE("pinv of a square invertible matrix is its inverse") {
  Rng rng(3);
  const CMat a = rand_hpd(rng, 4, 0.5);
  const CMat p = linalg::pinv(a);
  CHECK(linalg::max_abs(a * p - CMat::identity(4)) < 1e-9);
}

TEST_CASE("pinv rejects rank-deficient input") {
  CMat a(4, 2);
  for (int i = 0; i < 4; ++i) {
    a.at(i, 0) = cplx(i + 1.0, 0.5);
    a.at(i, 1) = 2.0 * a.at(i, 0);  // second column is a multiple
  }
  CHECK_THROWS_AS(linalg::pinv(a), NumericalError);
}

TEST_CASE("cond_estimate") {
  CHECK(linalg::cond_estimate(CMat::identity(4)) == doctest::Approx(1.0));
  CMat d(3, 3);
  d.at(0, 0) = 100.0;
  d.at(1, 1) = 10.0;
  d.at(2, 2) = 1.0;
  CHECK(linalg::cond_estimate(d) == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("cholesky reconstructs and rejects") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat m = rand_hpd(rng, 4);
    const CMat l = linalg::cholesky(m);
    for (int i = 0; i < 4; ++i) {
      CHECK(l.at(i, i).imag() == doctest::Approx(0.0));
      CHECK(l.at(i, i).real() > 0.0);
      for (int j = i + 1; j < 4; ++j) CHECK(std::abs(l.at(i, j)) == 0.0);
    }
    CHECK(linalg::max_abs(l * l.adjoint() - m) < 1e-10 * linalg::max_abs(m));
  }
  CMat indef = CMat::identity(3);
  indef.at(1, 1) = -1.0;
  CHECK_THROWS_AS(linalg::cholesky(indef), NumericalError);
}

TEST_CASE("eigh reconstructs with orthonormal vectors, descending values") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat a = rand_mat(rng, 4, 4);
    CMat m = a.adjoint() * a;  // Hermitian PSD
    const linalg::Eigh eg = linalg::eigh(m);
    REQUIRE(eg.values.size() == 4);
    for (int i = 1; i < 4; ++i) CHECK(eg.values[i - 1] >= eg.values[i]);
    CHECK(linalg::max_abs(eg.vectors.adjoint() * eg.vectors -
                          CMat::identity(4)) < 1e-10);
    CMat rec(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        cplx s = 0.0;
        for (int k = 0; k < 4; ++k)
          s += eg.values[k] * eg.vectors.at(i, k) *
               std::conj(eg.vectors.at(j, k));
        rec.at(i, j) = s;
      }
    CHECK(linalg::max_abs(rec - m) < 1e-9 * (1.0 + linalg::max_abs(m)));
  }
}

TEST_CASE("eigh of a diagonal matrix is exact") {
  CMat d(4, 4);
  d.at(0, 0) = 1.0;
  d.at(1, 1) = 4.0;
  d.at(2, 2) = 2.0;
  d.at(3, 3) = 3.0;
  const linalg::Eigh eg = linalg::eigh(d);
  CHECK(eg.values[0] == 4.0);
  CHECK(eg.values[1] == 3.0);
  CHECK(eg.values[2] == 2.0);
  CHECK(eg.values[3] == 1.0);
}

TEST_CASE("eigh rejects a clearly non-Hermitian matrix") {
  CMat m = CMat::identity(3);
  m.at(0, 1) = 5.0;  // m(1,0) stays 0
  CHECK_THROWS_AS(linalg::eigh(m), NumericalError);
}

TEST_CASE("hermitian_defect") {
  CHECK(linalg::hermitian_defect(CMat::identity(4)) == 0.0);
  CMat m = CMat::identity(2);
  m.at(0, 1) = cplx(0.0, 1.0);
  m.at(1, 0) = cplx(0.0, 1.0);  // conj would be -i
  CHECK(linalg::hermitian_defect(m) > 0.1);
}

TEST_CASE("solve_hermitian solves and guards conditioning") {
  Rng rng(11);
  const CMat a = rand_hpd(rng, 4);
  const CMat b = rand_mat(rng, 4, 2);
  const CMat x = linalg::solve_hermitian(a, b);
  CHECK(linalg::max_abs(a * x - b) < 1e-9 * (1.0 + linalg::max_abs(b)));

  CMat singular(4, 4);  // exactly rank deficient
  singular.at(0, 0) = 1.0;
  CHECK_THROWS_AS(linalg::solve_hermitian(singular, b), NumericalError);
}

TEST_CASE("matrix arithmetic basics") {
  Rng rng(13);
  const CMat a = rand_mat(rng, 3, 2);
  CHECK(linalg::max_abs(a - a) == 0.0);
  const CMat twice = cplx(2.0, 0.0) * a;
  CHECK(linalg::max_abs(twice - (a + a)) < 1e-14);
  CHECK(linalg::fro_norm(CMat::identity(4)) == doctest::Approx(2.0));
  const CMat at = a.adjoint();
  REQUIRE(at.rows == 2);
  REQUIRE(at.cols == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(at.at(j, i) == std::conj(a.at(i, j)));
}

}  // TEST_SUITE
