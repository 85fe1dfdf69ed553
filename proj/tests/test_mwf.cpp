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
#include "foamask/mwf.hpp"
#include "foamask/rng.hpp"
#include "helpers.hpp"

using namespace foamask;
using linalg::CMat;
using linalg::cplx;

namespace {

// Brute-force masked covariance of one bin, straight from the definition.
// The squared mask weight is formed in float, like the production path.
CMat naive_cov(const stft::Spectrogram& mix, const masks::Mask& mask, int f,
               bool speech) {
  CMat acc(4, 4);
  for (int t = 0; t < mix.frames; ++t) {
    const float m = speech ? mask.at(t, f) : 1.0f - mask.at(t, f);
    const double g = m * m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        acc.at(i, j) += g * cplx(mix.at(i, t, f)) *
                        std::conj(cplx(mix.at(j, t, f)));
  }
  return cplx(1.0 / mix.frames, 0.0) * acc;
}

CMat cov_to_mat(const std::array<std::complex<double>, 4>& w) {
  CMat m(4, 1);
  for (int i = 0; i < 4; ++i) m.at(i, 0) = w[i];
  return m;
}

}  // namespace

TEST_SUITE("mwf") {

TEST_CASE("masked_covariances matches the per-bin brute force") {
  Rng rng(501);
  const stft::StftConfig cfg{32, 16};
  for (int trial = 0; trial < 10; ++trial) {
    const int frames = 3 + static_cast<int>(rng.uniform_index(6));
    const stft::Spectrogram mix = test::rand_spec(rng, 4, frames, cfg);
    const masks::Mask mask = test::rand_mask(rng, frames, cfg.bins());
    const mwf::CovariancePair cov = mwf::masked_covariances(mix, mask);
    REQUIRE(cov.bins() == cfg.bins());
    REQUIRE(cov.frame_count == frames);
    for (int f = 0; f < cov.bins(); ++f) {
      const CMat ws = naive_cov(mix, mask, f, true);
      const CMat wn = naive_cov(mix, mask, f, false);
      CHECK(linalg::max_abs(cov.phi_ss[f] - ws) < 1e-10);
      CHECK(linalg::max_abs(cov.phi_nn[f] - wn) < 1e-10);
    }
  }
}

TEST_CASE("masked covariances are Hermitian and positive semidefinite") {
  Rng rng(502);
  const stft::StftConfig cfg{32, 16};
  for (int trial = 0; trial < 100; ++trial) {
    const stft::Spectrogram mix = test::rand_spec(rng, 4, 4, cfg);
    const masks::Mask mask = test::rand_mask(rng, 4, cfg.bins());
    const mwf::CovariancePair cov = mwf::masked_covariances(mix, mask);
    const int f = static_cast<int>(rng.uniform_index(cfg.bins()));
    for (const CMat* m : {&cov.phi_ss[f], &cov.phi_nn[f]}) {
      CHECK(linalg::max_abs(*m - m->adjoint()) < 1e-12);
      const linalg::Eigh eg = linalg::eigh(*m);
      for (double v : eg.values) CHECK(v >= -1e-10);
    }
  }
}

TEST_CASE("mask of all ones puts everything into phi_ss") {
  Rng rng(503);
  const stft::StftConfig cfg{32, 16};
  const stft::Spectrogram mix = test::rand_spec(rng, 4, 5, cfg);
  masks::Mask ones(5, cfg.bins());
  for (auto& v : ones.data) v = 1.0f;
  const mwf::CovariancePair cov = mwf::masked_covariances(mix, ones);
  for (int f = 0; f < cov.bins(); ++f) {
    CHECK(linalg::max_abs(cov.phi_nn[f]) == 0.0);
    CHECK(linalg::max_abs(cov.phi_ss[f] - naive_cov(mix, ones, f, true)) <
          1e-10);
  }
}

TEST_CASE("half mask with one frame gives a quarter of x x^H on both sides") {
  Rng rng(504);
  const stft::StftConfig cfg{16, 8};
  const stft::Spectrogram mix = test::rand_spec(rng, 4, 1, cfg);
  masks::Mask half(1, cfg.bins());
  for (auto& v : half.data) v = 0.5f;
  const mwf::CovariancePair cov = mwf::masked_covariances(mix, half);
  for (int f = 0; f < cov.bins(); ++f) {
    CMat outer(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        outer.at(i, j) = 0.25 * cplx(mix.at(i, 0, f)) *
                         std::conj(cplx(mix.at(j, 0, f)));
    CHECK(linalg::max_abs(cov.phi_ss[f] - outer) < 1e-12);
    CHECK(linalg::max_abs(cov.phi_nn[f] - outer) < 1e-12);
  }
}

TEST_CASE("complementary masks swap the roles of phi_ss and phi_nn") {
  Rng rng(505);
  const stft::StftConfig cfg{32, 16};
  const stft::Spectrogram mix = test::rand_spec(rng, 4, 6, cfg);
  const masks::Mask m = test::rand_mask(rng, 6, cfg.bins());
  const mwf::CovariancePair a = mwf::masked_covariances(mix, m);
  const mwf::CovariancePair b =
      mwf::masked_covariances(mix, masks::complement(m));
  // The complement is stored in float, so the swap holds to float rounding.
  for (int f = 0; f < a.bins(); ++f) {
    CHECK(linalg::max_abs(a.phi_ss[f] - b.phi_nn[f]) < 1e-6);
    CHECK(linalg::max_abs(a.phi_nn[f] - b.phi_ss[f]) < 1e-6);
  }
}

TEST_CASE("shape mismatch is rejected") {
  Rng rng(506);
  const stft::StftConfig cfg{32, 16};
  const stft::Spectrogram mix = test::rand_spec(rng, 4, 6, cfg);
  CHECK_THROWS_AS(
      mwf::masked_covariances(mix, test::rand_mask(rng, 5, cfg.bins())),
      DataError);
  const stft::Spectrogram mono = test::rand_spec(rng, 1, 6, cfg);
  CHECK_THROWS_AS(
      mwf::masked_covariances(mono, test::rand_mask(rng, 6, cfg.bins())),
      DataError);
}

TEST_CASE("closed form: identity noise, e1 speech gives w = 0.5 e1") {
  mwf::CovariancePair cov;
  cov.frame_count = 1;
  CMat ss(4, 4);
  ss.at(0, 0) = 1.0;
  cov.phi_ss = {ss};
  cov.phi_nn = {CMat::identity(4)};
  const mwf::FilterWeights w = mwf::mwf_filter(cov);
  REQUIRE(w.bins() == 1);
  CHECK(w.fallback[0] == 0);
  CHECK(std::abs(w.w[0][0] - 0.5) <= 1e-10);
  for (int c = 1; c < 4; ++c) CHECK(std::abs(w.w[0][c]) <= 1e-10);
}

TEST_CASE("zero speech covariance gives the zero filter") {
  mwf::CovariancePair cov;
  cov.frame_count = 1;
  cov.phi_ss = {CMat(4, 4)};
  cov.phi_nn = {CMat::identity(4)};
  const mwf::FilterWeights w = mwf::mwf_filter(cov);
  CHECK(w.fallback[0] == 0);
  for (int c = 0; c < 4; ++c) CHECK(std::abs(w.w[0][c]) == 0.0);
}

TEST_CASE("random well-conditioned bins satisfy the normal equations") {
  Rng rng(507);
  for (int trial = 0; trial < 50; ++trial) {
    auto hpd = [&rng](double load) {
      CMat a(4, 4);
      for (auto& v : a.v) v = {rng.gaussian(), rng.gaussian()};
      CMat m = a.adjoint() * a;
      for (int i = 0; i < 4; ++i) m.at(i, i) += load;
      return m;
    };
    mwf::CovariancePair cov;
    cov.frame_count = 8;
    cov.phi_ss = {hpd(0.1)};
    cov.phi_nn = {hpd(0.1)};
    const mwf::FilterWeights w = mwf::mwf_filter(cov);
    REQUIRE(w.fallback[0] == 0);
    // (phi_ss + phi_nn) w == phi_ss u1
    const CMat lhs = (cov.phi_ss[0] + cov.phi_nn[0]) * cov_to_mat(w.w[0]);
    CMat rhs(4, 1);
    for (int i = 0; i < 4; ++i) rhs.at(i, 0) = cov.phi_ss[0].at(i, 0);
    CHECK(linalg::max_abs(lhs - rhs) < 1e-8);
  }
}

TEST_CASE("filters are invariant to joint covariance scaling") {
  Rng rng(508);
  CMat a(4, 4);
  for (auto& v : a.v) v = {rng.gaussian(), rng.gaussian()};
  CMat ss = a.adjoint() * a;
  mwf::CovariancePair cov;
  cov.frame_count = 4;
  cov.phi_ss = {ss};
  cov.phi_nn = {CMat::identity(4)};
  mwf::CovariancePair scaled = cov;
  scaled.phi_ss[0] = cplx(64.0, 0.0) * scaled.phi_ss[0];
  scaled.phi_nn[0] = cplx(64.0, 0.0) * scaled.phi_nn[0];
  for (auto* filt : {&mwf::mwf_filter, &mwf::gevd_rank1_filter}) {
    const mwf::FilterWeights w1 = (*filt)(cov);
    const mwf::FilterWeights w2 = (*filt)(scaled);
    for (int c = 0; c < 4; ++c)
      CHECK(std::abs(w1.w[0][c] - w2.w[0][c]) < 1e-9);
  }
}

TEST_CASE("rank-1 speech covariance: gevd filter equals the full mwf") {
  Rng rng(509);
  for (int trial = 0; trial < 25; ++trial) {
    // Random rank-1 phi_ss = s s^H, random HPD phi_nn.
    CMat s(4, 1);
    for (auto& v : s.v) v = {rng.gaussian(), rng.gaussian()};
    const CMat ss = s * s.adjoint();
    CMat a(4, 4);
    for (auto& v : a.v) v = {rng.gaussian(), rng.gaussian()};
    CMat nn = a.adjoint() * a;
    for (int i = 0; i < 4; ++i) nn.at(i, i) += 0.2;
    mwf::CovariancePair cov;
    cov.frame_count = 16;
    cov.phi_ss = {ss};
    cov.phi_nn = {nn};
    const mwf::FilterWeights full = mwf::mwf_filter(cov);
    const mwf::FilterWeights gevd = mwf::gevd_rank1_filter(cov);
    CHECK(gevd.variant == mwf::FilterWeights::Variant::kGevdRank1);
    REQUIRE(full.fallback[0] == 0);
    REQUIRE(gevd.fallback[0] == 0);
    for (int c = 0; c < 4; ++c)
      CHECK(std::abs(full.w[0][c] - gevd.w[0][c]) < 1e-8);
  }
}

TEST_CASE("gevd keeps only the dominant component of a rank-2 speech cov") {
  Rng rng(510);
  CMat s1(4, 1), s2(4, 1);
  for (auto& v : s1.v) v = {rng.gaussian(), rng.gaussian()};
  for (auto& v : s2.v) v = {rng.gaussian(), rng.gaussian()};
  const CMat ss =
      cplx(100.0, 0.0) * (s1 * s1.adjoint()) + s2 * s2.adjoint();
  mwf::CovariancePair cov;
  cov.frame_count = 16;
  cov.phi_ss = {ss};
  cov.phi_nn = {CMat::identity(4)};
  const mwf::FilterWeights gevd = mwf::gevd_rank1_filter(cov);
  // Compare against the analytically rebuilt rank-1 truncation.
  const linalg::Eigh eg = linalg::eigh(ss);
  CMat rank1(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rank1.at(i, j) = eg.values[0] * eg.vectors.at(i, 0) *
                       std::conj(eg.vectors.at(j, 0));
  mwf::CovariancePair trunc;
  trunc.frame_count = 16;
  trunc.phi_ss = {rank1};
  trunc.phi_nn = {CMat::identity(4)};
  const mwf::FilterWeights want = mwf::mwf_filter(trunc);
  for (int c = 0; c < 4; ++c)
    CHECK(std::abs(gevd.w[0][c] - want.w[0][c]) < 1e-6);
}

TEST_CASE("degenerate zero bins fall back to the W selector and are flagged") {
  mwf::CovariancePair cov;
  cov.frame_count = 1;
  cov.phi_ss = {CMat(4, 4), CMat::identity(4)};
  cov.phi_nn = {CMat(4, 4), CMat::identity(4)};
  for (auto* filt : {&mwf::mwf_filter, &mwf::gevd_rank1_filter}) {
    const mwf::FilterWeights w = (*filt)(cov);
    REQUIRE(w.bins() == 2);
    CHECK(w.fallback[0] == 1);
    CHECK(w.w[0][0] == cplx(1.0, 0.0));
    for (int c = 1; c < 4; ++c) CHECK(w.w[0][c] == cplx(0.0, 0.0));
    CHECK(w.fallback[1] == 0);
  }
}

TEST_CASE("apply_filter implements y = w^H x with a per-bin filter") {
  Rng rng(511);
  const stft::StftConfig cfg{16, 8};
  const stft::Spectrogram mix = test::rand_spec(rng, 4, 3, cfg);
  mwf::FilterWeights w;
  w.w.resize(cfg.bins());
  w.fallback.assign(cfg.bins(), 0);
  for (auto& b : w.w)
    for (auto& c : b) c = {rng.gaussian(), rng.gaussian()};
  const stft::Spectrogram y = mwf::apply_filter(mix, w);
  REQUIRE(y.channels == 1);
  REQUIRE(y.frames == 3);
  for (int t = 0; t < 3; ++t)
    for (int f = 0; f < cfg.bins(); ++f) {
      cplx want = 0.0;
      for (int c = 0; c < 4; ++c)
        want += std::conj(w.w[f][c]) * cplx(mix.at(c, t, f));
      CHECK(std::abs(cplx(y.at(0, t, f)) - want) < 1e-5);
    }
}

TEST_CASE("apply_filter with the W selector extracts channel zero") {
  Rng rng(512);
  const stft::StftConfig cfg{16, 8};
  const stft::Spectrogram mix = test::rand_spec(rng, 4, 3, cfg);
  mwf::FilterWeights w;
  w.w.assign(cfg.bins(), {cplx(1.0, 0.0), 0.0, 0.0, 0.0});
  w.fallback.assign(cfg.bins(), 0);
  const stft::Spectrogram y = mwf::apply_filter(mix, w);
  const stft::Spectrogram w_ch = mix.channel(0);
  CHECK(y.data == w_ch.data);
}

TEST_CASE("apply_filter rejects bin mismatch") {
  Rng rng(513);
  const stft::StftConfig cfg{16, 8};
  const stft::Spectrogram mix = test::rand_spec(rng, 4, 3, cfg);
  mwf::FilterWeights w;
  w.w.resize(cfg.bins() - 1);
  w.fallback.assign(cfg.bins() - 1, 0);
  CHECK_THROWS_AS(mwf::apply_filter(mix, w), DataError);
}

}  // TEST_SUITE
