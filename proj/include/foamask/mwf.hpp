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

#ifndef FOAMASK_MWF_HPP_
#define FOAMASK_MWF_HPP_

#include <array>
#include <complex>
#include <vector>

#include "foamask/common.hpp"
#include "foamask/linalg.hpp"
#include "foamask/masks.hpp"
#include "foamask/stft.hpp"

namespace foamask::mwf {

// Per-bin 4x4 speech/noise covariance estimates, Hermitian PSD, accumulated
// in double precision.
struct CovariancePair {
  std::vector<linalg::CMat> phi_ss;  // [bins], each 4x4
  std::vector<linalg::CMat> phi_nn;
  int frame_count = 0;

  int bins() const { return static_cast<int>(phi_ss.size()); }
};

// Time-invariant per-bin filters; apply as y(t,f) = w(f)^H x(t,f).
struct FilterWeights {
  enum class Variant { kFullMwf, kGevdRank1 };

  Variant variant = Variant::kFullMwf;
  std::vector<std::array<std::complex<double>, 4>> w;  // [bins]
  // Bins where the solve was degenerate and the filter fell back to passing
  // the W channel through.
  std::vector<uint8_t> fallback;

  int bins() const { return static_cast<int>(w.size()); }
};

// Phi_ss(f) = (1/T) sum_t M^2 x x^H, Phi_nn with (1-M)^2.
CovariancePair masked_covariances(const stft::Spectrogram& mix,
                                  const masks::Mask& mask);

// w = (Phi_ss + Phi_nn)^-1 Phi_ss u1. Ill-conditioned bins are retried with
// diagonal loading; bins that still fail fall back to w = u1 and are flagged.
FilterWeights mwf_filter(const CovariancePair& cov);

// Rank-1 variant: whiten with chol(Phi_nn), keep the principal eigenpair,
// rebuild Phi_ss, then solve as in mwf_filter. Indefinite Phi_nn (after
// loading) raises NumericalError with the bin index; zero Phi_nn bins skip
// the whitening and are handled like mwf_filter bins.
FilterWeights gevd_rank1_filter(const CovariancePair& cov);

// y(t,f) = w(f)^H x(t,f).
stft::Spectrogram apply_filter(const stft::Spectrogram& mix,
                               const FilterWeights& w);

}  // namespace foamask::mwf

#endif  // FOAMASK_MWF_HPP_
