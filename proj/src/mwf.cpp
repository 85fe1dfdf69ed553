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

#include "foamask/mwf.hpp"

#include <cmath>
#include <string>

#include "foamask/kernels.hpp"

namespace foamask::mwf {
namespace {

using linalg::CMat;
using linalg::cplx;

constexpr double kLoadEps = 1e-6;

double real_trace(const CMat& m) {
  double t = 0.0;
  for (int i = 0; i < m.rows; ++i) t += m.at(i, i).real();
  return t;
}

CMat loaded(const CMat& m, double trace) {
  CMat out = m;
  const double eps = kLoadEps * trace / m.rows;
  for (int i = 0; i < m.rows; ++i) out.at(i, i) += eps;
  return out;
}

// w solving (phi_ss + phi_nn) w = phi_ss u1. Well-conditioned bins are
// solved as-is; ill-conditioned ones retry with diagonal loading, and
// degenerate bins (zero or still-singular sum) pass the W channel through.
std::array<cplx, 4> solve_bin(const CMat& phi_ss, const CMat& phi_nn,
                              bool* fell_back) {
  *fell_back = false;
  CMat sum = phi_ss + phi_nn;
  const double trace = real_trace(sum);
  if (!(trace > 0.0)) {
    *fell_back = true;
    return {1.0, 0.0, 0.0, 0.0};
  }
  CMat rhs(4, 1);
  for (int i = 0; i < 4; ++i) rhs.at(i, 0) = phi_ss.at(i, 0);
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      const CMat w = linalg::solve_hermitian(
          attempt == 0 ? sum : loaded(sum, trace), rhs);
      return {w.at(0, 0), w.at(1, 0), w.at(2, 0), w.at(3, 0)};
    } catch (const NumericalError&) {
    }
  }
  *fell_back = true;
  return {1.0, 0.0, 0.0, 0.0};
}

// Forward substitution: solves L y = b for lower-triangular L, column-wise.
CMat lower_solve(const CMat& l, const CMat& b) {
  CMat y(b.rows, b.cols);
  for (int c = 0; c < b.cols; ++c) {
    for (int i = 0; i < b.rows; ++i) {
      cplx s = b.at(i, c);
      for (int k = 0; k < i; ++k) s -= l.at(i, k) * y.at(k, c);
      y.at(i, c) = s / l.at(i, i);
    }
  }
  return y;
}

}  // namespace

CovariancePair masked_covariances(const stft::Spectrogram& mix,
                                  const masks::Mask& mask) {
  if (mix.channels != 4)
    throw DataError("masked_covariances: expected 4-channel input");
  if (mix.frames == 0 || mix.bins == 0)
    throw DataError("masked_covariances: empty spectrogram");
  if (mix.frames != mask.frames || mix.bins != mask.bins)
    throw DataError("masked_covariances: mask shape mismatch");

  const int nf = mix.bins;
  const int nt = mix.frames;
  // 10 unique channel pairs (i <= j), accumulated per bin in double
  struct PairAcc {
    std::vector<double> re, im;
  };
  PairAcc ss[10], nn[10];
  for (int p = 0; p < 10; ++p) {
    ss[p].re.assign(nf, 0.0);
    ss[p].im.assign(nf, 0.0);
    nn[p].re.assign(nf, 0.0);
    nn[p].im.assign(nf, 0.0);
  }

  std::vector<float> m2(nf), n2(nf);
  for (int t = 0; t < nt; ++t) {
    const float* m = mask.row(t);
    for (int f = 0; f < nf; ++f) {
      m2[f] = m[f] * m[f];
      const float c = 1.0f - m[f];
      n2[f] = c * c;
    }
    int p = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j, ++p) {
        const float* xi = reinterpret_cast<const float*>(mix.row(i, t));
        const float* xj = reinterpret_cast<const float*>(mix.row(j, t));
        kernels::wouter_accum_f32(xi, xj, m2.data(), ss[p].re.data(),
                                  ss[p].im.data(), static_cast<std::size_t>(nf));
        kernels::wouter_accum_f32(xi, xj, n2.data(), nn[p].re.data(),
                                  nn[p].im.data(), static_cast<std::size_t>(nf));
      }
    }
  }

  CovariancePair cov;
  cov.frame_count = nt;
  cov.phi_ss.assign(nf, CMat(4, 4));
  cov.phi_nn.assign(nf, CMat(4, 4));
  const double inv_t = 1.0 / nt;
  auto assemble = [&](const PairAcc* acc, std::vector<CMat>& out) {
    for (int f = 0; f < nf; ++f) {
      int p = 0;
      for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j, ++p) {
          if (i == j) {
            out[f].at(i, i) = {acc[p].re[f] * inv_t, 0.0};
          } else {
            const cplx v{acc[p].re[f] * inv_t, acc[p].im[f] * inv_t};
            out[f].at(i, j) = v;
            out[f].at(j, i) = std::conj(v);
          }
        }
      }
    }
  };
  assemble(ss, cov.phi_ss);
  assemble(nn, cov.phi_nn);
  return cov;
}

FilterWeights mwf_filter(const CovariancePair& cov) {
  FilterWeights out;
  out.variant = FilterWeights::Variant::kFullMwf;
  const int nf = cov.bins();
  out.w.resize(nf);
  out.fallback.assign(nf, 0);
  for (int f = 0; f < nf; ++f) {
    bool fb = false;
    out.w[f] = solve_bin(cov.phi_ss[f], cov.phi_nn[f], &fb);
    out.fallback[f] = fb ? 1 : 0;
  }
  return out;
}

FilterWeights gevd_rank1_filter(const CovariancePair& cov) {
  FilterWeights out;
  out.variant = FilterWeights::Variant::kGevdRank1;
  const int nf = cov.bins();
  out.w.resize(nf);
  out.fallback.assign(nf, 0);
  for (int f = 0; f < nf; ++f) {
    const CMat& phi_nn = cov.phi_nn[f];
    const double tr_nn = real_trace(phi_nn);
    CMat phi1(4, 4);
    if (tr_nn > 0.0) {
      CMat l;
      try {
        l = linalg::cholesky(phi_nn);
      } catch (const NumericalError&) {
        try {
          l = linalg::cholesky(loaded(phi_nn, tr_nn));
        } catch (const NumericalError& e) {
          throw NumericalError("gevd_rank1_filter: bin " + std::to_string(f) +
                               ": " + e.what());
        }
      }
      // whitened speech covariance inv(L) phi_ss inv(L)^H
      const CMat y = lower_solve(l, cov.phi_ss[f]);
      const CMat white = lower_solve(l, y.adjoint()).adjoint();
      const linalg::Eigh eg = linalg::eigh(white);
      const double lambda = std::max(eg.values[0], 0.0);
      cplx v[4];
      for (int i = 0; i < 4; ++i) {
        cplx s = 0.0;
        for (int k = 0; k <= i; ++k) s += l.at(i, k) * eg.vectors.at(k, 0);
        v[i] = s;
      }
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          phi1.at(i, j) = lambda * v[i] * std::conj(v[j]);
    } else {
      // silent noise estimate: no whitening possible, keep phi_ss as-is
      phi1 = cov.phi_ss[f];
    }
    bool fb = false;
    out.w[f] = solve_bin(phi1, phi_nn, &fb);
    out.fallback[f] = fb ? 1 : 0;
  }
  return out;
}

stft::Spectrogram apply_filter(const stft::Spectrogram& mix,
                               const FilterWeights& w) {
  if (mix.channels != 4)
    throw DataError("apply_filter: expected 4-channel input");
  if (w.bins() != mix.bins)
    throw DataError("apply_filter: filter has " + std::to_string(w.bins()) +
                    " bins, spectrogram " + std::to_string(mix.bins));
  // per-channel weight rows in single precision for the row kernel
  std::vector<std::complex<float>> wrow(static_cast<std::size_t>(4) * mix.bins);
  for (int c = 0; c < 4; ++c)
    for (int f = 0; f < mix.bins; ++f)
      wrow[static_cast<std::size_t>(c) * mix.bins + f] = {
          static_cast<float>(w.w[f][c].real()),
          static_cast<float>(w.w[f][c].imag())};

  stft::Spectrogram out(mix.config, 1, mix.frames);
  for (int t = 0; t < mix.frames; ++t) {
    float* dst = reinterpret_cast<float*>(out.row(0, t));
    for (int c = 0; c < 4; ++c) {
      kernels::cmac_conj_f32(
          reinterpret_cast<const float*>(wrow.data() +
                                         static_cast<std::size_t>(c) * mix.bins),
          reinterpret_cast<const float*>(mix.row(c, t)), dst,
          static_cast<std::size_t>(mix.bins));
    }
  }
  return out;
}

}  // namespace foamask::mwf
