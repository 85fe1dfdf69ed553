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

#include "foamask/beamform.hpp"

#include <cmath>
#include <string>

#include "foamask/kernels.hpp"
#include "foamask/linalg.hpp"

namespace foamask::beamform {

BeamformerSet build_beamformers(
    const foa::Direction& target,
    const std::vector<foa::Direction>& interferers) {
  if (interferers.size() > 2)
    throw ConfigError("beamform: at most 2 interferers, got " +
                      std::to_string(interferers.size()));
  const int cols = 1 + static_cast<int>(interferers.size());
  linalg::CMat d(4, cols);
  auto fill = [&](int j, const foa::Direction& dir) {
    const foa::SteeringVector v = foa::steering_vector(dir);
    for (int i = 0; i < 4; ++i) d.at(i, j) = v[i];
  };
  fill(0, target);
  for (std::size_t k = 0; k < interferers.size(); ++k)
    fill(static_cast<int>(k) + 1, interferers[k]);

  BeamformerSet out;
  out.condition_number = linalg::cond_estimate(d);
  const linalg::CMat p = linalg::pinv(d);  // cols x 4
  out.vectors.resize(cols);
  for (int i = 0; i < cols; ++i)
    for (int c = 0; c < 4; ++c)
      out.vectors[i][c] = std::conj(p.at(i, c));  // b s.t. b^H x = row_i(p) x
  return out;
}

FeatureTensor extract_features(const stft::Spectrogram& mix,
                               const BeamformerSet& bf) {
  if (mix.channels != 4)
    throw DataError("extract_features: expected 4-channel mixture");
  if (bf.vectors.empty() || bf.vectors.size() > 3)
    throw DataError("extract_features: need 1..3 beamformers, got " +
                    std::to_string(bf.vectors.size()));
  const int s = static_cast<int>(bf.vectors.size());
  FeatureTensor out(1 + s, mix.frames, mix.bins);
  std::vector<std::complex<float>> acc(mix.bins);
  for (int t = 0; t < mix.frames; ++t) {
    kernels::cmag_f32(reinterpret_cast<const float*>(mix.row(0, t)),
                      out.row(0, t), static_cast<std::size_t>(mix.bins));
    for (int q = 0; q < s; ++q) {
      std::fill(acc.begin(), acc.end(), std::complex<float>(0.0f, 0.0f));
      for (int c = 0; c < 4; ++c) {
        const std::complex<double> w = bf.vectors[q][c];
        kernels::caxpy_f32(static_cast<float>(w.real()),
                           -static_cast<float>(w.imag()),  // conj(w) * x
                           reinterpret_cast<const float*>(mix.row(c, t)),
                           reinterpret_cast<float*>(acc.data()),
                           static_cast<std::size_t>(mix.bins));
      }
      kernels::cmag_f32(reinterpret_cast<const float*>(acc.data()),
                        out.row(q + 1, t), static_cast<std::size_t>(mix.bins));
    }
  }
  return out;
}

FeatureTensor normalize_sequence(const FeatureTensor& features) {
  FeatureTensor out = features;
  std::vector<float> peak(features.bins);
  for (int q = 1; q < features.features; ++q) {
    std::fill(peak.begin(), peak.end(), 0.0f);
    for (int t = 0; t < features.frames; ++t) {
      const float* row = features.row(q, t);
      for (int f = 0; f < features.bins; ++f)
        peak[f] = std::max(peak[f], row[f]);
    }
    for (int t = 0; t < features.frames; ++t) {
      float* row = out.row(q, t);
      for (int f = 0; f < features.bins; ++f)
        if (peak[f] > 0.0f) row[f] /= peak[f];
    }
  }
  return out;
}

FeatureTensor standardize(const FeatureTensor& features,
                          const FeatureStats& stats) {
  if (stats.features != features.features || stats.bins != features.bins)
    throw DataError("standardize: stats shape mismatch");
  FeatureTensor out = features;
  for (int q = 0; q < features.features; ++q) {
    for (int t = 0; t < features.frames; ++t) {
      float* row = out.row(q, t);
      for (int f = 0; f < features.bins; ++f)
        row[f] = (row[f] - stats.mean_at(q, f)) / stats.stddev_at(q, f);
    }
  }
  return out;
}

FeatureStats compute_stats(const std::vector<FeatureTensor>& dataset) {
  if (dataset.empty()) throw DataError("compute_stats: empty dataset");
  const int nq = dataset[0].features;
  const int nf = dataset[0].bins;
  FeatureStats stats;
  stats.features = nq;
  stats.bins = nf;
  const std::size_t planes = static_cast<std::size_t>(nq) * nf;
  std::vector<double> sum(planes, 0.0), sumsq(planes, 0.0);
  std::size_t frames = 0;
  for (const auto& ft : dataset) {
    if (ft.features != nq || ft.bins != nf)
      throw DataError("compute_stats: inconsistent tensor shapes");
    frames += static_cast<std::size_t>(ft.frames);
    for (int q = 0; q < nq; ++q) {
      for (int t = 0; t < ft.frames; ++t) {
        const float* row = ft.row(q, t);
        double* s = sum.data() + static_cast<std::size_t>(q) * nf;
        double* s2 = sumsq.data() + static_cast<std::size_t>(q) * nf;
        for (int f = 0; f < nf; ++f) {
          s[f] += row[f];
          s2[f] += static_cast<double>(row[f]) * row[f];
        }
      }
    }
  }
  if (frames == 0) throw DataError("compute_stats: no frames");
  stats.mean.resize(planes);
  stats.stddev.resize(planes);
  for (std::size_t i = 0; i < planes; ++i) {
    const double m = sum[i] / static_cast<double>(frames);
    const double var =
        std::max(0.0, sumsq[i] / static_cast<double>(frames) - m * m);
    stats.mean[i] = static_cast<float>(m);
    stats.stddev[i] = std::max(1e-8f, static_cast<float>(std::sqrt(var)));
  }
  return stats;
}

}  // namespace foamask::beamform
