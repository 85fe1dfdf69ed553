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

#ifndef FOAMASK_BEAMFORM_HPP_
#define FOAMASK_BEAMFORM_HPP_

#include <array>
#include <complex>
#include <vector>

#include "foamask/common.hpp"
#include "foamask/foa.hpp"
#include "foamask/stft.hpp"

namespace foamask::beamform {

// Pseudo-inverse beamformers b_0..b_K (target first, then interferers).
// Each satisfies b_i^H d_i = 1 and b_i^H d_j = 0 for j != i. The steering
// matrix condition number is kept for diagnostics.
struct BeamformerSet {
  std::vector<std::array<std::complex<double>, 4>> vectors;
  double condition_number = 1.0;
};

// Network input planes [feature][frame][bin]: |x_W| first, then one
// beamformer output magnitude per source.
struct FeatureTensor {
  int features = 0;
  int frames = 0;
  int bins = 0;
  std::vector<float> data;

  FeatureTensor() = default;
  FeatureTensor(int q, int t, int f)
      : features(q), frames(t), bins(f),
        data(static_cast<std::size_t>(q) * t * f, 0.0f) {}

  float* row(int q, int t) {
    return data.data() + (static_cast<std::size_t>(q) * frames + t) * bins;
  }
  const float* row(int q, int t) const {
    return data.data() + (static_cast<std::size_t>(q) * frames + t) * bins;
  }
  float& at(int q, int t, int f) { return row(q, t)[f]; }
  float at(int q, int t, int f) const { return row(q, t)[f]; }
};

// Per-feature, per-bin standardization parameters gathered over a training
// set (after per-sequence normalization).
struct FeatureStats {
  int features = 0;
  int bins = 0;
  std::vector<float> mean;    // [feature][bin]
  std::vector<float> stddev;  // [feature][bin], floored at 1e-8

  float mean_at(int q, int f) const { return mean[static_cast<std::size_t>(q) * bins + f]; }
  float stddev_at(int q, int f) const { return stddev[static_cast<std::size_t>(q) * bins + f]; }
};

// Rows of pinv([d_target d_i1 d_i2]) as beamformers. Throws NumericalError
// when the steering matrix is rank-deficient (coincident directions).
BeamformerSet build_beamformers(const foa::Direction& target,
                                const std::vector<foa::Direction>& interferers);

// Feature planes: |x_W|, then |b_i^H x| per beamformer.
FeatureTensor extract_features(const stft::Spectrogram& mix,
                               const BeamformerSet& bf);

// Divides every beamformed feature (planes 1..) by its per-bin maximum over
// the frames of the sequence. Zero-max bins pass through unchanged. |x_W| is
// left to standardization only.
FeatureTensor normalize_sequence(const FeatureTensor& features);

// (x - mean) / stddev per feature and bin.
FeatureTensor standardize(const FeatureTensor& features,
                          const FeatureStats& stats);

// Population statistics over all frames of all tensors.
FeatureStats compute_stats(const std::vector<FeatureTensor>& dataset);

}  // namespace foamask::beamform

#endif  // FOAMASK_BEAMFORM_HPP_
