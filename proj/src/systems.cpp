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

#include "foamask/systems.hpp"

#include <vector>

#include "foamask/beamform.hpp"
#include "foamask/mwf.hpp"

namespace foamask::systems {
namespace {

std::vector<foa::Direction> interferer_dirs(const scene::SceneSpec& spec) {
  std::vector<foa::Direction> dirs;
  for (const auto& s : spec.interferers) dirs.push_back(s.direction);
  return dirs;
}

}  // namespace

stft::Spectrogram beamformer_output(const stft::Spectrogram& mix,
                                    const scene::SceneSpec& spec) {
  const beamform::BeamformerSet bf = beamform::build_beamformers(
      spec.target.direction, interferer_dirs(spec));
  mwf::FilterWeights w;
  w.w.assign(size_t(mix.bins), bf.vectors[0]);
  w.fallback.assign(size_t(mix.bins), 0);
  return mwf::apply_filter(mix, w);
}

stft::Spectrogram filter_with_mask(const stft::Spectrogram& mix,
                                   const masks::Mask& mask, bool gevd) {
  const mwf::CovariancePair cov = mwf::masked_covariances(mix, mask);
  const mwf::FilterWeights w =
      gevd ? mwf::gevd_rank1_filter(cov) : mwf::mwf_filter(cov);
  return mwf::apply_filter(mix, w);
}

stft::Spectrogram mask_w_channel(const stft::Spectrogram& mix,
                                 const masks::Mask& mask) {
  return masks::apply_mask(mix.channel(0), mask);
}

masks::Mask net_mask(unet::UNetModel& model, const stft::Spectrogram& mix,
                     const scene::SceneSpec& spec) {
  return unet::infer_mask(model, mix, spec.target.direction,
                          interferer_dirs(spec));
}

}  // namespace foamask::systems
