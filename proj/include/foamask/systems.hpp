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
//
// Reference enhancement systems assembled from the core operators.  Each
// takes a 4-channel mixture spectrogram and returns a 1-channel estimate of
// the target's W component.

#ifndef FOAMASK_SYSTEMS_HPP_
#define FOAMASK_SYSTEMS_HPP_

#include "foamask/masks.hpp"
#include "foamask/scene.hpp"
#include "foamask/stft.hpp"
#include "foamask/unet.hpp"

namespace foamask::systems {

// w(f) = b_0 for every bin (the distortionless beamformer as an enhancer).
stft::Spectrogram beamformer_output(const stft::Spectrogram& mix,
                                    const scene::SceneSpec& spec);

// Mask -> masked covariances -> per-bin filter -> filtered W estimate.
stft::Spectrogram filter_with_mask(const stft::Spectrogram& mix,
                                   const masks::Mask& mask, bool gevd);

// Mask applied directly to the W channel, no spatial filtering.
stft::Spectrogram mask_w_channel(const stft::Spectrogram& mix,
                                 const masks::Mask& mask);

// Network mask for a scene whose DOAs come from its spec.
masks::Mask net_mask(unet::UNetModel& model, const stft::Spectrogram& mix,
                     const scene::SceneSpec& spec);

}  // namespace foamask::systems

#endif  // FOAMASK_SYSTEMS_HPP_
