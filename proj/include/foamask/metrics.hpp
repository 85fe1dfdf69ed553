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

#ifndef FOAMASK_METRICS_HPP_
#define FOAMASK_METRICS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "foamask/common.hpp"
#include "foamask/masks.hpp"
#include "foamask/scene.hpp"
#include "foamask/stft.hpp"

namespace foamask::metrics {

// Scale-invariant SDR in dB, clamped to [-60, +60]. Throws DataError on
// length mismatch or an all-zero reference.
double si_sdr(const Channel& estimate, const Channel& reference);

// Mean squared difference.
double mask_mse(const masks::Mask& predicted, const masks::Mask& oracle);

// What an enhancement system produces for one scene: a 1-channel enhanced
// spectrogram, plus the mask it used when one exists (for mask MSE).
struct SystemOutput {
  stft::Spectrogram enhanced;
  std::optional<masks::Mask> mask;
};
using System = std::function<SystemOutput(const scene::SceneOutput&)>;

struct EvalReport {
  struct Group {
    int speakers = 0;
    int separation_deg = 0;  // min pairwise separation, rounded
    int scenes = 0;
    double si_sdr_db = 0.0;
    double si_sdr_improvement_db = 0.0;
  };

  double si_sdr_db = 0.0;              // mean over scenes, enhanced
  double si_sdr_mixture_db = 0.0;      // mean over scenes, unprocessed W
  double si_sdr_improvement_db = 0.0;  // enhanced minus mixture
  std::optional<double> mask_mse;      // mean, when the system emits masks
  std::vector<Group> groups;           // keyed by (speakers, separation)
};

// Runs the system over every scene and aggregates time-domain SI-SDR against
// the target image's W channel, trimmed to the STFT-interior region.
EvalReport evaluate_pipeline(const std::vector<scene::SceneOutput>& scenes,
                             const System& system);

}  // namespace foamask::metrics

#endif  // FOAMASK_METRICS_HPP_
