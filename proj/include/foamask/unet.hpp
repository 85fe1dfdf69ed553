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

#ifndef FOAMASK_UNET_HPP_
#define FOAMASK_UNET_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "foamask/beamform.hpp"
#include "foamask/common.hpp"
#include "foamask/masks.hpp"
#include "foamask/rng.hpp"
#include "foamask/scene.hpp"
#include "foamask/stft.hpp"
#include "foamask/unet_net.hpp"

namespace foamask::unet {

// Float model plus everything that ships in a checkpoint: feature
// standardization stats and the optimizer state.
class UNetModel {
 public:
  struct OptState {
    std::vector<std::vector<float>> m, v;  // per trainable parameter
    long long step = 0;
  };

  UNetModel(const UNetConfig& config, uint64_t seed);

  const UNetConfig& config() const { return net.cfg; }

  // Single-sequence forward, input [features][seq_frames][freq_bins_net].
  masks::Mask forward(const beamform::FeatureTensor& input, bool train);

  Net<float> net;
  beamform::FeatureStats stats;  // empty bins until training attaches them
  OptState opt;
  Rng dropout_rng{0};
};

struct TrainSpec {
  double lr = 1e-3;
  int max_epochs = 50;
  int patience = 5;
  int batch_size = 8;
  uint64_t seed = 0;

  void validate() const;
};

// One training sequence: normalized+standardized features and the matching
// oracle mask slice, both at network resolution.
struct TrainSample {
  beamform::FeatureTensor features;
  masks::Mask target;
};

struct TrainLog {
  struct Epoch {
    double train_loss = 0.0;
    double val_loss = 0.0;
  };
  std::vector<Epoch> epochs;
  int best_epoch = -1;
};

// Early-stopping bookkeeping that outlives a single call, so runs can be
// checkpointed after any epoch and resumed bit-exactly.
struct TrainState {
  int next_epoch = 0;
  int stall = 0;
  int best_epoch = -1;
  double best_val = 0.0;
  std::vector<std::vector<float>> best;  // every tensor, incl. running stats
};

using EpochHook = std::function<void(const TrainState&, const TrainLog&)>;

// Nesterov-Adam update from the accumulated gradients (beta1 0.9, beta2
// 0.999, eps 1e-8, bias-corrected lookahead first moment). Rejects
// non-finite gradients without touching the model.
void nadam_step(UNetModel& model, double lr);

// Runs epochs [state.next_epoch, spec.max_epochs); shuffle and dropout
// streams are derived from (seed, epoch) so the schedule is independent of
// history. Appends per-epoch losses to the log, calls on_epoch after each
// epoch, stops early once state.stall reaches spec.patience. The model is
// left at the last epoch; state.best holds the best-validation snapshot.
void train_epochs(UNetModel& model, const std::vector<TrainSample>& train_set,
                  const std::vector<TrainSample>& val_set,
                  const TrainSpec& spec, TrainState* state, TrainLog* log,
                  const EpochHook& on_epoch = {});

// Mini-batch training with seeded shuffling, per-epoch validation and early
// stopping; the best-validation parameters are restored on return.
TrainLog train(UNetModel& model, const std::vector<TrainSample>& train_set,
               const std::vector<TrainSample>& val_set, const TrainSpec& spec);

// Copies every parameter tensor (including running stats) in or out.
std::vector<std::vector<float>> snapshot_params(const UNetModel& model);
void restore_params(UNetModel& model,
                    const std::vector<std::vector<float>>& snap);

// Full enhancement front half: beamformer features for the known DOAs,
// per-window normalization and standardization, windowed forward passes,
// and reassembly to the mixture's (T, bins) grid with the Nyquist bin
// replicated from the bin below.
masks::Mask infer_mask(UNetModel& model, const stft::Spectrogram& mix,
                       const foa::Direction& target,
                       const std::vector<foa::Direction>& interferers);

// Scene -> per-sequence features (Eq. 8-9 applied, Nyquist dropped) and mask
// slices. Standardization is left to the caller, who owns dataset stats.
std::vector<TrainSample> scene_sequences(const scene::SceneOutput& sc,
                                         const UNetConfig& config);

// Trainable parameter count for a config.
std::size_t param_count(const UNetConfig& config);

// Per-stage activation shapes, for architecture checks.
struct StageShape {
  std::string name;
  int channels = 0;
  int frames = 0;
  int bins = 0;
};
std::vector<StageShape> shape_trace(const UNetConfig& config);

}  // namespace foamask::unet

#endif  // FOAMASK_UNET_HPP_
