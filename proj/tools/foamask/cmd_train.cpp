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

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "foamask/beamform.hpp"
#include "foamask/io.hpp"
#include "foamask/rng.hpp"
#include "foamask/unet.hpp"
#include "pipeline.hpp"

namespace foamask::cli {
namespace {

constexpr std::uint64_t kSplitStream = 0x5EED5EED5EED5EEDull;

struct TrainOptions {
  std::string data_dir;
  std::string out_path;
  std::string log_path;
  std::string state_path;  // default: <out>.state
  std::string resume_path;
  int depth = 3;
  int base_filters = 4;
  int seq_frames = 16;
  int freq_bins = 64;
  int features = 0;  // 0: derived from the dataset
  bool no_dilation = false;
  double lr = 1e-3;
  int epochs = 50;
  int patience = 5;
  int batch = 8;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
};

std::string epoch_line(int epoch, const unet::TrainLog::Epoch& e) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "epoch %d train_loss %.9f val_loss %.9f",
                epoch, e.train_loss, e.val_loss);
  return buf;
}

void run_train(const TrainOptions& opt) {
  const std::vector<std::string> manifests = find_scene_manifests(opt.data_dir);
  if (manifests.empty()) throw DataError("train: empty dataset");

  std::vector<scene::SceneOutput> scenes;
  scenes.reserve(manifests.size());
  for (const auto& path : manifests) scenes.push_back(load_scene(path));

  const std::size_t interferers = scenes[0].spec.interferers.size();
  for (const auto& sc : scenes) {
    if (sc.spec.interferers.size() != interferers)
      throw DataError("train: inconsistent feature counts across scenes");
  }
  const int derived_features = int(interferers) + 2;
  if (opt.features != 0 && opt.features != derived_features)
    throw ConfigError("train: --features " + std::to_string(opt.features) +
                      " does not match dataset (" +
                      std::to_string(derived_features) + ")");

  // Model: resumed training state, or a freshly seeded net.
  std::optional<io::LoadedCheckpoint> resumed;
  if (!opt.resume_path.empty()) {
    resumed = io::load_checkpoint(opt.resume_path);
    if (!resumed->state)
      throw DataError(opt.resume_path +
                      ": checkpoint has no training state to resume");
    if (resumed->model.config().input_features != derived_features)
      throw ConfigError("train: checkpoint expects " +
                        std::to_string(resumed->model.config().input_features) +
                        " features, dataset provides " +
                        std::to_string(derived_features));
  }
  unet::UNetConfig cfg;
  if (resumed) {
    cfg = resumed->model.config();
  } else {
    cfg.depth = opt.depth;
    cfg.base_filters = opt.base_filters;
    cfg.seq_frames = opt.seq_frames;
    cfg.freq_bins_net = opt.freq_bins;
    cfg.input_features = derived_features;
    cfg.dilated = !opt.no_dilation;
    cfg.validate();
  }

  // Scene-level train/validation split, derived from (seed, scene count)
  // only, so resumed runs see the identical split.
  std::vector<std::size_t> order(scenes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng split_rng(opt.seed ^ kSplitStream);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[split_rng.uniform_index(i)]);
  std::size_t val_scenes = std::size_t(opt.val_fraction * double(scenes.size()) + 0.5);
  val_scenes = std::max<std::size_t>(1, std::min(val_scenes, scenes.size() - 1));
  if (scenes.size() < 2)
    throw DataError("train: need at least 2 scenes (train/validation split)");

  std::vector<unet::TrainSample> train_set, val_set;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto seqs = unet::scene_sequences(scenes[order[k]], cfg);
    auto& dst = k < val_scenes ? val_set : train_set;
    for (auto& s : seqs) dst.push_back(std::move(s));
  }
  if (train_set.empty() || val_set.empty())
    throw DataError("train: scenes too short for seq_frames windows");

  unet::UNetModel model = resumed ? std::move(resumed->model)
                                  : unet::UNetModel(cfg, opt.seed);
  if (!resumed) {
    std::vector<beamform::FeatureTensor> feats;
    feats.reserve(train_set.size());
    for (const auto& s : train_set) feats.push_back(s.features);
    model.stats = beamform::compute_stats(feats);
  }
  for (auto& s : train_set)
    s.features = beamform::standardize(s.features, model.stats);
  for (auto& s : val_set)
    s.features = beamform::standardize(s.features, model.stats);

  unet::TrainSpec spec;
  spec.lr = opt.lr;
  spec.max_epochs = opt.epochs;
  spec.patience = opt.patience;
  spec.batch_size = opt.batch;
  spec.seed = opt.seed;

  unet::TrainState state = resumed ? *resumed->state : unet::TrainState{};
  unet::TrainLog log;
  const std::string state_path =
      opt.state_path.empty() ? opt.out_path + ".state" : opt.state_path;

  std::vector<std::string> lines;
  auto flush_log = [&](int best_epoch, bool done) {
    if (opt.log_path.empty()) return;
    std::ostringstream out;
    out << "# foamask training log\n";
    out << "# scenes " << scenes.size() << " train_sequences "
        << train_set.size() << " val_sequences " << val_set.size() << "\n";
    for (const auto& l : lines) out << l << "\n";
    if (done) out << "best_epoch " << best_epoch << "\n";
    io::atomic_write_bytes(opt.log_path, out.str());
  };

  const int first_epoch = state.next_epoch;
  unet::train_epochs(
      model, train_set, val_set, spec, &state, &log,
      [&](const unet::TrainState& st, const unet::TrainLog& lg) {
        const int epoch = st.next_epoch - 1;
        const std::string line =
            epoch_line(epoch, lg.epochs[std::size_t(epoch - first_epoch)]);
        lines.push_back(line);
        std::cout << line << "\n";
        flush_log(st.best_epoch, false);
        io::save_checkpoint(state_path, model, &st);
      });

  if (!state.best.empty()) unet::restore_params(model, state.best);
  io::save_checkpoint(opt.out_path, model);
  flush_log(state.best_epoch, true);
  std::cout << "best_epoch " << state.best_epoch << "\n"
            << opt.out_path << "\n";
}

}  // namespace

void register_cmd_train(CLI::App& app) {
  auto opt = std::make_shared<TrainOptions>();
  CLI::App* cmd = app.add_subcommand(
      "train", "Train the mask estimator on a directory of simulated scenes");
  cmd->add_option("--data", opt->data_dir, "Scene dataset directory")
      ->required();
  cmd->add_option("--out", opt->out_path, "Checkpoint output path")
      ->required();
  cmd->add_option("--log", opt->log_path, "Per-epoch loss log path");
  cmd->add_option("--state", opt->state_path,
                  "Training-state checkpoint path (default <out>.state)");
  cmd->add_option("--resume", opt->resume_path,
                  "Resume from a training-state checkpoint");
  cmd->add_option("--depth", opt->depth, "Encoder depth");
  cmd->add_option("--base-filters", opt->base_filters, "Stage-0 channels");
  cmd->add_option("--seq-frames", opt->seq_frames, "Frames per sequence");
  cmd->add_option("--freq-bins", opt->freq_bins, "Network frequency bins");
  cmd->add_option("--features", opt->features,
                  "Input feature planes (default: derived from dataset)");
  cmd->add_flag("--no-dilation", opt->no_dilation,
                "Plain convolutions instead of dilated ones");
  cmd->add_option("--lr", opt->lr, "Learning rate");
  cmd->add_option("--epochs", opt->epochs, "Max epochs");
  cmd->add_option("--patience", opt->patience, "Early-stopping patience");
  cmd->add_option("--batch", opt->batch, "Batch size");
  cmd->add_option("--val-fraction", opt->val_fraction,
                  "Fraction of scenes held out for validation");
  cmd->add_option("--seed", opt->seed, "Training seed");
  cmd->callback([opt] { run_train(*opt); });
}

}  // namespace foamask::cli
