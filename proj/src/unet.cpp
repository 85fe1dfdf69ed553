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

#include "foamask/unet.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace foamask::unet {

void UNetConfig::validate() const {
  if (depth < 2) throw ConfigError("unet: depth must be >= 2");
  if (base_filters < 1) throw ConfigError("unet: base_filters must be >= 1");
  if (kernel_t < 1 || kernel_t % 2 == 0 || kernel_f < 1 || kernel_f % 2 == 0)
    throw ConfigError("unet: kernel sizes must be odd and positive");
  if (pool_freq != 2) throw ConfigError("unet: pool_freq must be 2");
  if (input_features != 3 && input_features != 4)
    throw ConfigError("unet: input_features must be 3 or 4");
  if (seq_frames < 1) throw ConfigError("unet: seq_frames must be >= 1");
  if (dropout < 0.0f || dropout >= 1.0f)
    throw ConfigError("unet: dropout must be in [0, 1)");
  int div = 1;
  for (int b = 1; b < depth; ++b) div *= pool_freq;
  if (freq_bins_net < div || freq_bins_net % div != 0)
    throw ConfigError("unet: freq_bins_net " + std::to_string(freq_bins_net) +
                      " not divisible by " + std::to_string(div));
  if (!dilation_schedule.empty()) {
    if (static_cast<int>(dilation_schedule.size()) != depth)
      throw ConfigError("unet: dilation schedule must list one rate per block");
    if (dilation_schedule[0] < 1)
      throw ConfigError("unet: dilation rates must be positive");
    for (std::size_t i = 1; i < dilation_schedule.size(); ++i)
      if (dilation_schedule[i] != 2 * dilation_schedule[i - 1])
        throw ConfigError("unet: dilation rates must double per block");
  }
}

int UNetConfig::dilation_at(int block) const {
  if (!dilated) return 1;
  if (dilation_schedule.empty()) return 1 << block;
  return dilation_schedule[static_cast<std::size_t>(block)];
}

UNetConfig UNetConfig::paper() { return UNetConfig{}; }

UNetConfig UNetConfig::desk() {
  UNetConfig c;
  c.depth = 3;
  c.base_filters = 4;
  c.input_features = 3;
  c.seq_frames = 16;
  c.freq_bins_net = 64;
  return c;
}

namespace {

Tensor<float> to_tensor(const beamform::FeatureTensor& ft) {
  Tensor<float> x(1, ft.features, ft.frames, ft.bins);
  std::copy(ft.data.begin(), ft.data.end(), x.v.begin());
  return x;
}

masks::Mask to_mask(const Tensor<float>& y) {
  masks::Mask m(y.t, y.f);
  std::copy(y.v.begin(), y.v.end(), m.data.begin());
  return m;
}

constexpr uint64_t kDropoutStream = 0x7A9E1C0FFEEDBEEFull;

}  // namespace

UNetModel::UNetModel(const UNetConfig& config, uint64_t seed)
    : net(config, seed), dropout_rng(seed ^ kDropoutStream) {
  for (const auto& p : net.ps.items) {
    if (!p.trainable) continue;
    opt.m.emplace_back(p.w.size(), 0.0f);
    opt.v.emplace_back(p.w.size(), 0.0f);
  }
}

masks::Mask UNetModel::forward(const beamform::FeatureTensor& input,
                               bool train) {
  return to_mask(net.forward(to_tensor(input), train, &dropout_rng));
}

void TrainSpec::validate() const {
  if (!(lr > 0.0)) throw ConfigError("train: lr must be positive");
  if (max_epochs < 1) throw ConfigError("train: max_epochs must be >= 1");
  if (patience < 1) throw ConfigError("train: patience must be >= 1");
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
}

void nadam_step(UNetModel& model, double lr) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  auto& ps = model.net.ps;
  std::size_t slot = 0;
  for (const auto& p : ps.items) {
    if (!p.trainable) continue;
    for (float g : p.g)
      if (!std::isfinite(g))
        throw NumericalError("nadam_step: non-finite gradient in '" + p.name +
                             "'");
    ++slot;
  }
  const long long t = model.opt.step + 1;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t));
  slot = 0;
  for (auto& p : ps.items) {
    if (!p.trainable) continue;
    auto& m = model.opt.m[slot];
    auto& v = model.opt.v[slot];
    for (std::size_t i = 0; i < p.w.size(); ++i) {
      const double g = static_cast<double>(p.g[i]);
      const double mi = kBeta1 * m[i] + (1.0 - kBeta1) * g;
      const double vi = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
      m[i] = static_cast<float>(mi);
      v[i] = static_cast<float>(vi);
      // Nesterov lookahead on the bias-corrected first moment
      const double mbar = kBeta1 * (mi / bc1) + (1.0 - kBeta1) * g / bc1;
      p.w[i] = static_cast<float>(p.w[i] -
                                  lr * mbar / (std::sqrt(vi / bc2) + kEps));
    }
    ++slot;
  }
  model.opt.step = t;
}

namespace {

void check_sample(const TrainSample& s, const UNetConfig& cfg) {
  if (s.features.features != cfg.input_features ||
      s.features.frames != cfg.seq_frames ||
      s.features.bins != cfg.freq_bins_net)
    throw DataError("train: sample feature shape mismatch");
  if (s.target.frames != cfg.seq_frames || s.target.bins != cfg.freq_bins_net)
    throw DataError("train: sample mask shape mismatch");
}

// Batch [count] samples starting at `order[first]` into (x, y) tensors.
void fill_batch(const std::vector<TrainSample>& set,
                const std::vector<std::size_t>& order, std::size_t first,
                int count, const UNetConfig& cfg, Tensor<float>* x,
                Tensor<float>* y) {
  x->resize(count, cfg.input_features, cfg.seq_frames, cfg.freq_bins_net);
  y->resize(count, 1, cfg.seq_frames, cfg.freq_bins_net);
  const std::size_t xs = x->v.size() / static_cast<std::size_t>(count);
  const std::size_t ys = y->v.size() / static_cast<std::size_t>(count);
  for (int n = 0; n < count; ++n) {
    const TrainSample& s = set[order[first + static_cast<std::size_t>(n)]];
    std::copy(s.features.data.begin(), s.features.data.end(),
              x->v.begin() + static_cast<std::size_t>(n) * xs);
    std::copy(s.target.data.begin(), s.target.data.end(),
              y->v.begin() + static_cast<std::size_t>(n) * ys);
  }
}

double eval_set(UNetModel& model, const std::vector<TrainSample>& set,
                int batch_size) {
  std::vector<std::size_t> order(set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Tensor<float> x, y;
  double acc = 0.0;
  std::size_t seen = 0;
  for (std::size_t first = 0; first < set.size();
       first += static_cast<std::size_t>(batch_size)) {
    const int count = static_cast<int>(
        std::min<std::size_t>(batch_size, set.size() - first));
    fill_batch(set, order, first, count, model.config(), &x, &y);
    const Tensor<float> pred = model.net.forward(x, false, nullptr);
    acc += Net<float>::mse(pred, y) * static_cast<double>(count);
    seen += static_cast<std::size_t>(count);
  }
  return acc / static_cast<double>(seen);
}

}  // namespace

std::vector<std::vector<float>> snapshot_params(const UNetModel& model) {
  std::vector<std::vector<float>> snap;
  snap.reserve(model.net.ps.items.size());
  for (const auto& p : model.net.ps.items) snap.push_back(p.w);
  return snap;
}

void restore_params(UNetModel& model,
                    const std::vector<std::vector<float>>& snap) {
  if (snap.size() != model.net.ps.items.size())
    throw DataError("restore_params: tensor count mismatch");
  for (std::size_t i = 0; i < snap.size(); ++i) {
    if (snap[i].size() != model.net.ps.items[i].w.size())
      throw DataError("restore_params: tensor size mismatch at " +
                      model.net.ps.items[i].name);
    model.net.ps.items[i].w = snap[i];
  }
}

void train_epochs(UNetModel& model, const std::vector<TrainSample>& train_set,
                  const std::vector<TrainSample>& val_set,
                  const TrainSpec& spec, TrainState* state, TrainLog* log,
                  const EpochHook& on_epoch) {
  spec.validate();
  if (train_set.empty() || val_set.empty())
    throw DataError("train: empty dataset");
  const UNetConfig& cfg = model.config();
  for (const auto& s : train_set) check_sample(s, cfg);
  for (const auto& s : val_set) check_sample(s, cfg);

  std::vector<std::size_t> order(train_set.size());
  Tensor<float> x, y;

  for (int epoch = state->next_epoch; epoch < spec.max_epochs; ++epoch) {
    const uint64_t tick = 0x9E3779B97F4A7C15ull * uint64_t(epoch + 1);
    Rng shuffle_rng(spec.seed ^ tick);
    model.dropout_rng = Rng(spec.seed ^ kDropoutStream ^ tick);

    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = shuffle_rng.uniform_index(i);
      std::swap(order[i - 1], order[j]);
    }
    double train_acc = 0.0;
    std::size_t seen = 0;
    for (std::size_t first = 0; first < order.size();
         first += static_cast<std::size_t>(spec.batch_size)) {
      const int count = static_cast<int>(
          std::min<std::size_t>(spec.batch_size, order.size() - first));
      fill_batch(train_set, order, first, count, cfg, &x, &y);
      model.net.ps.zero_grad();
      const Tensor<float> pred =
          model.net.forward(x, true, &model.dropout_rng);
      const double loss = model.net.loss_backward(pred, y);
      nadam_step(model, spec.lr);
      train_acc += loss * count;
      seen += static_cast<std::size_t>(count);
    }

    TrainLog::Epoch e;
    e.train_loss = train_acc / static_cast<double>(seen);
    e.val_loss = eval_set(model, val_set, spec.batch_size);
    log->epochs.push_back(e);
    state->next_epoch = epoch + 1;

    bool stop = false;
    if (state->best_epoch < 0 || e.val_loss < state->best_val) {
      state->best_val = e.val_loss;
      state->best_epoch = epoch;
      state->best = snapshot_params(model);
      state->stall = 0;
    } else if (++state->stall >= spec.patience) {
      stop = true;
    }
    log->best_epoch = state->best_epoch;
    if (on_epoch) on_epoch(*state, *log);
    if (stop) break;
  }
}

TrainLog train(UNetModel& model, const std::vector<TrainSample>& train_set,
               const std::vector<TrainSample>& val_set,
               const TrainSpec& spec) {
  TrainState state;
  TrainLog log;
  train_epochs(model, train_set, val_set, spec, &state, &log);
  if (!state.best.empty()) restore_params(model, state.best);
  return log;
}

masks::Mask infer_mask(UNetModel& model, const stft::Spectrogram& mix,
                       const foa::Direction& target,
                       const std::vector<foa::Direction>& interferers) {
  const UNetConfig& cfg = model.config();
  const int want_interferers = cfg.input_features - 2;
  if (static_cast<int>(interferers.size()) != want_interferers)
    throw ConfigError("infer_mask: model expects " +
                      std::to_string(want_interferers) +
                      " interferer direction(s), got " +
                      std::to_string(interferers.size()));
  if (mix.channels != 4)
    throw DataError("infer_mask: expected 4-channel mixture");
  if (mix.bins != cfg.freq_bins_net + 1)
    throw DataError("infer_mask: model expects " +
                    std::to_string(cfg.freq_bins_net + 1) + " bins, got " +
                    std::to_string(mix.bins));
  if (mix.frames < 1) throw DataError("infer_mask: empty mixture");

  const beamform::BeamformerSet bf =
      beamform::build_beamformers(target, interferers);
  const beamform::FeatureTensor full = beamform::extract_features(mix, bf);
  const int nt = full.frames;
  const int nf = cfg.freq_bins_net;
  const int seq = cfg.seq_frames;

  masks::Mask out(nt, mix.bins);
  beamform::FeatureTensor win(full.features, seq, nf);
  // source frame index per window row; the final partial window is
  // left-padded by repeating its first live frame
  auto run_window = [&](int start, int live_from) {
    for (int r = 0; r < seq; ++r) {
      const int src = std::max(start + r, live_from);
      for (int q = 0; q < full.features; ++q)
        std::copy(full.row(q, src), full.row(q, src) + nf, win.row(q, r));
    }
    beamform::FeatureTensor prep = normalize_sequence(win);
    if (model.stats.bins > 0) prep = standardize(prep, model.stats);
    const masks::Mask m = model.forward(prep, false);
    for (int r = 0; r < seq; ++r) {
      const int dst = start + r;
      if (dst < live_from || dst >= nt) continue;
      std::copy(m.row(r), m.row(r) + nf, out.row(dst));
      out.at(dst, nf) = m.at(r, nf - 1);  // Nyquist replicated
    }
  };

  const int whole = nt / seq;
  for (int w = 0; w < whole; ++w) run_window(w * seq, w * seq);
  const int rem = nt - whole * seq;
  if (rem > 0) run_window(nt - seq, whole * seq);
  return out;
}

std::vector<TrainSample> scene_sequences(const scene::SceneOutput& sc,
                                         const UNetConfig& config) {
  const int want_interferers = config.input_features - 2;
  if (static_cast<int>(sc.spec.interferers.size()) != want_interferers)
    throw DataError("scene_sequences: scene has " +
                    std::to_string(sc.spec.interferers.size()) +
                    " interferer(s), config expects " +
                    std::to_string(want_interferers));
  if (sc.mixture.bins != config.freq_bins_net + 1)
    throw DataError("scene_sequences: scene has " +
                    std::to_string(sc.mixture.bins) +
                    " bins, network wants freq_bins_net + 1 = " +
                    std::to_string(config.freq_bins_net + 1) +
                    " (frame_len " + std::to_string(2 * config.freq_bins_net) +
                    ")");

  std::vector<foa::Direction> idirs;
  for (const auto& s : sc.spec.interferers) idirs.push_back(s.direction);
  const beamform::BeamformerSet bf =
      beamform::build_beamformers(sc.spec.target.direction, idirs);
  const beamform::FeatureTensor full =
      beamform::extract_features(sc.mixture, bf);

  const int nf = config.freq_bins_net;
  const int seq = config.seq_frames;
  std::vector<TrainSample> samples;
  for (int start = 0; start + seq <= full.frames; start += seq) {
    TrainSample s;
    s.features = beamform::FeatureTensor(full.features, seq, nf);
    s.target = masks::Mask(seq, nf);
    for (int r = 0; r < seq; ++r) {
      for (int q = 0; q < full.features; ++q)
        std::copy(full.row(q, start + r), full.row(q, start + r) + nf,
                  s.features.row(q, r));
      std::copy(sc.oracle_mask.row(start + r),
                sc.oracle_mask.row(start + r) + nf, s.target.row(r));
    }
    s.features = normalize_sequence(s.features);
    samples.push_back(std::move(s));
  }
  return samples;
}

std::size_t param_count(const UNetConfig& config) {
  Net<float> net(config, 0);
  return net.ps.trainable_count();
}

std::vector<StageShape> shape_trace(const UNetConfig& config) {
  config.validate();
  std::vector<StageShape> trace;
  const int t = config.seq_frames;
  int f = config.freq_bins_net;
  trace.push_back({"input", config.input_features, t, f});
  for (int b = 0; b < config.depth; ++b) {
    const int ch = config.base_filters << b;
    trace.push_back({"enc" + std::to_string(b), ch, t, f});
    if (b != config.depth - 1) {
      f /= config.pool_freq;
      trace.push_back({"enc" + std::to_string(b) + ".pool", ch, t, f});
    }
  }
  for (int k = 0; k < config.depth - 1; ++k) {
    const int d = config.depth - 2 - k;
    const int ch = config.base_filters << d;
    f *= config.pool_freq;
    trace.push_back({"dec" + std::to_string(k) + ".up", ch, t, f});
    trace.push_back({"dec" + std::to_string(k), ch, t, f});
  }
  trace.push_back({"head", 1, t, f});
  return trace;
}

}  // namespace foamask::unet
