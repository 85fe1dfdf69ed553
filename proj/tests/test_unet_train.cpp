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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "foamask/rng.hpp"
#include "foamask/scene.hpp"
#include "foamask/signal.hpp"
#include "foamask/unet.hpp"
#include "helpers.hpp"

using namespace foamask;
using unet::TrainSample;
using unet::TrainSpec;
using unet::UNetConfig;
using unet::UNetModel;

namespace {

UNetConfig tiny() {
  UNetConfig cfg;
  cfg.depth = 2;
  cfg.base_filters = 2;
  cfg.input_features = 3;
  cfg.seq_frames = 4;
  cfg.freq_bins_net = 8;
  cfg.dropout = 0.0f;
  return cfg;
}

std::vector<TrainSample> toy_samples(Rng& rng, const UNetConfig& cfg, int n,
                                     float mask_value) {
  std::vector<TrainSample> out;
  for (int k = 0; k < n; ++k) {
    TrainSample s;
    s.features = beamform::FeatureTensor(cfg.input_features, cfg.seq_frames,
                                         cfg.freq_bins_net);
    for (auto& v : s.features.data) v = static_cast<float>(rng.gaussian());
    s.target = masks::Mask(cfg.seq_frames, cfg.freq_bins_net);
    for (auto& v : s.target.data) v = mask_value;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_SUITE("unet_train") {

TEST_CASE("nadam_step matches a scalar reimplementation, bitwise") {
  UNetModel model(tiny(), 17);
  // Deterministic synthetic gradients and pre-seeded moments.
  int tick = 0;
  for (auto& p : model.net.ps.items) {
    if (!p.trainable) continue;
    for (auto& g : p.g) g = 0.01f * static_cast<float>((tick++ % 13) - 6);
  }
  std::vector<std::vector<float>> w0, g0, m0, v0;
  std::size_t slot = 0;
  for (const auto& p : model.net.ps.items) {
    if (!p.trainable) continue;
    w0.push_back(p.w);
    g0.push_back(p.g);
    m0.push_back(model.opt.m[slot]);
    v0.push_back(model.opt.v[slot]);
    ++slot;
  }
  const double lr = 3e-3;
  const long long step0 = model.opt.step;
  unet::nadam_step(model, lr);
  CHECK(model.opt.step == step0 + 1);

  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const double t = static_cast<double>(step0 + 1);
  const double bc1 = 1.0 - std::pow(b1, t);
  const double bc2 = 1.0 - std::pow(b2, t);
  slot = 0;
  for (const auto& p : model.net.ps.items) {
    if (!p.trainable) continue;
    for (std::size_t i = 0; i < p.w.size(); ++i) {
      const double g = static_cast<double>(g0[slot][i]);
      const double mi = b1 * m0[slot][i] + (1.0 - b1) * g;
      const double vi = b2 * v0[slot][i] + (1.0 - b2) * g * g;
      const double mbar = b1 * (mi / bc1) + (1.0 - b1) * g / bc1;
      const float want = static_cast<float>(
          w0[slot][i] - lr * mbar / (std::sqrt(vi / bc2) + eps));
      CHECK(p.w[i] == want);
      CHECK(model.opt.m[slot][i] == static_cast<float>(mi));
      CHECK(model.opt.v[slot][i] == static_cast<float>(vi));
    }
    ++slot;
  }
}

TEST_CASE("nadam_step applies bias correction on later steps too") {
  UNetModel model(tiny(), 18);
  for (auto& p : model.net.ps.items)
    if (p.trainable)
      for (auto& g : p.g) g = 0.05f;
  unet::nadam_step(model, 1e-3);
  // Second step with fresh gradients; verify against the recurrence.
  for (auto& p : model.net.ps.items)
    if (p.trainable)
      for (auto& g : p.g) g = -0.02f;
  const float m_before = model.opt.m[0][0];
  const float v_before = model.opt.v[0][0];
  const float w_before = model.net.ps.items[0].w[0];
  unet::nadam_step(model, 1e-3);
  CHECK(model.opt.step == 2);
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const double bc1 = 1.0 - std::pow(b1, 2.0);
  const double bc2 = 1.0 - std::pow(b2, 2.0);
  const double g = -0.02f;
  const double mi = b1 * m_before + (1.0 - b1) * g;
  const double vi = b2 * v_before + (1.0 - b2) * g * g;
  const double mbar = b1 * (mi / bc1) + (1.0 - b1) * g / bc1;
  const float want = static_cast<float>(
      w_before - 1e-3 * mbar / (std::sqrt(vi / bc2) + eps));
  CHECK(model.net.ps.items[0].w[0] == want);
}

TEST_CASE("nadam_step rejects non-finite gradients without touching state") {
  UNetModel model(tiny(), 19);
  for (auto& p : model.net.ps.items)
    if (p.trainable)
      for (auto& g : p.g) g = 0.01f;
  model.net.ps.items[0].g[0] = std::numeric_limits<float>::quiet_NaN();
  const auto w0 = unet::snapshot_params(model);
  const auto m0 = model.opt.m;
  CHECK_THROWS_AS(unet::nadam_step(model, 1e-3), NumericalError);
  CHECK(model.opt.step == 0);
  CHECK(model.opt.m == m0);
  const auto w1 = unet::snapshot_params(model);
  CHECK(w0 == w1);
}

TEST_CASE("snapshot and restore round-trip every tensor") {
  UNetModel model(tiny(), 20);
  const auto snap = unet::snapshot_params(model);
  for (auto& p : model.net.ps.items)
    for (auto& w : p.w) w += 1.0f;
  unet::restore_params(model, snap);
  CHECK(unet::snapshot_params(model) == snap);
  auto bad = snap;
  bad.pop_back();
  CHECK_THROWS_AS(unet::restore_params(model, bad), DataError);
}

TEST_CASE("training fits a constant-mask toy task") {
  Rng rng(901);
  const UNetConfig cfg = tiny();
  UNetModel model(cfg, 22);
  const auto train_set = toy_samples(rng, cfg, 6, 0.8f);
  const auto val_set = toy_samples(rng, cfg, 2, 0.8f);
  TrainSpec spec;
  spec.lr = 2e-2;
  spec.max_epochs = 60;
  spec.patience = 60;
  spec.batch_size = 3;
  spec.seed = 5;
  const unet::TrainLog log = unet::train(model, train_set, val_set, spec);
  REQUIRE(!log.epochs.empty());
  // Constant-0.5 output would score (0.8-0.5)^2; the fit must beat it well.
  const double baseline = 0.09;
  CHECK(log.epochs[log.best_epoch].val_loss < 0.25 * baseline);
  CHECK(log.epochs.back().train_loss < log.epochs.front().train_loss);
}

TEST_CASE("train restores the best-validation parameters") {
  Rng rng(902);
  const UNetConfig cfg = tiny();
  UNetModel model(cfg, 23);
  const auto train_set = toy_samples(rng, cfg, 6, 0.7f);
  const auto val_set = toy_samples(rng, cfg, 2, 0.7f);
  TrainSpec spec;
  spec.lr = 5e-3;
  spec.max_epochs = 12;
  spec.patience = 12;
  spec.batch_size = 4;
  spec.seed = 6;
  const unet::TrainLog log = unet::train(model, train_set, val_set, spec);
  // Re-evaluate the restored model on the validation set; it must score the
  // recorded best loss (modulo double summation order across batches).
  double acc = 0.0;
  std::size_t n = 0;
  for (const auto& s : val_set) {
    const masks::Mask m = model.forward(s.features, false);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      const double d =
          static_cast<double>(m.data[i]) - s.target.data[i];
      acc += d * d;
      ++n;
    }
  }
  const double val = acc / static_cast<double>(n);
  CHECK(val == doctest::Approx(log.epochs[log.best_epoch].val_loss)
                   .epsilon(1e-10));
}

TEST_CASE("early stopping tracks the strict running minimum") {
  Rng rng(903);
  const UNetConfig cfg = tiny();
  UNetModel model(cfg, 24);
  const auto train_set = toy_samples(rng, cfg, 4, 0.6f);
  const auto val_set = toy_samples(rng, cfg, 2, 0.6f);
  TrainSpec spec;
  spec.lr = 0.5;  // deliberately unstable so validation bounces
  spec.max_epochs = 40;
  spec.patience = 2;
  spec.batch_size = 4;
  spec.seed = 7;
  unet::TrainState state;
  unet::TrainLog log;
  std::vector<int> stalls;
  std::vector<int> best_epochs;
  bool best_matches_model = true;
  unet::train_epochs(
      model, train_set, val_set, spec, &state, &log,
      [&](const unet::TrainState& st, const unet::TrainLog&) {
        stalls.push_back(st.stall);
        best_epochs.push_back(st.best_epoch);
        if (st.stall == 0)  // just improved: snapshot must be current params
          best_matches_model =
              best_matches_model && st.best == unet::snapshot_params(model);
      });

  const std::size_t n = log.epochs.size();
  REQUIRE(n >= 1);
  // Replay the bookkeeping from the recorded losses.
  int best = 0, stall = 0;
  for (std::size_t e = 0; e < n; ++e) {
    if (e == 0 || log.epochs[e].val_loss < log.epochs[best].val_loss) {
      best = static_cast<int>(e);
      stall = 0;
    } else {
      ++stall;
    }
    CHECK(stalls[e] == stall);
    CHECK(best_epochs[e] == best);
  }
  CHECK(log.best_epoch == best);
  CHECK(state.best_epoch == best);
  CHECK(state.stall == stall);
  CHECK(state.next_epoch == static_cast<int>(n));
  CHECK(best_matches_model);
  CHECK(!state.best.empty());
  // The run must have stopped early, with the trailing stall at patience.
  CHECK(n < static_cast<std::size_t>(spec.max_epochs));
  CHECK(stall == spec.patience);
}

TEST_CASE("split training resumes bit-exactly") {
  Rng rng(904);
  const UNetConfig cfg = tiny();
  const auto train_set = toy_samples(rng, cfg, 7, 0.65f);
  const auto val_set = toy_samples(rng, cfg, 3, 0.65f);
  TrainSpec spec;
  spec.lr = 4e-3;
  spec.max_epochs = 4;
  spec.patience = 10;
  spec.batch_size = 2;
  spec.seed = 11;

  UNetModel whole(cfg, 33);
  unet::TrainState ws;
  unet::TrainLog wl;
  unet::train_epochs(whole, train_set, val_set, spec, &ws, &wl);

  UNetModel split(cfg, 33);
  unet::TrainState ss;
  unet::TrainLog sl;
  TrainSpec first = spec;
  first.max_epochs = 2;
  unet::train_epochs(split, train_set, val_set, first, &ss, &sl);
  REQUIRE(ss.next_epoch == 2);
  unet::train_epochs(split, train_set, val_set, spec, &ss, &sl);

  REQUIRE(wl.epochs.size() == sl.epochs.size());
  for (std::size_t e = 0; e < wl.epochs.size(); ++e) {
    CHECK(wl.epochs[e].train_loss == sl.epochs[e].train_loss);
    CHECK(wl.epochs[e].val_loss == sl.epochs[e].val_loss);
  }
  CHECK(unet::snapshot_params(whole) == unet::snapshot_params(split));
  CHECK(whole.opt.step == split.opt.step);
  CHECK(whole.opt.m == split.opt.m);
  CHECK(whole.opt.v == split.opt.v);
}

TEST_CASE("train input validation") {
  Rng rng(905);
  const UNetConfig cfg = tiny();
  UNetModel model(cfg, 25);
  auto good = toy_samples(rng, cfg, 2, 0.5f);
  TrainSpec spec;
  CHECK_THROWS_AS(unet::train(model, {}, good, spec), DataError);
  CHECK_THROWS_AS(unet::train(model, good, {}, spec), DataError);
  auto bad = good;
  bad[0].target = masks::Mask(cfg.seq_frames, cfg.freq_bins_net + 1);
  CHECK_THROWS_AS(unet::train(model, bad, good, spec), DataError);

  TrainSpec bad_spec;
  bad_spec.lr = 0.0;
  CHECK_THROWS_AS(bad_spec.validate(), ConfigError);
  bad_spec = TrainSpec{};
  bad_spec.batch_size = 0;
  CHECK_THROWS_AS(bad_spec.validate(), ConfigError);
}

TEST_CASE("scene_sequences: shapes, count, normalization, oracle slices") {
  scene::SourcePool pool;
  pool["a"] = signal::speech_like(1.2, 16000, 911);
  pool["b"] = signal::speech_like(1.2, 16000, 912);
  scene::SceneSpec sspec;
  sspec.target = {"a", foa::Direction::from_degrees(0, 0)};
  sspec.interferers = {{"b", foa::Direction::from_degrees(60, 0)}};
  sspec.sir_db = {0.0};
  sspec.snr_db = 20.0;
  sspec.seed = 40;
  const stft::StftConfig scfg{128, 64, 16000};
  const scene::SceneOutput sc = scene::synthesize_scene(sspec, pool, scfg);

  UNetConfig cfg = UNetConfig::desk();  // seq 16, 64 net bins, 3 features
  const auto samples = unet::scene_sequences(sc, cfg);
  const int expect = sc.mixture.frames / cfg.seq_frames;
  REQUIRE(static_cast<int>(samples.size()) == expect);
  REQUIRE(expect > 0);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    REQUIRE(s.features.features == 3);
    REQUIRE(s.features.frames == 16);
    REQUIRE(s.features.bins == 64);
    REQUIRE(s.target.frames == 16);
    REQUIRE(s.target.bins == 64);
    // Oracle slice, Nyquist dropped.
    for (int r = 0; r < 16; ++r)
      for (int f = 0; f < 64; ++f)
        CHECK(s.target.at(r, f) ==
              sc.oracle_mask.at(static_cast<int>(k) * 16 + r, f));
    // Per-sequence normalization: beam planes peak at exactly 1 per bin.
    for (int q = 1; q < 3; ++q)
      for (int f = 0; f < 64; ++f) {
        float mx = 0.0f;
        for (int r = 0; r < 16; ++r) mx = std::max(mx, s.features.at(q, r, f));
        if (mx > 0.0f) CHECK(mx == 1.0f);
      }
  }

  UNetConfig two = cfg;
  two.input_features = 4;  // expects two interferers
  CHECK_THROWS_AS(unet::scene_sequences(sc, two), DataError);
  UNetConfig wrong_bins = cfg;
  wrong_bins.freq_bins_net = 128;
  wrong_bins.seq_frames = 16;
  CHECK_THROWS_AS(unet::scene_sequences(sc, wrong_bins), DataError);
}

TEST_CASE("infer_mask matches a by-hand windowed assembly") {
  Rng rng(906);
  UNetConfig cfg = tiny();  // seq 4, 8 net bins, 3 features -> 1 interferer
  UNetModel model(cfg, 44);
  // Attach standardization stats so that path is exercised as well.
  model.stats.features = 3;
  model.stats.bins = 8;
  model.stats.mean.assign(24, 0.1f);
  model.stats.stddev.assign(24, 1.3f);

  const stft::StftConfig scfg{16, 8, 16000};
  const int nt = 11;  // two whole windows plus a partial one
  const stft::Spectrogram mix = test::rand_spec(rng, 4, nt, scfg);
  const foa::Direction target = foa::Direction::from_degrees(0, 0);
  const std::vector<foa::Direction> noise = {
      foa::Direction::from_degrees(80, 0)};
  const masks::Mask got = unet::infer_mask(model, mix, target, noise);
  REQUIRE(got.frames == nt);
  REQUIRE(got.bins == 9);

  const beamform::BeamformerSet bf =
      beamform::build_beamformers(target, noise);
  const beamform::FeatureTensor full = beamform::extract_features(mix, bf);
  masks::Mask want(nt, 9);
  auto run = [&](int start, int live_from) {
    beamform::FeatureTensor win(3, 4, 8);
    for (int r = 0; r < 4; ++r) {
      const int src = std::max(start + r, live_from);
      for (int q = 0; q < 3; ++q)
        std::copy(full.row(q, src), full.row(q, src) + 8, win.row(q, r));
    }
    const beamform::FeatureTensor prep =
        beamform::standardize(beamform::normalize_sequence(win), model.stats);
    beamform::FeatureTensor copy = prep;
    const masks::Mask m = model.forward(copy, false);
    for (int r = 0; r < 4; ++r) {
      const int dst = start + r;
      if (dst < live_from || dst >= nt) continue;
      for (int f = 0; f < 8; ++f) want.at(dst, f) = m.at(r, f);
      want.at(dst, 8) = m.at(r, 7);
    }
  };
  run(0, 0);
  run(4, 4);
  run(nt - 4, 8);
  CHECK(got.data == want.data);
  // Nyquist bin replicates the one below it.
  for (int t = 0; t < nt; ++t) CHECK(got.at(t, 8) == got.at(t, 7));
}

TEST_CASE("infer_mask argument validation") {
  Rng rng(907);
  UNetModel model(tiny(), 45);
  const stft::StftConfig scfg{16, 8, 16000};
  const stft::Spectrogram mix = test::rand_spec(rng, 4, 6, scfg);
  const foa::Direction t0 = foa::Direction::from_degrees(0, 0);
  CHECK_THROWS_AS(unet::infer_mask(model, mix, t0, {}), ConfigError);
  const std::vector<foa::Direction> one = {
      foa::Direction::from_degrees(50, 0)};
  const stft::StftConfig big{64, 32, 16000};
  const stft::Spectrogram wrong = test::rand_spec(rng, 4, 6, big);
  CHECK_THROWS_AS(unet::infer_mask(model, wrong, t0, one), DataError);
}

}  // TEST_SUITE
