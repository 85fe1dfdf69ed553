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

#include "doctest.h"
#include "foamask/metrics.hpp"
#include "foamask/rng.hpp"
#include "foamask/signal.hpp"
#include "helpers.hpp"

using namespace foamask;
using foa::Direction;

namespace {

const stft::StftConfig kCfg{256, 128, 16000};

std::vector<scene::SceneOutput> demo_scenes() {
  scene::SourcePool pool;
  pool["a"] = signal::speech_like(1.2, 16000, 601);
  pool["b"] = signal::speech_like(1.2, 16000, 602);
  pool["c"] = signal::speech_like(1.2, 16000, 603);
  std::vector<scene::SceneOutput> scenes;
  for (int k = 0; k < 2; ++k) {
    scene::SceneSpec spec;
    spec.target = {"a", Direction::from_degrees(0, 0)};
    spec.interferers = {{"b", Direction::from_degrees(90, 0)}};
    spec.sir_db = {0.0};
    spec.snr_db = 20.0;
    spec.seed = 700 + k;
    scenes.push_back(scene::synthesize_scene(spec, pool, kCfg));
  }
  scene::SceneSpec spec3;
  spec3.target = {"a", Direction::from_degrees(0, 0)};
  spec3.interferers = {{"b", Direction::from_degrees(-45, 0)},
                       {"c", Direction::from_degrees(47, 0)}};
  spec3.sir_db = {6.0, 6.0};
  spec3.snr_db = 20.0;
  spec3.seed = 702;
  scenes.push_back(scene::synthesize_scene(spec3, pool, kCfg));
  return scenes;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("si_sdr: perfect and scaled estimates clamp to +60") {
  Rng rng(601);
  const Channel ref = test::rand_channel(rng, 4000);
  CHECK(metrics::si_sdr(ref, ref) == 60.0);
  Channel scaled = ref;
  for (float& v : scaled) v *= 3.7f;
  CHECK(metrics::si_sdr(scaled, ref) == 60.0);
}

TEST_CASE("si_sdr: orthogonal estimate clamps to -60") {
  Channel ref(1000, 0.0f), est(1000, 0.0f);
  for (size_t i = 0; i < 1000; i += 2) ref[i] = 1.0f;
  for (size_t i = 1; i < 1000; i += 2) est[i] = 1.0f;
  CHECK(metrics::si_sdr(est, ref) == -60.0);
}

TEST_CASE("si_sdr: known-ratio construction and estimate-scale invariance") {
  // est = ref + delta * orth with ||orth|| == ||ref|| and orth ⊥ ref:
  // the projection recovers ref exactly, so SI-SDR = -20 log10(delta).
  const size_t n = 2000;
  Channel ref(n, 0.0f), orth(n, 0.0f);
  for (size_t i = 0; i < n; i += 2) ref[i] = 0.5f;
  for (size_t i = 1; i < n; i += 2) orth[i] = 0.5f;
  for (double delta : {0.1, 0.01}) {
    Channel est(n);
    for (size_t i = 0; i < n; ++i)
      est[i] = ref[i] + static_cast<float>(delta) * orth[i];
    const double want = -20.0 * std::log10(delta);
    CHECK(metrics::si_sdr(est, ref) == doctest::Approx(want).epsilon(1e-5));
    Channel est2 = est;
    for (float& v : est2) v *= 0.125f;  // exact in binary
    CHECK(metrics::si_sdr(est2, ref) ==
          doctest::Approx(metrics::si_sdr(est, ref)).epsilon(1e-12));
  }
}

TEST_CASE("si_sdr error cases") {
  Channel ref(100, 1.0f);
  Channel est(99, 1.0f);
  CHECK_THROWS_AS(metrics::si_sdr(est, ref), DataError);
  Channel zeros(100, 0.0f);
  CHECK_THROWS_AS(metrics::si_sdr(ref, zeros), DataError);
}

TEST_CASE("mask_mse") {
  masks::Mask a(2, 3), b(2, 3);
  for (auto& v : a.data) v = 0.75f;
  for (auto& v : b.data) v = 0.25f;
  CHECK(metrics::mask_mse(a, b) == doctest::Approx(0.25));
  CHECK(metrics::mask_mse(a, a) == 0.0);
  masks::Mask c(3, 3);
  CHECK_THROWS_AS(metrics::mask_mse(a, c), DataError);
}

TEST_CASE("evaluate_pipeline: identity system improves by exactly zero") {
  const auto scenes = demo_scenes();
  const metrics::EvalReport rep = metrics::evaluate_pipeline(
      scenes, [](const scene::SceneOutput& sc) {
        return metrics::SystemOutput{sc.mixture.channel(0), std::nullopt};
      });
  CHECK(rep.si_sdr_improvement_db == 0.0);
  CHECK(rep.si_sdr_db == rep.si_sdr_mixture_db);
  CHECK(!rep.mask_mse.has_value());
  for (const auto& g : rep.groups) CHECK(g.si_sdr_improvement_db == 0.0);
}

TEST_CASE("evaluate_pipeline: oracle target system clamps to the cap") {
  const auto scenes = demo_scenes();
  const metrics::EvalReport rep = metrics::evaluate_pipeline(
      scenes, [](const scene::SceneOutput& sc) {
        return metrics::SystemOutput{sc.target_image.channel(0),
                                     sc.oracle_mask};
      });
  CHECK(rep.si_sdr_db == 60.0);
  REQUIRE(rep.mask_mse.has_value());
  CHECK(*rep.mask_mse == 0.0);
  CHECK(rep.si_sdr_improvement_db > 10.0);  // mixtures are far from clean
}

TEST_CASE("evaluate_pipeline groups by speaker count and separation") {
  const auto scenes = demo_scenes();
  const metrics::EvalReport rep = metrics::evaluate_pipeline(
      scenes, [](const scene::SceneOutput& sc) {
        return metrics::SystemOutput{sc.mixture.channel(0), std::nullopt};
      });
  REQUIRE(rep.groups.size() == 2);
  bool saw2 = false, saw3 = false;
  for (const auto& g : rep.groups) {
    if (g.speakers == 2) {
      saw2 = true;
      CHECK(g.separation_deg == 90);
      CHECK(g.scenes == 2);
    }
    if (g.speakers == 3) {
      saw3 = true;
      // min pairwise separation: target-to-interferer 45 vs 47 vs 92.
      CHECK(g.separation_deg == 45);
      CHECK(g.scenes == 1);
    }
  }
  CHECK(saw2);
  CHECK(saw3);
}

TEST_CASE("evaluate_pipeline rejects shape mismatches and empty input") {
  CHECK_THROWS_AS(
      metrics::evaluate_pipeline({}, [](const scene::SceneOutput& sc) {
        return metrics::SystemOutput{sc.mixture.channel(0), std::nullopt};
      }),
      DataError);
  const auto scenes = demo_scenes();
  CHECK_THROWS_AS(metrics::evaluate_pipeline(
                      scenes,
                      [](const scene::SceneOutput& sc) {
                        stft::Spectrogram bad(sc.mixture.config,
                                              sc.mixture.channels,
                                              sc.mixture.frames);
                        return metrics::SystemOutput{bad, std::nullopt};
                      }),
                  DataError);
}

}  // TEST_SUITE
