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

#include "foamask/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <utility>

#include "foamask/foa.hpp"

namespace foamask::metrics {
namespace {

double dot_d(const Channel& a, const Channel& b, size_t begin, size_t end) {
  double acc = 0.0;
  for (size_t i = begin; i < end; ++i) acc += double(a[i]) * double(b[i]);
  return acc;
}

double si_sdr_range(const Channel& est, const Channel& ref, size_t begin,
                    size_t end) {
  const double rr = dot_d(ref, ref, begin, end);
  if (rr <= 0.0) throw DataError("si_sdr: reference signal is all zero");
  const double er = dot_d(est, ref, begin, end);
  const double alpha = er / rr;
  const double num = alpha * alpha * rr;
  double den = 0.0;
  for (size_t i = begin; i < end; ++i) {
    const double r = double(est[i]) - alpha * double(ref[i]);
    den += r * r;
  }
  if (den <= 0.0) return 60.0;
  if (num <= 0.0) return -60.0;
  return std::clamp(10.0 * std::log10(num / den), -60.0, 60.0);
}

// One frame at each edge carries window-taper artifacts; score the interior.
std::pair<size_t, size_t> interior(size_t len, size_t frame_len) {
  if (len > 3 * frame_len) return {frame_len, len - frame_len};
  return {0, len};
}

Channel synth_mono(const stft::Spectrogram& spec) {
  return stft::synthesize_mono(spec.channel(0));
}

int min_separation_deg(const scene::SceneSpec& spec) {
  std::vector<foa::Direction> dirs;
  dirs.push_back(spec.target.direction);
  for (const auto& s : spec.interferers) dirs.push_back(s.direction);
  double best = 0.0;
  bool any = false;
  for (size_t i = 0; i < dirs.size(); ++i) {
    for (size_t j = i + 1; j < dirs.size(); ++j) {
      const double d = rad_to_deg(foa::angular_distance(dirs[i], dirs[j]));
      if (!any || d < best) best = d;
      any = true;
    }
  }
  return any ? int(std::lround(best)) : 0;
}

}  // namespace

double si_sdr(const Channel& estimate, const Channel& reference) {
  if (estimate.size() != reference.size()) {
    throw DataError("si_sdr: estimate and reference lengths differ");
  }
  return si_sdr_range(estimate, reference, 0, reference.size());
}

double mask_mse(const masks::Mask& predicted, const masks::Mask& oracle) {
  if (!predicted.same_shape(oracle)) {
    throw DataError("mask_mse: mask shapes differ");
  }
  double acc = 0.0;
  const size_t n = predicted.data.size();
  for (size_t i = 0; i < n; ++i) {
    const double d = double(predicted.data[i]) - double(oracle.data[i]);
    acc += d * d;
  }
  return n ? acc / double(n) : 0.0;
}

EvalReport evaluate_pipeline(const std::vector<scene::SceneOutput>& scenes,
                             const System& system) {
  if (scenes.empty()) throw DataError("evaluate_pipeline: no scenes");
  EvalReport report;
  struct GroupAcc {
    int scenes = 0;
    double enh = 0.0, imp = 0.0;
  };
  std::map<std::pair<int, int>, GroupAcc> by_group;
  double sum_enh = 0.0, sum_mix = 0.0, sum_mse = 0.0;
  int mse_count = 0;

  for (const auto& sc : scenes) {
    const Channel ref = synth_mono(sc.target_image);
    const Channel mix = synth_mono(sc.mixture);
    SystemOutput out = system(sc);
    if (out.enhanced.channels != 1 || out.enhanced.frames != sc.mixture.frames) {
      throw DataError("evaluate_pipeline: system output shape mismatch");
    }
    const Channel enh = synth_mono(out.enhanced);
    const auto [lo, hi] = interior(ref.size(), sc.mixture.config.frame_len);
    const double sdr_mix = si_sdr_range(mix, ref, lo, hi);
    const double sdr_enh = si_sdr_range(enh, ref, lo, hi);
    sum_enh += sdr_enh;
    sum_mix += sdr_mix;
    if (out.mask.has_value()) {
      sum_mse += mask_mse(*out.mask, sc.oracle_mask);
      ++mse_count;
    }
    const int speakers = int(1 + sc.spec.interferers.size());
    auto& g = by_group[{speakers, min_separation_deg(sc.spec)}];
    ++g.scenes;
    g.enh += sdr_enh;
    g.imp += sdr_enh - sdr_mix;
  }

  const double n = double(scenes.size());
  report.si_sdr_db = sum_enh / n;
  report.si_sdr_mixture_db = sum_mix / n;
  report.si_sdr_improvement_db = (sum_enh - sum_mix) / n;
  if (mse_count > 0) report.mask_mse = sum_mse / double(mse_count);
  for (const auto& [key, acc] : by_group) {
    EvalReport::Group g;
    g.speakers = key.first;
    g.separation_deg = key.second;
    g.scenes = acc.scenes;
    g.si_sdr_db = acc.enh / double(acc.scenes);
    g.si_sdr_improvement_db = acc.imp / double(acc.scenes);
    report.groups.push_back(g);
  }
  return report;
}

}  // namespace foamask::metrics
