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

#ifndef FOAMASK_SIGNAL_HPP_
#define FOAMASK_SIGNAL_HPP_

#include <cstdint>

#include "foamask/common.hpp"

namespace foamask::signal {

// Steady-pitch voiced tone: harmonics of f0 with 1/h rolloff and a gentle
// formant emphasis, under a syllabic on/off envelope. Deterministic in seed.
Channel harmonic_voiced(double seconds, int sample_rate, double f0_hz,
                        uint64_t seed);

// Speech-like test source: voiced syllables with a seed-dependent pitch
// contour (drift + vibrato), formant coloring, unvoiced fricative bursts,
// and pauses. RMS-normalized to 0.1. Deterministic in seed.
Channel speech_like(double seconds, int sample_rate, uint64_t seed);

}  // namespace foamask::signal

#endif  // FOAMASK_SIGNAL_HPP_
