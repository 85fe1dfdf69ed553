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

#ifndef FOAMASK_FOA_HPP_
#define FOAMASK_FOA_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "foamask/common.hpp"
#include "foamask/stft.hpp"

namespace foamask::foa {

// Source direction; canonicalized to azimuth in [-pi, pi), elevation in
// [-pi/2, pi/2].
struct Direction {
  double azimuth = 0.0;    // radians
  double elevation = 0.0;  // radians

  static Direction from_radians(double az, double el);
  static Direction from_degrees(double az_deg, double el_deg);
};

// Great-circle angle between two directions, radians.
double angular_distance(const Direction& a, const Direction& b);

// FOA channel gains [W, X, Y, Z] of a plane wave:
// d = [1, sqrt(3) cos(az) cos(el), sqrt(3) sin(az) cos(el), sqrt(3) sin(el)].
// ||d||^2 == 4 for every direction.
using SteeringVector = std::array<double, 4>;
SteeringVector steering_vector(const Direction& dir);

// Quasi-uniform directions on the sphere (golden-angle spiral).
std::vector<Direction> fibonacci_sphere(int count);

// Channel c of the output is d[c] * mono, frequency-independent.
stft::Spectrogram encode_plane_wave(const stft::Spectrogram& mono,
                                    const Direction& dir);

// 4-channel time-domain encoding of a mono signal.
Waveform encode_plane_wave(const Channel& mono, const Direction& dir);

// Spatially diffuse noise: the template is circularly shifted and
// polarity-randomized per direction on a Fibonacci grid, encoded, and summed;
// the result is rescaled so the W channel carries the template's average
// power. num_directions >= 8.
stft::Spectrogram diffuse_noise(const Channel& tmpl, int num_directions,
                                uint64_t seed, const stft::StftConfig& config);

// Time-domain variant used by the scene renderer; length matches the
// template.
Waveform diffuse_noise_time(const Channel& tmpl, int num_directions,
                            uint64_t seed);

}  // namespace foamask::foa

#endif  // FOAMASK_FOA_HPP_
