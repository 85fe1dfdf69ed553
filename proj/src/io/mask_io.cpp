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

#include <cstdint>

#include "foamask/io.hpp"
#include "io/bytes.hpp"

namespace foamask::io {
namespace {

constexpr char kMagic[4] = {'F', 'M', 'S', 'K'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_mask(const std::string& path, const masks::Mask& mask) {
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kVersion);
  w.u32(std::uint32_t(mask.frames));
  w.u32(std::uint32_t(mask.bins));
  for (float v : mask.data) w.f32(v);
  atomic_write_bytes(path, w.buf);
}

masks::Mask read_mask(const std::string& path) {
  const std::string bytes = read_bytes(path);
  ByteReader r(bytes, "read_mask " + path);
  r.need(4);
  if (bytes.compare(0, 4, kMagic, 4) != 0)
    throw DataError(path + ": not a mask dump (bad magic)");
  r.pos = 4;
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw DataError(path + ": unsupported mask version " +
                    std::to_string(version));
  const std::uint32_t frames = r.u32();
  const std::uint32_t bins = r.u32();
  if (std::uint64_t(frames) * bins > (std::uint64_t(1) << 31))
    throw DataError(path + ": unreasonable mask dimensions");
  masks::Mask m{int(frames), int(bins)};
  r.need(std::size_t(frames) * bins * 4);
  for (float& v : m.data) v = r.f32();
  if (r.remaining() != 0) throw DataError(path + ": trailing bytes");
  return m;
}

}  // namespace foamask::io
