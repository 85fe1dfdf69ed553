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

#include <algorithm>
#include <cstdint>

#include "foamask/io.hpp"
#include "io/bytes.hpp"

namespace foamask::io {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

}  // namespace

void write_wav(const std::string& path, const Waveform& channels,
               int sample_rate) {
  if (channels.empty() || sample_rate <= 0)
    throw DataError("write_wav: no channels or bad sample rate");
  const std::size_t frames = channels[0].size();
  for (const auto& c : channels)
    if (c.size() != frames) throw DataError("write_wav: ragged channels");

  const std::uint32_t nch = std::uint32_t(channels.size());
  const std::uint32_t data_bytes = std::uint32_t(frames * nch * 4);

  ByteWriter w;
  w.raw("RIFF", 4);
  w.u32(4 + 26 + 12 + 8 + data_bytes);  // WAVE + fmt(18) + fact + data header
  w.raw("WAVE", 4);
  w.raw("fmt ", 4);
  w.u32(18);
  w.u16(kFormatFloat);
  w.u16(std::uint16_t(nch));
  w.u32(std::uint32_t(sample_rate));
  w.u32(std::uint32_t(sample_rate) * nch * 4);  // byte rate
  w.u16(std::uint16_t(nch * 4));                // block align
  w.u16(32);
  w.u16(0);  // no format extension
  w.raw("fact", 4);
  w.u32(4);
  w.u32(std::uint32_t(frames));
  w.raw("data", 4);
  w.u32(data_bytes);
  for (std::size_t i = 0; i < frames; ++i)
    for (std::uint32_t c = 0; c < nch; ++c) w.f32(channels[c][i]);

  atomic_write_bytes(path, w.buf);
}

WavData read_wav(const std::string& path) {
  const std::string bytes = read_bytes(path);
  ByteReader r(bytes, "read_wav " + path);
  char tag[5] = {0};

  auto read_tag = [&](char* out) {
    r.need(4);
    std::copy_n(bytes.data() + r.pos, 4, out);
    r.pos += 4;
  };

  read_tag(tag);
  if (std::string(tag, 4) != "RIFF") throw DataError(path + ": not a RIFF file");
  r.u32();  // riff size; trust chunk sizes instead
  read_tag(tag);
  if (std::string(tag, 4) != "WAVE") throw DataError(path + ": not a WAV file");

  std::uint16_t format = 0, nch = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_pos = 0, data_len = 0;

  while (r.remaining() >= 8) {
    read_tag(tag);
    const std::uint32_t size = r.u32();
    r.need(size);
    const std::string id(tag, 4);
    if (id == "fmt ") {
      ByteReader f(bytes, "read_wav fmt");
      f.pos = r.pos;
      format = f.u16();
      nch = f.u16();
      rate = f.u32();
      f.u32();  // byte rate
      f.u16();  // block align
      bits = f.u16();
      have_fmt = true;
    } else if (id == "data") {
      data_pos = r.pos;
      data_len = size;
    }
    r.pos += size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_pos == 0)
    throw DataError(path + ": missing fmt or data chunk");
  if (nch == 0 || rate == 0) throw DataError(path + ": bad fmt chunk");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32)
    throw DataError(path + ": unsupported format (want PCM16 or float32)");

  const std::size_t bytes_per = f32 ? 4 : 2;
  const std::size_t frames = data_len / (bytes_per * nch);
  WavData out;
  out.sample_rate = int(rate);
  out.channels.assign(nch, Channel(frames));
  ByteReader d(bytes, "read_wav data");
  d.pos = data_pos;
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::uint16_t c = 0; c < nch; ++c) {
      out.channels[c][i] =
          f32 ? d.f32() : float(std::int16_t(d.u16())) / 32768.0f;
    }
  }
  return out;
}

}  // namespace foamask::io
