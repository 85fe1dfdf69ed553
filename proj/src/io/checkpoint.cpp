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

constexpr char kMagic[4] = {'F', 'M', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_floats(ByteWriter& w, const std::vector<float>& v) {
  w.u32(std::uint32_t(v.size()));
  for (float x : v) w.f32(x);
}

std::vector<float> read_floats(ByteReader& r) {
  const std::uint32_t n = r.u32();
  r.need(std::size_t(n) * 4);
  std::vector<float> v(n);
  for (float& x : v) x = r.f32();
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const unet::UNetModel& model,
                     const unet::TrainState* state) {
  const unet::UNetConfig& cfg = model.config();
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kVersion);

  w.u32(std::uint32_t(cfg.depth));
  w.u32(std::uint32_t(cfg.base_filters));
  w.u32(std::uint32_t(cfg.kernel_t));
  w.u32(std::uint32_t(cfg.kernel_f));
  w.u32(std::uint32_t(cfg.pool_freq));
  w.u8(cfg.dilated ? 1 : 0);
  w.u32(std::uint32_t(cfg.dilation_schedule.size()));
  for (int d : cfg.dilation_schedule) w.u32(std::uint32_t(d));
  w.u32(std::uint32_t(cfg.input_features));
  w.u32(std::uint32_t(cfg.seq_frames));
  w.u32(std::uint32_t(cfg.freq_bins_net));
  w.f32(cfg.dropout);

  w.u32(std::uint32_t(model.stats.features));
  w.u32(std::uint32_t(model.stats.bins));
  write_floats(w, model.stats.mean);
  write_floats(w, model.stats.stddev);

  w.u32(std::uint32_t(model.net.ps.items.size()));
  for (const auto& p : model.net.ps.items) {
    w.str(p.name);
    w.u8(p.trainable ? 1 : 0);
    w.u32(std::uint32_t(p.shape.size()));
    for (int d : p.shape) w.u32(std::uint32_t(d));
    write_floats(w, p.w);
  }

  w.u64(std::uint64_t(model.opt.step));
  w.u32(std::uint32_t(model.opt.m.size()));
  for (std::size_t i = 0; i < model.opt.m.size(); ++i) {
    write_floats(w, model.opt.m[i]);
    write_floats(w, model.opt.v[i]);
  }

  w.u8(state ? 1 : 0);
  if (state) {
    w.u32(std::uint32_t(state->next_epoch));
    w.u32(std::uint32_t(state->stall));
    w.u32(std::uint32_t(state->best_epoch));  // -1 wraps, restored on load
    w.f64(state->best_val);
    w.u32(std::uint32_t(state->best.size()));
    for (const auto& t : state->best) write_floats(w, t);
  }

  w.u32(crc32(w.buf.data(), w.buf.size()));
  atomic_write_bytes(path, w.buf);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  const std::string bytes = read_bytes(path);
  if (bytes.size() < 12 || bytes.compare(0, 4, kMagic, 4) != 0)
    throw DataError(path + ": not a checkpoint (bad magic)");
  {
    ByteReader tail(bytes, "load_checkpoint " + path);
    tail.pos = bytes.size() - 4;
    const std::uint32_t want = tail.u32();
    const std::uint32_t got = crc32(bytes.data(), bytes.size() - 4);
    if (want != got) throw DataError(path + ": checksum mismatch");
  }

  ByteReader r(bytes, "load_checkpoint " + path);
  r.pos = 4;
  const std::uint32_t version = r.u32();
  if (version != kVersion)
    throw DataError(path + ": unsupported checkpoint version " +
                    std::to_string(version));

  unet::UNetConfig cfg;
  cfg.depth = int(r.u32());
  cfg.base_filters = int(r.u32());
  cfg.kernel_t = int(r.u32());
  cfg.kernel_f = int(r.u32());
  cfg.pool_freq = int(r.u32());
  cfg.dilated = r.u8() != 0;
  const std::uint32_t sched = r.u32();
  for (std::uint32_t i = 0; i < sched; ++i)
    cfg.dilation_schedule.push_back(int(r.u32()));
  cfg.input_features = int(r.u32());
  cfg.seq_frames = int(r.u32());
  cfg.freq_bins_net = int(r.u32());
  cfg.dropout = r.f32();

  unet::UNetModel model(cfg, 0);

  model.stats.features = int(r.u32());
  model.stats.bins = int(r.u32());
  model.stats.mean = read_floats(r);
  model.stats.stddev = read_floats(r);
  const std::size_t want_stats =
      std::size_t(model.stats.features) * std::size_t(model.stats.bins);
  if (model.stats.mean.size() != want_stats ||
      model.stats.stddev.size() != want_stats)
    throw DataError(path + ": feature stats size mismatch");

  const std::uint32_t nparams = r.u32();
  if (nparams != model.net.ps.items.size())
    throw DataError(path + ": parameter count does not match config");
  for (auto& p : model.net.ps.items) {
    const std::string name = r.str();
    const bool trainable = r.u8() != 0;
    const std::uint32_t ndims = r.u32();
    std::vector<int> shape(ndims);
    for (auto& d : shape) d = int(r.u32());
    const std::vector<float> wv = read_floats(r);
    if (name != p.name || trainable != p.trainable || shape != p.shape ||
        wv.size() != p.w.size())
      throw DataError(path + ": tensor '" + name + "' does not match config " +
                      "(expected '" + p.name + "')");
    p.w = wv;
  }

  model.opt.step = (long long)(r.u64());
  const std::uint32_t slots = r.u32();
  if (slots != model.opt.m.size())
    throw DataError(path + ": optimizer slot count mismatch");
  for (std::uint32_t i = 0; i < slots; ++i) {
    std::vector<float> m = read_floats(r);
    std::vector<float> v = read_floats(r);
    if (m.size() != model.opt.m[i].size() || v.size() != model.opt.v[i].size())
      throw DataError(path + ": optimizer slot size mismatch");
    model.opt.m[i] = std::move(m);
    model.opt.v[i] = std::move(v);
  }

  LoadedCheckpoint out{std::move(model), std::nullopt};
  if (r.u8()) {
    unet::TrainState st;
    st.next_epoch = int(r.u32());
    st.stall = int(r.u32());
    st.best_epoch = int(r.u32());
    st.best_val = r.f64();
    const std::uint32_t n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) st.best.push_back(read_floats(r));
    out.state = std::move(st);
  }
  if (r.remaining() != 4) throw DataError(path + ": trailing bytes");
  return out;
}

}  // namespace foamask::io
