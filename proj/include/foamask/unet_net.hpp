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

#ifndef FOAMASK_UNET_NET_HPP_
#define FOAMASK_UNET_NET_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "foamask/common.hpp"
#include "foamask/kernels.hpp"
#include "foamask/rng.hpp"

// Templated network core. Everything is parameterized on the scalar type so
// the gradient tests can instantiate the exact same code in double precision
// while training runs in single precision.

namespace foamask::unet {

struct UNetConfig {
  int depth = 5;
  int base_filters = 16;
  int kernel_t = 3;
  int kernel_f = 3;
  int pool_freq = 2;
  bool dilated = true;
  std::vector<int> dilation_schedule;  // empty: 1, 2, 4, ... per block
  int input_features = 4;
  int seq_frames = 40;
  int freq_bins_net = 512;
  float dropout = 0.05f;

  void validate() const;
  // Frequency dilation of the second convolution at encoder depth b (also
  // used by the decoder block restoring that depth). 1 when not dilated.
  int dilation_at(int block) const;

  static UNetConfig paper();  // depth 5, base 16, 512 bins, 40 frames
  static UNetConfig desk();   // depth 3, base 4, 64 bins, 16 frames
};

// [batch][channel][time][freq], freq contiguous.
template <typename Real>
struct Tensor {
  int b = 0, c = 0, t = 0, f = 0;
  std::vector<Real> v;

  Tensor() = default;
  Tensor(int b_, int c_, int t_, int f_) { resize(b_, c_, t_, f_); }

  void resize(int b_, int c_, int t_, int f_) {
    b = b_;
    c = c_;
    t = t_;
    f = f_;
    v.assign(static_cast<std::size_t>(b) * c * t * f, Real(0));
  }
  Real* row(int bi, int ci, int ti) {
    return v.data() +
           ((static_cast<std::size_t>(bi) * c + ci) * t + ti) * f;
  }
  const Real* row(int bi, int ci, int ti) const {
    return v.data() +
           ((static_cast<std::size_t>(bi) * c + ci) * t + ti) * f;
  }
  bool same_shape(const Tensor& o) const {
    return b == o.b && c == o.c && t == o.t && f == o.f;
  }
};

// Row primitives; the float specialization goes through the dispatched
// kernels, other types use plain loops.
template <typename Real>
struct RowOps {
  static void axpy(Real a, const Real* x, Real* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
  }
  static Real dot(const Real* a, const Real* b, std::size_t n) {
    Real s = 0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  static Real sum(const Real* x, std::size_t n) {
    Real s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
};

template <>
struct RowOps<float> {
  static void axpy(float a, const float* x, float* y, std::size_t n) {
    kernels::axpy_f32(a, x, y, n);
  }
  static float dot(const float* a, const float* b, std::size_t n) {
    return kernels::dot_f32(a, b, n);
  }
  static float sum(const float* x, std::size_t n) {
    return kernels::sum_f32(x, n);
  }
};

template <typename Real>
struct Param {
  std::string name;
  std::vector<int> shape;
  bool trainable = true;
  std::vector<Real> w, g;
};

template <typename Real>
struct ParamStore {
  std::vector<Param<Real>> items;

  int add(const std::string& name, std::vector<int> shape,
          bool trainable = true, Real fill = Real(0)) {
    std::size_t n = 1;
    for (int d : shape) n *= static_cast<std::size_t>(d);
    Param<Real> p;
    p.name = name;
    p.shape = std::move(shape);
    p.trainable = trainable;
    p.w.assign(n, fill);
    p.g.assign(n, Real(0));
    items.push_back(std::move(p));
    return static_cast<int>(items.size()) - 1;
  }
  Param<Real>& operator[](int i) { return items[static_cast<std::size_t>(i)]; }
  const Param<Real>& operator[](int i) const {
    return items[static_cast<std::size_t>(i)];
  }
  void zero_grad() {
    for (auto& p : items) std::fill(p.g.begin(), p.g.end(), Real(0));
  }
  std::size_t trainable_count() const {
    std::size_t n = 0;
    for (const auto& p : items)
      if (p.trainable) n += p.w.size();
    return n;
  }
};

// 2D convolution, same padding, square kernel in (t, f), dilation in f only.
template <typename Real>
struct Conv2d {
  int in_ch = 0, out_ch = 0, kt = 1, kf = 1, dil = 1;
  int wi = -1, bi = -1;
  Tensor<Real> x_;

  void init(ParamStore<Real>& ps, const std::string& name, int in, int out,
            int kt_, int kf_, int dil_, Rng& rng) {
    in_ch = in;
    out_ch = out;
    kt = kt_;
    kf = kf_;
    dil = dil_;
    wi = ps.add(name + ".w", {out, in, kt, kf});
    bi = ps.add(name + ".b", {out});
    const double limit = std::sqrt(1.0 / (static_cast<double>(in) * kt * kf));
    for (auto& w : ps[wi].w)
      w = static_cast<Real>(rng.uniform(-limit, limit));
  }

  Tensor<Real> forward(ParamStore<Real>& ps, const Tensor<Real>& x,
                       bool save) {
    if (save) x_ = x;
    const int pt = (kt - 1) / 2;
    const int pf = dil * ((kf - 1) / 2);
    const Real* w = ps[wi].w.data();
    const Real* b = ps[bi].w.data();
    Tensor<Real> y(x.b, out_ch, x.t, x.f);
    for (int n = 0; n < x.b; ++n) {
      for (int o = 0; o < out_ch; ++o) {
        for (int ti = 0; ti < x.t; ++ti) {
          Real* yr = y.row(n, o, ti);
          for (int q = 0; q < x.f; ++q) yr[q] = b[o];
          for (int i = 0; i < in_ch; ++i) {
            for (int a = 0; a < kt; ++a) {
              const int tx = ti + a - pt;
              if (tx < 0 || tx >= x.t) continue;
              const Real* xr = x.row(n, i, tx);
              const Real* wr = w + ((static_cast<std::size_t>(o) * in_ch + i) * kt + a) * kf;
              for (int e = 0; e < kf; ++e) {
                const int s = dil * e - pf;
                if (s >= 0 && s < x.f)
                  RowOps<Real>::axpy(wr[e], xr + s, yr,
                                     static_cast<std::size_t>(x.f - s));
                else if (s < 0 && -s < x.f)
                  RowOps<Real>::axpy(wr[e], xr, yr - s,
                                     static_cast<std::size_t>(x.f + s));
              }
            }
          }
        }
      }
    }
    return y;
  }

  Tensor<Real> backward(ParamStore<Real>& ps, const Tensor<Real>& gy) {
    const Tensor<Real>& x = x_;
    const int pt = (kt - 1) / 2;
    const int pf = dil * ((kf - 1) / 2);
    const Real* w = ps[wi].w.data();
    Real* gw = ps[wi].g.data();
    Real* gb = ps[bi].g.data();
    Tensor<Real> gx(x.b, x.c, x.t, x.f);
    for (int n = 0; n < x.b; ++n) {
      for (int o = 0; o < out_ch; ++o) {
        for (int ti = 0; ti < x.t; ++ti) {
          const Real* gyr = gy.row(n, o, ti);
          gb[o] += RowOps<Real>::sum(gyr, static_cast<std::size_t>(x.f));
          for (int i = 0; i < in_ch; ++i) {
            for (int a = 0; a < kt; ++a) {
              const int tx = ti + a - pt;
              if (tx < 0 || tx >= x.t) continue;
              const Real* xr = x.row(n, i, tx);
              Real* gxr = gx.row(n, i, tx);
              const std::size_t base =
                  ((static_cast<std::size_t>(o) * in_ch + i) * kt + a) * kf;
              for (int e = 0; e < kf; ++e) {
                const int s = dil * e - pf;
                if (s >= 0 && s < x.f) {
                  const std::size_t len = static_cast<std::size_t>(x.f - s);
                  gw[base + e] += RowOps<Real>::dot(gyr, xr + s, len);
                  RowOps<Real>::axpy(w[base + e], gyr, gxr + s, len);
                } else if (s < 0 && -s < x.f) {
                  const std::size_t len = static_cast<std::size_t>(x.f + s);
                  gw[base + e] += RowOps<Real>::dot(gyr - s, xr, len);
                  RowOps<Real>::axpy(w[base + e], gyr - s, gxr, len);
                }
              }
            }
          }
        }
      }
    }
    return gx;
  }
};

// Per-channel batch normalization over (batch, time, freq).
template <typename Real>
struct BatchNorm {
  int ch = 0;
  int gi = -1, bi = -1, rmi = -1, rvi = -1;
  Tensor<Real> xhat_;
  std::vector<Real> invstd_;

  static constexpr double kEps = 1e-5;
  static constexpr double kMomentum = 0.9;

  void init(ParamStore<Real>& ps, const std::string& name, int channels) {
    ch = channels;
    gi = ps.add(name + ".gamma", {ch}, true, Real(1));
    bi = ps.add(name + ".beta", {ch});
    rmi = ps.add(name + ".rmean", {ch}, false);
    rvi = ps.add(name + ".rvar", {ch}, false, Real(1));
  }

  Tensor<Real> forward(ParamStore<Real>& ps, const Tensor<Real>& x,
                       bool train, bool save) {
    Tensor<Real> y(x.b, x.c, x.t, x.f);
    if (save) {
      xhat_.resize(x.b, x.c, x.t, x.f);
      invstd_.assign(static_cast<std::size_t>(ch), Real(0));
    }
    const std::size_t rows = static_cast<std::size_t>(x.b) * x.t;
    const double n = static_cast<double>(rows) * x.f;
    for (int c = 0; c < ch; ++c) {
      double mean, var;
      if (train) {
        double s = 0.0, s2 = 0.0;
        for (int bi_ = 0; bi_ < x.b; ++bi_) {
          for (int ti = 0; ti < x.t; ++ti) {
            const Real* r = x.row(bi_, c, ti);
            for (int q = 0; q < x.f; ++q) {
              s += r[q];
              s2 += static_cast<double>(r[q]) * r[q];
            }
          }
        }
        mean = s / n;
        var = std::max(0.0, s2 / n - mean * mean);
        Real& rm = ps[rmi].w[static_cast<std::size_t>(c)];
        Real& rv = ps[rvi].w[static_cast<std::size_t>(c)];
        rm = static_cast<Real>(kMomentum * rm + (1.0 - kMomentum) * mean);
        rv = static_cast<Real>(kMomentum * rv + (1.0 - kMomentum) * var);
      } else {
        mean = static_cast<double>(ps[rmi].w[static_cast<std::size_t>(c)]);
        var = static_cast<double>(ps[rvi].w[static_cast<std::size_t>(c)]);
      }
      const double inv = 1.0 / std::sqrt(var + kEps);
      const Real gamma = ps[gi].w[static_cast<std::size_t>(c)];
      const Real beta = ps[bi].w[static_cast<std::size_t>(c)];
      const Real scale = static_cast<Real>(gamma * inv);
      const Real shift = static_cast<Real>(beta - gamma * inv * mean);
      if (save) invstd_[static_cast<std::size_t>(c)] = static_cast<Real>(inv);
      for (int bi_ = 0; bi_ < x.b; ++bi_) {
        for (int ti = 0; ti < x.t; ++ti) {
          const Real* r = x.row(bi_, c, ti);
          Real* yr = y.row(bi_, c, ti);
          for (int q = 0; q < x.f; ++q) yr[q] = scale * r[q] + shift;
          if (save) {
            Real* hr = xhat_.row(bi_, c, ti);
            const Real m = static_cast<Real>(mean);
            const Real iv = static_cast<Real>(inv);
            for (int q = 0; q < x.f; ++q) hr[q] = (r[q] - m) * iv;
          }
        }
      }
    }
    return y;
  }

  Tensor<Real> backward(ParamStore<Real>& ps, const Tensor<Real>& gy) {
    const Tensor<Real>& xh = xhat_;
    Tensor<Real> gx(gy.b, gy.c, gy.t, gy.f);
    const double n = static_cast<double>(gy.b) * gy.t * gy.f;
    for (int c = 0; c < ch; ++c) {
      double sg = 0.0, sgx = 0.0;
      for (int bi_ = 0; bi_ < gy.b; ++bi_) {
        for (int ti = 0; ti < gy.t; ++ti) {
          const Real* gr = gy.row(bi_, c, ti);
          const Real* hr = xh.row(bi_, c, ti);
          for (int q = 0; q < gy.f; ++q) {
            sg += gr[q];
            sgx += static_cast<double>(gr[q]) * hr[q];
          }
        }
      }
      ps[bi].g[static_cast<std::size_t>(c)] += static_cast<Real>(sg);
      ps[gi].g[static_cast<std::size_t>(c)] += static_cast<Real>(sgx);
      const Real k = static_cast<Real>(
          ps[gi].w[static_cast<std::size_t>(c)] *
          static_cast<double>(invstd_[static_cast<std::size_t>(c)]));
      const Real m1 = static_cast<Real>(sg / n);
      const Real m2 = static_cast<Real>(sgx / n);
      for (int bi_ = 0; bi_ < gy.b; ++bi_) {
        for (int ti = 0; ti < gy.t; ++ti) {
          const Real* gr = gy.row(bi_, c, ti);
          const Real* hr = xh.row(bi_, c, ti);
          Real* xr = gx.row(bi_, c, ti);
          for (int q = 0; q < gy.f; ++q)
            xr[q] = k * (gr[q] - m1 - hr[q] * m2);
        }
      }
    }
    return gx;
  }
};

template <typename Real>
struct Relu {
  Tensor<Real> y_;

  Tensor<Real> forward(const Tensor<Real>& x, bool save) {
    Tensor<Real> y(x.b, x.c, x.t, x.f);
    for (std::size_t i = 0; i < x.v.size(); ++i)
      y.v[i] = x.v[i] > Real(0) ? x.v[i] : Real(0);
    if (save) y_ = y;
    return y;
  }
  Tensor<Real> backward(const Tensor<Real>& gy) {
    Tensor<Real> gx(gy.b, gy.c, gy.t, gy.f);
    for (std::size_t i = 0; i < gy.v.size(); ++i)
      gx.v[i] = y_.v[i] > Real(0) ? gy.v[i] : Real(0);
    return gx;
  }
};

// Frequency-only max pooling, window 2 stride 2; ties keep the lower index.
template <typename Real>
struct MaxPoolF {
  std::vector<uint8_t> idx_;
  int in_f_ = 0;

  Tensor<Real> forward(const Tensor<Real>& x, bool save) {
    Tensor<Real> y(x.b, x.c, x.t, x.f / 2);
    in_f_ = x.f;
    if (save) idx_.assign(y.v.size(), 0);
    std::size_t k = 0;
    for (int n = 0; n < x.b; ++n) {
      for (int c = 0; c < x.c; ++c) {
        for (int ti = 0; ti < x.t; ++ti) {
          const Real* xr = x.row(n, c, ti);
          Real* yr = y.row(n, c, ti);
          for (int q = 0; q < y.f; ++q, ++k) {
            const uint8_t hi = xr[2 * q + 1] > xr[2 * q] ? 1 : 0;
            yr[q] = xr[2 * q + hi];
            if (save) idx_[k] = hi;
          }
        }
      }
    }
    return y;
  }
  Tensor<Real> backward(const Tensor<Real>& gy) {
    Tensor<Real> gx(gy.b, gy.c, gy.t, in_f_);
    std::size_t k = 0;
    for (int n = 0; n < gy.b; ++n)
      for (int c = 0; c < gy.c; ++c)
        for (int ti = 0; ti < gy.t; ++ti) {
          const Real* gr = gy.row(n, c, ti);
          Real* xr = gx.row(n, c, ti);
          for (int q = 0; q < gy.f; ++q, ++k) xr[2 * q + idx_[k]] = gr[q];
        }
    return gx;
  }
};

// Transposed convolution in frequency: kernel 2, stride 2, identity in time.
template <typename Real>
struct TConvF {
  int in_ch = 0, out_ch = 0;
  int wi = -1, bi = -1;
  Tensor<Real> x_;

  void init(ParamStore<Real>& ps, const std::string& name, int in, int out,
            Rng& rng) {
    in_ch = in;
    out_ch = out;
    wi = ps.add(name + ".w", {in, out, 2});
    bi = ps.add(name + ".b", {out});
    const double limit = std::sqrt(1.0 / static_cast<double>(in));
    for (auto& w : ps[wi].w)
      w = static_cast<Real>(rng.uniform(-limit, limit));
  }

  Tensor<Real> forward(ParamStore<Real>& ps, const Tensor<Real>& x,
                       bool save) {
    if (save) x_ = x;
    const Real* w = ps[wi].w.data();
    const Real* b = ps[bi].w.data();
    Tensor<Real> y(x.b, out_ch, x.t, x.f * 2);
    for (int n = 0; n < x.b; ++n) {
      for (int o = 0; o < out_ch; ++o) {
        for (int ti = 0; ti < x.t; ++ti) {
          Real* yr = y.row(n, o, ti);
          for (int q = 0; q < y.f; ++q) yr[q] = b[o];
          for (int i = 0; i < in_ch; ++i) {
            const Real* xr = x.row(n, i, ti);
            const Real w0 = w[(static_cast<std::size_t>(i) * out_ch + o) * 2];
            const Real w1 =
                w[(static_cast<std::size_t>(i) * out_ch + o) * 2 + 1];
            for (int q = 0; q < x.f; ++q) {
              yr[2 * q] += w0 * xr[q];
              yr[2 * q + 1] += w1 * xr[q];
            }
          }
        }
      }
    }
    return y;
  }

  Tensor<Real> backward(ParamStore<Real>& ps, const Tensor<Real>& gy) {
    const Tensor<Real>& x = x_;
    const Real* w = ps[wi].w.data();
    Real* gw = ps[wi].g.data();
    Real* gb = ps[bi].g.data();
    Tensor<Real> gx(x.b, x.c, x.t, x.f);
    for (int n = 0; n < x.b; ++n) {
      for (int o = 0; o < out_ch; ++o) {
        for (int ti = 0; ti < x.t; ++ti) {
          const Real* gr = gy.row(n, o, ti);
          gb[o] += RowOps<Real>::sum(gr, static_cast<std::size_t>(gy.f));
          for (int i = 0; i < in_ch; ++i) {
            const Real* xr = x.row(n, i, ti);
            Real* xgr = gx.row(n, i, ti);
            const std::size_t base =
                (static_cast<std::size_t>(i) * out_ch + o) * 2;
            Real acc0 = 0, acc1 = 0;
            for (int q = 0; q < x.f; ++q) {
              acc0 += gr[2 * q] * xr[q];
              acc1 += gr[2 * q + 1] * xr[q];
              xgr[q] += w[base] * gr[2 * q] + w[base + 1] * gr[2 * q + 1];
            }
            gw[base] += acc0;
            gw[base + 1] += acc1;
          }
        }
      }
    }
    return gx;
  }
};

// Spatial dropout: whole feature maps dropped per sample, inverted scaling.
template <typename Real>
struct SpatialDropout {
  Real rate = 0;
  std::vector<Real> scale_;  // per (batch, channel); empty when inactive

  Tensor<Real> forward(const Tensor<Real>& x, bool train, Rng* rng) {
    if (!train || rate <= Real(0)) {
      scale_.clear();
      return x;
    }
    scale_.assign(static_cast<std::size_t>(x.b) * x.c, Real(0));
    const Real keep = Real(1) - rate;
    Tensor<Real> y(x.b, x.c, x.t, x.f);
    for (int n = 0; n < x.b; ++n) {
      for (int c = 0; c < x.c; ++c) {
        const Real s =
            rng->uniform() >= static_cast<double>(rate) ? Real(1) / keep : Real(0);
        scale_[static_cast<std::size_t>(n) * x.c + c] = s;
        if (s == Real(0)) continue;
        for (int ti = 0; ti < x.t; ++ti) {
          const Real* xr = x.row(n, c, ti);
          Real* yr = y.row(n, c, ti);
          for (int q = 0; q < x.f; ++q) yr[q] = s * xr[q];
        }
      }
    }
    return y;
  }
  Tensor<Real> backward(const Tensor<Real>& gy) {
    if (scale_.empty()) return gy;
    Tensor<Real> gx(gy.b, gy.c, gy.t, gy.f);
    for (int n = 0; n < gy.b; ++n) {
      for (int c = 0; c < gy.c; ++c) {
        const Real s = scale_[static_cast<std::size_t>(n) * gy.c + c];
        if (s == Real(0)) continue;
        for (int ti = 0; ti < gy.t; ++ti) {
          const Real* gr = gy.row(n, c, ti);
          Real* xr = gx.row(n, c, ti);
          for (int q = 0; q < gy.f; ++q) xr[q] = s * gr[q];
        }
      }
    }
    return gx;
  }
};

template <typename Real>
struct SigmoidLayer {
  Tensor<Real> y_;

  Tensor<Real> forward(const Tensor<Real>& x, bool save) {
    Tensor<Real> y(x.b, x.c, x.t, x.f);
    for (std::size_t i = 0; i < x.v.size(); ++i)
      y.v[i] = Real(1) / (Real(1) + std::exp(-x.v[i]));
    if (save) y_ = y;
    return y;
  }
  Tensor<Real> backward(const Tensor<Real>& gy) {
    Tensor<Real> gx(gy.b, gy.c, gy.t, gy.f);
    for (std::size_t i = 0; i < gy.v.size(); ++i)
      gx.v[i] = gy.v[i] * y_.v[i] * (Real(1) - y_.v[i]);
    return gx;
  }
};

// The U-net: `depth` encoder blocks (two conv-BN-ReLU stages, spatial
// dropout, frequency max-pool except the central block), depth-1 decoder
// blocks (frequency up-convolution, skip concatenation, two conv-BN-ReLU
// stages, dropout), and a 1x1 sigmoid head. Dilation sits on the second
// convolution of each block.
template <typename Real>
class Net {
 public:
  struct EncBlock {
    Conv2d<Real> conv1, conv2;
    BatchNorm<Real> bn1, bn2;
    Relu<Real> relu1, relu2;
    SpatialDropout<Real> drop;
    MaxPoolF<Real> pool;
    bool pooled = false;
  };
  struct DecBlock {
    TConvF<Real> up;
    Conv2d<Real> conv1, conv2;
    BatchNorm<Real> bn1, bn2;
    Relu<Real> relu1, relu2;
    SpatialDropout<Real> drop;
    int skip = 0;
    int up_ch = 0;
  };

  UNetConfig cfg;
  ParamStore<Real> ps;
  std::vector<EncBlock> enc;
  std::vector<DecBlock> dec;
  Conv2d<Real> head;
  SigmoidLayer<Real> out_act;

  Net(const UNetConfig& config, uint64_t seed) : cfg(config) {
    cfg.validate();
    Rng rng(seed);
    int in = cfg.input_features;
    for (int b = 0; b < cfg.depth; ++b) {
      const std::string tag = "enc" + std::to_string(b);
      const int out = cfg.base_filters << b;
      EncBlock eb;
      eb.conv1.init(ps, tag + ".conv1", in, out, cfg.kernel_t, cfg.kernel_f,
                    1, rng);
      eb.bn1.init(ps, tag + ".bn1", out);
      eb.conv2.init(ps, tag + ".conv2", out, out, cfg.kernel_t, cfg.kernel_f,
                    cfg.dilation_at(b), rng);
      eb.bn2.init(ps, tag + ".bn2", out);
      eb.drop.rate = static_cast<Real>(cfg.dropout);
      eb.pooled = b != cfg.depth - 1;
      enc.push_back(std::move(eb));
      in = out;
    }
    for (int k = 0; k < cfg.depth - 1; ++k) {
      const int d = cfg.depth - 2 - k;  // encoder depth being restored
      const std::string tag = "dec" + std::to_string(k);
      const int out = cfg.base_filters << d;
      DecBlock db;
      db.skip = d;
      db.up_ch = out;
      db.up.init(ps, tag + ".up", in, out, rng);
      db.conv1.init(ps, tag + ".conv1", 2 * out, out, cfg.kernel_t,
                    cfg.kernel_f, 1, rng);
      db.bn1.init(ps, tag + ".bn1", out);
      db.conv2.init(ps, tag + ".conv2", out, out, cfg.kernel_t, cfg.kernel_f,
                    cfg.dilation_at(d), rng);
      db.bn2.init(ps, tag + ".bn2", out);
      db.drop.rate = static_cast<Real>(cfg.dropout);
      dec.push_back(std::move(db));
      in = out;
    }
    head.init(ps, "head", in, 1, 1, 1, 1, rng);
  }

  Tensor<Real> forward(const Tensor<Real>& x, bool train, Rng* drop_rng) {
    if (x.c != cfg.input_features || x.t != cfg.seq_frames ||
        x.f != cfg.freq_bins_net)
      throw DataError("unet: input shaped " + std::to_string(x.c) + "x" +
                      std::to_string(x.t) + "x" + std::to_string(x.f) +
                      ", expected " + std::to_string(cfg.input_features) +
                      "x" + std::to_string(cfg.seq_frames) + "x" +
                      std::to_string(cfg.freq_bins_net));
    const bool save = train;
    out_act.y_ = Tensor<Real>();  // invalidate any previous recording
    skips_.assign(static_cast<std::size_t>(cfg.depth), Tensor<Real>());
    Tensor<Real> h = x;
    for (int b = 0; b < cfg.depth; ++b) {
      EncBlock& eb = enc[static_cast<std::size_t>(b)];
      h = eb.relu1.forward(eb.bn1.forward(ps, eb.conv1.forward(ps, h, save),
                                          train, save),
                           save);
      h = eb.relu2.forward(eb.bn2.forward(ps, eb.conv2.forward(ps, h, save),
                                          train, save),
                           save);
      h = eb.drop.forward(h, train, drop_rng);
      if (b != cfg.depth - 1) skips_[static_cast<std::size_t>(b)] = h;
      if (eb.pooled) h = eb.pool.forward(h, save);
    }
    for (auto& db : dec) {
      Tensor<Real> u = db.up.forward(ps, h, save);
      const Tensor<Real>& sk = skips_[static_cast<std::size_t>(db.skip)];
      Tensor<Real> cat(u.b, u.c + sk.c, u.t, u.f);
      for (int n = 0; n < u.b; ++n) {
        for (int c = 0; c < u.c; ++c)
          for (int ti = 0; ti < u.t; ++ti)
            std::copy(u.row(n, c, ti), u.row(n, c, ti) + u.f,
                      cat.row(n, c, ti));
        for (int c = 0; c < sk.c; ++c)
          for (int ti = 0; ti < u.t; ++ti)
            std::copy(sk.row(n, c, ti), sk.row(n, c, ti) + sk.f,
                      cat.row(n, u.c + c, ti));
      }
      h = db.relu1.forward(db.bn1.forward(ps, db.conv1.forward(ps, cat, save),
                                          train, save),
                           save);
      h = db.relu2.forward(db.bn2.forward(ps, db.conv2.forward(ps, h, save),
                                          train, save),
                           save);
      h = db.drop.forward(h, train, drop_rng);
    }
    return out_act.forward(head.forward(ps, h, save), save);
  }

  // Mean-squared-error loss and full backward pass; gradients accumulate
  // into the parameter store. Requires a preceding train-mode forward.
  double loss_backward(const Tensor<Real>& pred, const Tensor<Real>& target) {
    if (!pred.same_shape(target))
      throw DataError("unet: prediction/target shape mismatch");
    if (out_act.y_.v.empty())
      throw DataError("unet: backward without a recorded forward pass");
    Tensor<Real> g(pred.b, pred.c, pred.t, pred.f);
    double acc = 0.0;
    const double n = static_cast<double>(pred.v.size());
    for (std::size_t i = 0; i < pred.v.size(); ++i) {
      const double d = static_cast<double>(pred.v[i]) - target.v[i];
      acc += d * d;
      g.v[i] = static_cast<Real>(2.0 * d / n);
    }
    backward(g);
    return acc / n;
  }

  static double mse(const Tensor<Real>& pred, const Tensor<Real>& target) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.v.size(); ++i) {
      const double d = static_cast<double>(pred.v[i]) - target.v[i];
      acc += d * d;
    }
    return acc / static_cast<double>(pred.v.size());
  }

 private:
  std::vector<Tensor<Real>> skips_;

  void backward(const Tensor<Real>& gout) {
    Tensor<Real> g = head.backward(ps, out_act.backward(gout));
    std::vector<Tensor<Real>> skip_grad(static_cast<std::size_t>(cfg.depth));
    for (int k = static_cast<int>(dec.size()) - 1; k >= 0; --k) {
      DecBlock& db = dec[static_cast<std::size_t>(k)];
      g = db.drop.backward(g);
      g = db.conv2.backward(ps, db.bn2.backward(ps, db.relu2.backward(g)));
      g = db.conv1.backward(ps, db.bn1.backward(ps, db.relu1.backward(g)));
      // split the concatenation: up-path channels first, then the skip
      Tensor<Real> gu(g.b, db.up_ch, g.t, g.f);
      Tensor<Real>& gs = skip_grad[static_cast<std::size_t>(db.skip)];
      gs.resize(g.b, g.c - db.up_ch, g.t, g.f);
      for (int n = 0; n < g.b; ++n) {
        for (int c = 0; c < db.up_ch; ++c)
          for (int ti = 0; ti < g.t; ++ti)
            std::copy(g.row(n, c, ti), g.row(n, c, ti) + g.f,
                      gu.row(n, c, ti));
        for (int c = db.up_ch; c < g.c; ++c)
          for (int ti = 0; ti < g.t; ++ti)
            std::copy(g.row(n, c, ti), g.row(n, c, ti) + g.f,
                      gs.row(n, c - db.up_ch, ti));
      }
      g = db.up.backward(ps, gu);
    }
    for (int b = cfg.depth - 1; b >= 0; --b) {
      EncBlock& eb = enc[static_cast<std::size_t>(b)];
      if (eb.pooled) g = eb.pool.backward(g);
      const Tensor<Real>& gs = skip_grad[static_cast<std::size_t>(b)];
      if (!gs.v.empty())
        for (std::size_t i = 0; i < g.v.size(); ++i) g.v[i] += gs.v[i];
      g = eb.drop.backward(g);
      g = eb.conv2.backward(ps, eb.bn2.backward(ps, eb.relu2.backward(g)));
      g = eb.conv1.backward(ps, eb.bn1.backward(ps, eb.relu1.backward(g)));
    }
  }
};

}  // namespace foamask::unet

#endif  // FOAMASK_UNET_NET_HPP_
