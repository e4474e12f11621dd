// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations used to cross-check the library.
// Everything here is written as plain per-output-pixel loops in double
// precision and deliberately shares no helper code with the implementation
// under test. Slow on purpose; use small instances.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "vsr/error.hpp"
#include "vsr/rng.hpp"
#include "vsr/tensor.hpp"

namespace oracle {

using vsr::Shape;
using vsr::Tensor;

inline double at(const Tensor& t, int64_t n, int64_t c, int64_t y, int64_t x) {
  const Shape& s = t.shape();
  return t.value_at(((n * s.c + c) * s.h + y) * s.w + x);
}

inline Tensor random_tensor(Shape shape, uint64_t seed, double lo = -1.0, double hi = 1.0,
                            vsr::Dtype dt = vsr::Dtype::F32) {
  Tensor t(shape, dt);
  vsr::rng::Stream st(seed);
  for (int64_t i = 0; i < t.numel(); ++i) t.set_value_at(i, lo + (hi - lo) * st.next_uniform());
  return t;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (!(a.shape() == b.shape()))
    throw vsr::invalid_error("max_abs_diff: shape mismatch " + a.shape().str() + " vs " + b.shape().str());
  double m = 0;
  for (int64_t i = 0; i < a.numel(); ++i)
    m = std::max(m, std::fabs(a.value_at(i) - b.value_at(i)));
  return m;
}

// |a-b| / max(|a|, |b|, floor), worst element.
inline double max_rel_diff(const Tensor& a, const Tensor& b, double floor_ = 1.0) {
  if (!(a.shape() == b.shape()))
    throw vsr::invalid_error("max_rel_diff: shape mismatch " + a.shape().str() + " vs " + b.shape().str());
  double m = 0;
  for (int64_t i = 0; i < a.numel(); ++i) {
    const double va = a.value_at(i), vb = b.value_at(i);
    m = std::max(m, std::fabs(va - vb) / std::max({std::fabs(va), std::fabs(vb), floor_}));
  }
  return m;
}

// ------------------------------------------------------------- convolution

inline Tensor conv2d(const Tensor& in, const Tensor& w, const Tensor* bias, int stride = 1,
                     int pad = 1) {
  const Shape is = in.shape(), ws = w.shape();
  const int64_t oh = (is.h + 2 * pad - ws.h) / stride + 1;
  const int64_t ow = (is.w + 2 * pad - ws.w) / stride + 1;
  Tensor out({is.n, ws.n, oh, ow}, vsr::Dtype::F64);
  for (int64_t n = 0; n < is.n; ++n)
    for (int64_t oc = 0; oc < ws.n; ++oc)
      for (int64_t oy = 0; oy < oh; ++oy)
        for (int64_t ox = 0; ox < ow; ++ox) {
          double acc = bias ? bias->value_at(oc) : 0.0;
          for (int64_t c = 0; c < is.c; ++c)
            for (int64_t ky = 0; ky < ws.h; ++ky)
              for (int64_t kx = 0; kx < ws.w; ++kx) {
                const int64_t iy = oy * stride - pad + ky, ix = ox * stride - pad + kx;
                if (iy < 0 || iy >= is.h || ix < 0 || ix >= is.w) continue;
                acc += at(w, oc, c, ky, kx) * at(in, n, c, iy, ix);
              }
          out.set_value_at(((n * ws.n + oc) * oh + oy) * ow + ox, acc);
        }
  return out;
}

// Bilinear tap with the sampling rule of the deformable layer: positions a
// full pixel outside the frame contribute nothing; otherwise out-of-range
// corners read as zero.
inline double bilinear(const Tensor& in, int64_t n, int64_t c, double py, double px) {
  const Shape& s = in.shape();
  if (px <= -1.0 || px >= static_cast<double>(s.w) || py <= -1.0 ||
      py >= static_cast<double>(s.h))
    return 0.0;
  const int64_t x0 = static_cast<int64_t>(std::floor(px)), y0 = static_cast<int64_t>(std::floor(py));
  const double lx = px - x0, ly = py - y0;
  auto v = [&](int64_t yy, int64_t xx) {
    if (yy < 0 || yy >= s.h || xx < 0 || xx >= s.w) return 0.0;
    return at(in, n, c, yy, xx);
  };
  return (1 - ly) * ((1 - lx) * v(y0, x0) + lx * v(y0, x0 + 1)) +
         ly * ((1 - lx) * v(y0 + 1, x0) + lx * v(y0 + 1, x0 + 1));
}

// 3x3 deformable convolution, stride 1, pad 1. Offset channel 2k shifts tap
// k in x, channel 2k+1 in y; taps are enumerated row-major over the kernel.
inline Tensor deform_conv2d(const Tensor& in, const Tensor& off, const Tensor& w,
                            const Tensor* bias) {
  const Shape is = in.shape(), ws = w.shape();
  Tensor out({is.n, ws.n, is.h, is.w}, vsr::Dtype::F64);
  for (int64_t n = 0; n < is.n; ++n)
    for (int64_t oc = 0; oc < ws.n; ++oc)
      for (int64_t y = 0; y < is.h; ++y)
        for (int64_t x = 0; x < is.w; ++x) {
          double acc = bias ? bias->value_at(oc) : 0.0;
          for (int k = 0; k < 9; ++k) {
            const int dx = k % 3 - 1, dy = k / 3 - 1;
            const double px = x + dx + at(off, n, 2 * k, y, x);
            const double py = y + dy + at(off, n, 2 * k + 1, y, x);
            for (int64_t c = 0; c < is.c; ++c)
              acc += at(w, oc, c, dy + 1, dx + 1) * bilinear(in, n, c, py, px);
          }
          out.set_value_at(((n * ws.n + oc) * is.h + y) * is.w + x, acc);
        }
  return out;
}

// ------------------------------------------------------------- degradation

inline double keys_cubic(double t) {
  t = std::fabs(t);
  const double a = -0.5;
  if (t <= 1) return (a + 2) * t * t * t - (a + 3) * t * t + 1;
  if (t < 2) return a * t * t * t - 5 * a * t * t + 8 * a * t - 4 * a;
  return 0;
}

// Keys-kernel resize with edge replication, per output pixel as one direct
// 2-D weighted sum; kernel stretched when shrinking with antialias on.
inline Tensor resize_keys(const Tensor& img, int64_t oh, int64_t ow, bool antialias) {
  const Shape s = img.shape();
  Tensor out({s.n, s.c, oh, ow}, vsr::Dtype::F64);
  auto weights_for = [&](int64_t n_in, int64_t n_out, int64_t i, std::vector<double>& w,
                         int64_t& first) {
    const double ratio = static_cast<double>(n_in) / n_out;
    const double scale = antialias && n_out < n_in ? static_cast<double>(n_out) / n_in : 1.0;
    const double u = (i + 0.5) * ratio - 0.5;
    const double support = 2.0 / scale;
    first = static_cast<int64_t>(std::floor(u - support)) + 1;
    const int64_t last = static_cast<int64_t>(std::floor(u + support));
    w.clear();
    double sum = 0;
    for (int64_t j = first; j <= last; ++j) {
      w.push_back(scale * keys_cubic(scale * (u - j)));
      sum += w.back();
    }
    for (double& v : w) v /= sum;
  };
  std::vector<double> wy, wx;
  for (int64_t n = 0; n < s.n; ++n)
    for (int64_t c = 0; c < s.c; ++c)
      for (int64_t y = 0; y < oh; ++y) {
        int64_t fy = 0;
        weights_for(s.h, oh, y, wy, fy);
        for (int64_t x = 0; x < ow; ++x) {
          int64_t fx = 0;
          weights_for(s.w, ow, x, wx, fx);
          double acc = 0;
          for (size_t ty = 0; ty < wy.size(); ++ty)
            for (size_t tx = 0; tx < wx.size(); ++tx) {
              const int64_t iy = std::clamp<int64_t>(fy + static_cast<int64_t>(ty), 0, s.h - 1);
              const int64_t ix = std::clamp<int64_t>(fx + static_cast<int64_t>(tx), 0, s.w - 1);
              acc += wy[ty] * wx[tx] * at(img, n, c, iy, ix);
            }
          out.set_value_at(((n * s.c + c) * oh + y) * ow + x, std::clamp(acc, 0.0, 1.0));
        }
      }
  return out;
}

// Gaussian blur (truncated at 4 sigma, renormalized, mirrored borders) as one
// direct 2-D convolution, then decimation by s starting at phase.
inline Tensor blur_decimate(const Tensor& img, int s, double sigma, int phase) {
  const Shape sh = img.shape();
  const int r = static_cast<int>(std::floor(4.0 * sigma));
  std::vector<double> k(static_cast<size_t>(2 * r + 1));
  double ksum = 0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<size_t>(i + r)] = sigma > 0 ? std::exp(-0.5 * i * i / (sigma * sigma)) : 1.0;
    ksum += k[static_cast<size_t>(i + r)];
  }
  for (double& v : k) v /= ksum;
  auto mirror = [](int64_t i, int64_t n) {
    while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
    return i;
  };
  const int64_t oh = sh.h / s, ow = sh.w / s;
  Tensor out({sh.n, sh.c, oh, ow}, vsr::Dtype::F64);
  for (int64_t n = 0; n < sh.n; ++n)
    for (int64_t c = 0; c < sh.c; ++c)
      for (int64_t y = 0; y < oh; ++y)
        for (int64_t x = 0; x < ow; ++x) {
          const int64_t cy = y * s + phase, cx = x * s + phase;
          double acc = 0;
          for (int ty = -r; ty <= r; ++ty)
            for (int tx = -r; tx <= r; ++tx)
              acc += k[static_cast<size_t>(ty + r)] * k[static_cast<size_t>(tx + r)] *
                     at(img, n, c, mirror(cy + ty, sh.h), mirror(cx + tx, sh.w));
          out.set_value_at(((n * sh.c + c) * oh + y) * ow + x, acc);
        }
  return out;
}

// ----------------------------------------------------------------- metrics

// Cropped planes in double; single luma plane (BT.601 full range) or 3 RGB.
inline std::vector<std::vector<double>> planes_of(const Tensor& f, int border, bool luma,
                                                  int64_t& h, int64_t& w) {
  const Shape s = f.shape();
  h = s.h - 2 * border;
  w = s.w - 2 * border;
  std::vector<std::vector<double>> rgb(3, std::vector<double>(static_cast<size_t>(h * w)));
  for (int c = 0; c < 3; ++c)
    for (int64_t y = 0; y < h; ++y)
      for (int64_t x = 0; x < w; ++x)
        rgb[static_cast<size_t>(c)][static_cast<size_t>(y * w + x)] =
            at(f, 0, c, y + border, x + border);
  if (!luma) return rgb;
  std::vector<double> yp(static_cast<size_t>(h * w));
  for (size_t i = 0; i < yp.size(); ++i)
    yp[i] = 0.299 * rgb[0][i] + 0.587 * rgb[1][i] + 0.114 * rgb[2][i];
  return {yp};
}

inline double psnr(const Tensor& pred, const Tensor& gt, int border, bool luma) {
  int64_t h = 0, w = 0;
  auto a = planes_of(pred, border, luma, h, w);
  auto b = planes_of(gt, border, luma, h, w);
  double se = 0;
  size_t count = 0;
  for (size_t p = 0; p < a.size(); ++p) {
    for (size_t i = 0; i < a[p].size(); ++i) se += (a[p][i] - b[p][i]) * (a[p][i] - b[p][i]);
    count += a[p].size();
  }
  const double mse = se / static_cast<double>(count);
  if (mse == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

// Direct windowed SSIM: every 11x11 window fully inside the cropped frame,
// non-separable weighted moments.
inline double ssim(const Tensor& pred, const Tensor& gt, int border, bool luma) {
  constexpr int W = 11;
  constexpr double C1 = 1e-4, C2 = 9e-4;
  double g[W], gs = 0;
  for (int i = 0; i < W; ++i) {
    const double d = i - 5.0;
    g[i] = std::exp(-d * d / (2 * 1.5 * 1.5));
    gs += g[i];
  }
  for (double& v : g) v /= gs;
  int64_t h = 0, w = 0;
  auto ap = planes_of(pred, border, luma, h, w);
  auto bp = planes_of(gt, border, luma, h, w);
  double total = 0;
  for (size_t p = 0; p < ap.size(); ++p) {
    double plane_sum = 0;
    int64_t windows = 0;
    for (int64_t y = 0; y + W <= h; ++y)
      for (int64_t x = 0; x + W <= w; ++x) {
        double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
        for (int ty = 0; ty < W; ++ty)
          for (int tx = 0; tx < W; ++tx) {
            const double wt = g[ty] * g[tx];
            const double va = ap[p][static_cast<size_t>((y + ty) * w + x + tx)];
            const double vb = bp[p][static_cast<size_t>((y + ty) * w + x + tx)];
            ma += wt * va;
            mb += wt * vb;
            saa += wt * va * va;
            sbb += wt * vb * vb;
            sab += wt * va * vb;
          }
        const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
        plane_sum += ((2 * ma * mb + C1) * (2 * cov + C2)) /
                     ((ma * ma + mb * mb + C1) * (va + vb + C2));
        ++windows;
      }
    total += plane_sum / static_cast<double>(windows);
  }
  return total / static_cast<double>(ap.size());
}

}  // namespace oracle
