// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/deform_conv.hpp"

#include <cmath>
#include <cstring>
#include <vector>

#include "gemm.hpp"
#include "vsr/ops.hpp"
#include "vsr/parallel.hpp"

namespace vsr {

namespace {

constexpr int kTaps = 9;  // 3x3 grid, row-major; tap k displaces by (k%3-1, k/3-1)

// Resolved sampling geometry for one tap at one output position. Invalid
// corners keep index 0 with weight 0 so gathers never read out of bounds.
template <typename T>
struct SamplePoint {
  int64_t idx[4];  // plane-relative corner indices: 00, 01, 10, 11
  T w[4];
  T lx, ly;
  bool corner_ok[4];
  bool inside;  // false when the whole neighborhood reads zero
};

template <typename T>
SamplePoint<T> resolve(T px, T py, int64_t H, int64_t W) {
  SamplePoint<T> s{};
  if (px <= T(-1) || px >= T(W) || py <= T(-1) || py >= T(H)) return s;
  s.inside = true;
  int64_t x0 = static_cast<int64_t>(std::floor(px));
  int64_t y0 = static_cast<int64_t>(std::floor(py));
  s.lx = px - T(x0);
  s.ly = py - T(y0);
  const int64_t xs[2] = {x0, x0 + 1};
  const int64_t ys[2] = {y0, y0 + 1};
  const T wx[2] = {T(1) - s.lx, s.lx};
  const T wy[2] = {T(1) - s.ly, s.ly};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      int k = i * 2 + j;
      bool ok = ys[i] >= 0 && ys[i] < H && xs[j] >= 0 && xs[j] < W;
      s.corner_ok[k] = ok;
      s.idx[k] = ok ? ys[i] * W + xs[j] : 0;
      s.w[k] = ok ? wy[i] * wx[j] : T(0);
    }
  return s;
}

template <typename T>
std::vector<T>& scratch(int slot) {
  thread_local std::vector<T> bufs[4];
  return bufs[slot];
}

// Samples one image into a (C*9, H*W) column buffer whose rows are ordered
// (c, tap) to line up with the (C_out, C_in, 3, 3) weight layout.
template <typename T>
void deform_im2col(const T* im, const T* off, int64_t C, int64_t H, int64_t W, T* col) {
  const int64_t hw = H * W;
  for (int n = 0; n < kTaps; ++n) {
    const int dx = n % 3 - 1, dy = n / 3 - 1;
    const T* offx = off + (2 * n) * hw;
    const T* offy = off + (2 * n + 1) * hw;
    for (int64_t y = 0; y < H; ++y)
      for (int64_t x = 0; x < W; ++x) {
        const int64_t pos = y * W + x;
        auto s = resolve<T>(T(x + dx) + offx[pos], T(y + dy) + offy[pos], H, W);
        T* dst = col + n * hw + pos;  // then stride 9*hw per channel
        if (!s.inside) {
          for (int64_t c = 0; c < C; ++c) dst[c * kTaps * hw] = T(0);
          continue;
        }
        for (int64_t c = 0; c < C; ++c) {
          const T* p = im + c * hw;
          dst[c * kTaps * hw] =
              s.w[0] * p[s.idx[0]] + s.w[1] * p[s.idx[1]] + s.w[2] * p[s.idx[2]] + s.w[3] * p[s.idx[3]];
        }
      }
  }
}

// Scatters column gradients back to the input image and offset field.
template <typename T>
void deform_col2im(const T* gcol, const T* im, const T* off, int64_t C, int64_t H, int64_t W,
                   T* gim, T* goff) {
  const int64_t hw = H * W;
  for (int n = 0; n < kTaps; ++n) {
    const int dx = n % 3 - 1, dy = n / 3 - 1;
    const T* offx = off + (2 * n) * hw;
    const T* offy = off + (2 * n + 1) * hw;
    T* goffx = goff ? goff + (2 * n) * hw : nullptr;
    T* goffy = goff ? goff + (2 * n + 1) * hw : nullptr;
    for (int64_t y = 0; y < H; ++y)
      for (int64_t x = 0; x < W; ++x) {
        const int64_t pos = y * W + x;
        auto s = resolve<T>(T(x + dx) + offx[pos], T(y + dy) + offy[pos], H, W);
        if (!s.inside) continue;
        T gx = 0, gy = 0;
        for (int64_t c = 0; c < C; ++c) {
          const T g = gcol[(c * kTaps + n) * hw + pos];
          if (gim) {
            T* gp = gim + c * hw;
            for (int k = 0; k < 4; ++k)
              if (s.corner_ok[k]) gp[s.idx[k]] += g * s.w[k];
          }
          if (goff) {
            const T* p = im + c * hw;
            const T v00 = s.corner_ok[0] ? p[s.idx[0]] : T(0);
            const T v01 = s.corner_ok[1] ? p[s.idx[1]] : T(0);
            const T v10 = s.corner_ok[2] ? p[s.idx[2]] : T(0);
            const T v11 = s.corner_ok[3] ? p[s.idx[3]] : T(0);
            gx += g * ((T(1) - s.ly) * (v01 - v00) + s.ly * (v11 - v10));
            gy += g * ((T(1) - s.lx) * (v10 - v00) + s.lx * (v11 - v01));
          }
        }
        if (goff) {
          goffx[pos] += gx;
          goffy[pos] += gy;
        }
      }
  }
}

template <typename T>
void forward_batch(const T* in, const T* off, const T* wt, const T* bias, T* out, int64_t batch,
                   int64_t cin, int64_t cout, int64_t H, int64_t W) {
  const int64_t hw = H * W, K = cin * kTaps;
  parallel_for(batch, [&](int64_t b0, int64_t b1, int) {
    std::vector<T>& col = scratch<T>(0);
    col.resize(static_cast<size_t>(K * hw));
    for (int64_t b = b0; b < b1; ++b) {
      deform_im2col(in + b * cin * hw, off + b * 2 * kTaps * hw, cin, H, W, col.data());
      T* ob = out + b * cout * hw;
      detail::gemm(false, false, cout, hw, K, T(1), wt, K, col.data(), hw, T(0), ob, hw);
      if (bias)
        for (int64_t co = 0; co < cout; ++co) {
          T bv = bias[co];
          T* row = ob + co * hw;
          for (int64_t i = 0; i < hw; ++i) row[i] += bv;
        }
    }
  });
}

template <typename T>
void backward_batch(const T* in, const T* off, const T* wt, const T* gout, T* gin, T* goff, T* gwt,
                    T* gbias, int64_t batch, int64_t cin, int64_t cout, int64_t H, int64_t W) {
  const int64_t hw = H * W, K = cin * kTaps;
  const int nchunks = std::max(1, std::min<int>(num_threads(), static_cast<int>(batch)));
  std::vector<std::vector<T>> gwt_part(nchunks), gbias_part(nchunks);
  parallel_for(batch, [&](int64_t b0, int64_t b1, int chunk) {
    std::vector<T>& col = scratch<T>(0);
    std::vector<T>& gcol = scratch<T>(1);
    col.resize(static_cast<size_t>(K * hw));
    gcol.resize(static_cast<size_t>(K * hw));
    std::vector<T>* gw = nullptr;
    std::vector<T>* gb = nullptr;
    if (gwt) {
      gwt_part[chunk].assign(static_cast<size_t>(cout * K), T(0));
      gw = &gwt_part[chunk];
    }
    if (gbias) {
      gbias_part[chunk].assign(static_cast<size_t>(cout), T(0));
      gb = &gbias_part[chunk];
    }
    for (int64_t b = b0; b < b1; ++b) {
      const T* inb = in + b * cin * hw;
      const T* offb = off + b * 2 * kTaps * hw;
      const T* gob = gout + b * cout * hw;
      if (gw) {
        deform_im2col(inb, offb, cin, H, W, col.data());
        detail::gemm(false, true, cout, K, hw, T(1), gob, hw, col.data(), hw, T(1), gw->data(), K);
      }
      if (gb)
        for (int64_t co = 0; co < cout; ++co) {
          double s = 0;
          const T* row = gob + co * hw;
          for (int64_t i = 0; i < hw; ++i) s += static_cast<double>(row[i]);
          (*gb)[co] += static_cast<T>(s);
        }
      if (gin || goff) {
        detail::gemm(true, false, K, hw, cout, T(1), wt, K, gob, hw, T(0), gcol.data(), hw);
        deform_col2im(gcol.data(), inb, offb, cin, H, W, gin ? gin + b * cin * hw : nullptr,
                      goff ? goff + b * 2 * kTaps * hw : nullptr);
      }
    }
  });
  for (int chunk = 0; chunk < nchunks; ++chunk) {
    if (gwt && !gwt_part[chunk].empty())
      for (int64_t i = 0; i < cout * K; ++i) gwt[i] += gwt_part[chunk][static_cast<size_t>(i)];
    if (gbias && !gbias_part[chunk].empty())
      for (int64_t i = 0; i < cout; ++i) gbias[i] += gbias_part[chunk][static_cast<size_t>(i)];
  }
}

}  // namespace

double bilinear_sample(const Tensor& feature, double x, double y, int64_t n, int64_t c) {
  const Shape s = feature.shape();
  if (n < 0 || n >= s.n || c < 0 || c >= s.c)
    throw invalid_error("bilinear_sample: index (" + std::to_string(n) + "," + std::to_string(c) +
                        ") outside " + s.str());
  double out = 0;
  dispatch_dtype(feature.dtype(), [&](auto tag) {
    using T = decltype(tag);
    auto sp = resolve<double>(x, y, s.h, s.w);
    if (!sp.inside) return;
    const T* p = feature.data<T>() + (n * s.c + c) * s.h * s.w;
    for (int k = 0; k < 4; ++k)
      if (sp.corner_ok[k]) out += sp.w[k] * static_cast<double>(p[sp.idx[k]]);
  });
  return out;
}

Tensor deformable_conv2d(const Tensor& input, const Tensor& offsets, const Tensor& weight,
                         const Tensor* bias) {
  const Shape is = input.shape(), os = offsets.shape(), ws = weight.shape();
  check_same_dtype(input, offsets, "deformable_conv2d");
  check_same_dtype(input, weight, "deformable_conv2d");
  if (ws.h != 3 || ws.w != 3)
    throw invalid_error("deformable_conv2d: kernel must be 3x3, got " + ws.str());
  if (ws.c != is.c)
    throw invalid_error("deformable_conv2d: input channels " + std::to_string(is.c) +
                        " != weight C_in " + std::to_string(ws.c));
  if (os.c != 2 * kTaps)
    throw invalid_error("deformable_conv2d: offset field needs " + std::to_string(2 * kTaps) +
                        " channels, got " + std::to_string(os.c));
  if (os.n != is.n || os.h != is.h || os.w != is.w)
    throw invalid_error("deformable_conv2d: offset field " + os.str() +
                        " does not match input grid " + is.str());
  if (bias && bias->numel() != ws.n)
    throw invalid_error("deformable_conv2d: bias has " + std::to_string(bias->numel()) +
                        " elements, expected " + std::to_string(ws.n));

  Tensor out({is.n, ws.n, is.h, is.w}, input.dtype());
  dispatch_dtype(input.dtype(), [&](auto tag) {
    using T = decltype(tag);
    forward_batch(input.data<T>(), offsets.data<T>(), weight.data<T>(),
                  bias ? bias->data<T>() : nullptr, out.data<T>(), is.n, is.c, ws.n, is.h, is.w);
  });

  std::vector<Tensor> inputs = {input, offsets, weight};
  if (bias) inputs.push_back(*bias);
  auto ii = input.impl(), fi = offsets.impl(), wi = weight.impl();
  auto bi = bias ? bias->impl() : nullptr;
  attach_grad_node(out, "deformable_conv2d", inputs, [ii, fi, wi, bi](TensorImpl& o) {
    const Shape is = ii->shape, ws = wi->shape;
    dispatch_dtype(ii->dtype, [&](auto tag) {
      using T = decltype(tag);
      backward_batch(ii->data_as<T>(), fi->data_as<T>(), wi->data_as<T>(), o.grad_as<T>(),
                     ii->requires_grad ? ii->grad_as<T>() : nullptr,
                     fi->requires_grad ? fi->grad_as<T>() : nullptr,
                     wi->requires_grad ? wi->grad_as<T>() : nullptr,
                     (bi && bi->requires_grad) ? bi->grad_as<T>() : nullptr, is.n, is.c, ws.n, is.h,
                     is.w);
    });
  });
  return out;
}

}  // namespace vsr
