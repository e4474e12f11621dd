// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstring>
#include <vector>

#include "gemm.hpp"
#include "vsr/ops.hpp"
#include "vsr/parallel.hpp"

namespace vsr {

namespace {

// Per-thread scratch, keyed by slot so nested uses don't clobber.
template <typename T>
std::vector<T>& scratch(int slot) {
  thread_local std::vector<T> bufs[4];
  return bufs[slot];
}

// Unfolds one image (C,H,W) into col (C*kh*kw, oh*ow); rows ordered
// (c, ki, kj), columns ordered (oy, ox). Out-of-image taps become 0.
template <typename T>
void im2col(const T* im, int64_t C, int64_t H, int64_t W, int kh, int kw, int stride, int pad,
            int64_t oh, int64_t ow, T* col) {
  for (int64_t c = 0; c < C; ++c) {
    const T* imc = im + c * H * W;
    for (int ki = 0; ki < kh; ++ki)
      for (int kj = 0; kj < kw; ++kj) {
        T* dst = col + ((c * kh + ki) * kw + kj) * oh * ow;
        for (int64_t oy = 0; oy < oh; ++oy) {
          int64_t iy = oy * stride - pad + ki;
          T* drow = dst + oy * ow;
          if (iy < 0 || iy >= H) {
            std::fill(drow, drow + ow, T(0));
            continue;
          }
          const T* srow = imc + iy * W;
          if (stride == 1) {
            int64_t x0 = kj - pad;  // input x at ox = 0
            int64_t lo = std::clamp<int64_t>(-x0, 0, ow);
            int64_t hi = std::clamp<int64_t>(W - x0, lo, ow);
            std::fill(drow, drow + lo, T(0));
            if (hi > lo) std::memcpy(drow + lo, srow + x0 + lo, static_cast<size_t>(hi - lo) * sizeof(T));
            std::fill(drow + hi, drow + ow, T(0));
          } else {
            for (int64_t ox = 0; ox < ow; ++ox) {
              int64_t ix = ox * stride - pad + kj;
              drow[ox] = (ix >= 0 && ix < W) ? srow[ix] : T(0);
            }
          }
        }
      }
  }
}

// Transpose of im2col: accumulates col back into the image gradient.
template <typename T>
void col2im_acc(const T* col, int64_t C, int64_t H, int64_t W, int kh, int kw, int stride, int pad,
                int64_t oh, int64_t ow, T* im_grad) {
  for (int64_t c = 0; c < C; ++c) {
    T* imc = im_grad + c * H * W;
    for (int ki = 0; ki < kh; ++ki)
      for (int kj = 0; kj < kw; ++kj) {
        const T* src = col + ((c * kh + ki) * kw + kj) * oh * ow;
        for (int64_t oy = 0; oy < oh; ++oy) {
          int64_t iy = oy * stride - pad + ki;
          if (iy < 0 || iy >= H) continue;
          const T* srow = src + oy * ow;
          T* drow = imc + iy * W;
          for (int64_t ox = 0; ox < ow; ++ox) {
            int64_t ix = ox * stride - pad + kj;
            if (ix >= 0 && ix < W) drow[ix] += srow[ox];
          }
        }
      }
  }
}

struct ConvDims {
  int64_t cin, cout, h, w, oh, ow;
  int kh, kw, stride, pad;
  int64_t patch() const { return cin * kh * kw; }
};

template <typename T>
void conv2d_forward(const T* in, const T* wt, const T* bias, T* out, int64_t batch,
                    const ConvDims& d) {
  const int64_t ohw = d.oh * d.ow;
  parallel_for(batch, [&](int64_t b0, int64_t b1, int) {
    std::vector<T>& col = scratch<T>(0);
    col.resize(static_cast<size_t>(d.patch() * ohw));
    for (int64_t b = b0; b < b1; ++b) {
      im2col(in + b * d.cin * d.h * d.w, d.cin, d.h, d.w, d.kh, d.kw, d.stride, d.pad, d.oh, d.ow,
             col.data());
      T* ob = out + b * d.cout * ohw;
      detail::gemm(false, false, d.cout, ohw, d.patch(), T(1), wt, d.patch(), col.data(), ohw, T(0),
                   ob, ohw);
      if (bias)
        for (int64_t co = 0; co < d.cout; ++co) {
          T bv = bias[co];
          T* row = ob + co * ohw;
          for (int64_t i = 0; i < ohw; ++i) row[i] += bv;
        }
    }
  });
}

template <typename T>
void conv2d_backward(const T* in, const T* wt, const T* gout, T* gin, T* gwt, T* gbias,
                     int64_t batch, const ConvDims& d) {
  const int64_t ohw = d.oh * d.ow;
  const int64_t wsz = d.cout * d.patch();
  // Per-chunk weight/bias accumulators merged in chunk order keep the
  // reduction deterministic for a fixed thread cap.
  const int nchunks = std::max(1, std::min<int>(num_threads(), static_cast<int>(batch)));
  std::vector<std::vector<T>> gwt_part(nchunks), gbias_part(nchunks);
  parallel_for(batch, [&](int64_t b0, int64_t b1, int chunk) {
    std::vector<T>& col = scratch<T>(0);
    std::vector<T>& gcol = scratch<T>(1);
    col.resize(static_cast<size_t>(d.patch() * ohw));
    gcol.resize(static_cast<size_t>(d.patch() * ohw));
    std::vector<T>* gw = nullptr;
    std::vector<T>* gb = nullptr;
    if (gwt) {
      gwt_part[chunk].assign(static_cast<size_t>(wsz), T(0));
      gw = &gwt_part[chunk];
    }
    if (gbias) {
      gbias_part[chunk].assign(static_cast<size_t>(d.cout), T(0));
      gb = &gbias_part[chunk];
    }
    for (int64_t b = b0; b < b1; ++b) {
      const T* gob = gout + b * d.cout * ohw;
      if (gw || gin) {
        im2col(in + b * d.cin * d.h * d.w, d.cin, d.h, d.w, d.kh, d.kw, d.stride, d.pad, d.oh, d.ow,
               col.data());
      }
      if (gw)
        detail::gemm(false, true, d.cout, d.patch(), ohw, T(1), gob, ohw, col.data(), ohw, T(1),
                     gw->data(), d.patch());
      if (gb)
        for (int64_t co = 0; co < d.cout; ++co) {
          double s = 0;
          const T* row = gob + co * ohw;
          for (int64_t i = 0; i < ohw; ++i) s += static_cast<double>(row[i]);
          (*gb)[co] += static_cast<T>(s);
        }
      if (gin) {
        detail::gemm(true, false, d.patch(), ohw, d.cout, T(1), wt, d.patch(), gob, ohw, T(0),
                     gcol.data(), ohw);
        col2im_acc(gcol.data(), d.cin, d.h, d.w, d.kh, d.kw, d.stride, d.pad, d.oh, d.ow,
                   gin + b * d.cin * d.h * d.w);
      }
    }
  });
  for (int chunk = 0; chunk < nchunks; ++chunk) {
    if (gwt && !gwt_part[chunk].empty())
      for (int64_t i = 0; i < wsz; ++i) gwt[i] += gwt_part[chunk][static_cast<size_t>(i)];
    if (gbias && !gbias_part[chunk].empty())
      for (int64_t i = 0; i < d.cout; ++i) gbias[i] += gbias_part[chunk][static_cast<size_t>(i)];
  }
}

}  // namespace

Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor* bias, int stride,
              int padding) {
  const Shape is = input.shape();
  const Shape ws = weight.shape();
  check_same_dtype(input, weight, "conv2d");
  if (stride < 1) throw invalid_error("conv2d: stride must be >= 1");
  if (padding < 0) throw invalid_error("conv2d: padding must be >= 0");
  if (is.c != ws.c)
    throw invalid_error("conv2d: input channels " + std::to_string(is.c) +
                        " != weight C_in " + std::to_string(ws.c) + " (weight " + ws.str() + ")");
  if (bias && (bias->numel() != ws.n))
    throw invalid_error("conv2d: bias has " + std::to_string(bias->numel()) +
                        " elements, expected " + std::to_string(ws.n));
  ConvDims d{};
  d.cin = is.c;
  d.cout = ws.n;
  d.h = is.h;
  d.w = is.w;
  d.kh = static_cast<int>(ws.h);
  d.kw = static_cast<int>(ws.w);
  d.stride = stride;
  d.pad = padding;
  d.oh = (is.h + 2 * padding - ws.h) / stride + 1;
  d.ow = (is.w + 2 * padding - ws.w) / stride + 1;
  if (d.oh <= 0 || d.ow <= 0 || is.h + 2 * padding < ws.h || is.w + 2 * padding < ws.w)
    throw invalid_error("conv2d: non-positive output size for input " + is.str() + ", kernel " +
                        ws.str() + ", stride " + std::to_string(stride) + ", padding " +
                        std::to_string(padding));

  Tensor out({is.n, d.cout, d.oh, d.ow}, input.dtype());
  dispatch_dtype(input.dtype(), [&](auto tag) {
    using T = decltype(tag);
    conv2d_forward(input.data<T>(), weight.data<T>(), bias ? bias->data<T>() : nullptr,
                   out.data<T>(), is.n, d);
  });

  std::vector<Tensor> inputs = {input, weight};
  if (bias) inputs.push_back(*bias);
  auto ii = input.impl(), wi = weight.impl();
  auto bi = bias ? bias->impl() : nullptr;
  attach_grad_node(out, "conv2d", inputs, [ii, wi, bi, d](TensorImpl& o) {
    dispatch_dtype(ii->dtype, [&](auto tag) {
      using T = decltype(tag);
      conv2d_backward(ii->data_as<T>(), wi->data_as<T>(), o.grad_as<T>(),
                      ii->requires_grad ? ii->grad_as<T>() : nullptr,
                      wi->requires_grad ? wi->grad_as<T>() : nullptr,
                      (bi && bi->requires_grad) ? bi->grad_as<T>() : nullptr, ii->shape.n, d);
    });
  });
  return out;
}

}  // namespace vsr
