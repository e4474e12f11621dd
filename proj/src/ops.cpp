// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace vsr {

void attach_grad_node(Tensor& out, const char* op, const std::vector<Tensor>& inputs,
                      std::function<void(TensorImpl&)> backward) {
  if (!grad_enabled()) return;
  bool any = false;
  for (const Tensor& in : inputs) any = any || in.requires_grad();
  if (!any) return;
  out.impl()->requires_grad = true;
  auto node = std::make_shared<GradNode>();
  node->op = op;
  node->inputs.reserve(inputs.size());
  for (const Tensor& in : inputs) node->inputs.push_back(in.impl());
  node->output = out.impl();
  node->backward = std::move(backward);
  out.impl()->node = std::move(node);
}

namespace {

// dst += src over n elements
template <typename T>
void acc(T* dst, const T* src, int64_t n) {
  for (int64_t i = 0; i < n; ++i) dst[i] += src[i];
}

}  // namespace

Tensor relu(const Tensor& x) {
  Tensor out(x.shape(), x.dtype());
  dispatch_dtype(x.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* in = x.data<T>();
    T* o = out.data<T>();
    for (int64_t i = 0; i < x.numel(); ++i) o[i] = in[i] > T(0) ? in[i] : T(0);
  });
  auto xi = x.impl();
  attach_grad_node(out, "relu", {x}, [xi](TensorImpl& o) {
    dispatch_dtype(xi->dtype, [&](auto tag) {
      using T = decltype(tag);
      const T* go = o.grad_as<T>();
      const T* in = xi->data_as<T>();
      T* gi = xi->grad_as<T>();
      int64_t n = xi->shape.numel();
      // subgradient 0 at exactly 0
      for (int64_t i = 0; i < n; ++i)
        if (in[i] > T(0)) gi[i] += go[i];
    });
  });
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  check_same_dtype(a, b, "add");
  Tensor out(a.shape(), a.dtype());
  dispatch_dtype(a.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* pa = a.data<T>();
    const T* pb = b.data<T>();
    T* o = out.data<T>();
    for (int64_t i = 0; i < a.numel(); ++i) o[i] = pa[i] + pb[i];
  });
  auto ai = a.impl(), bi = b.impl();
  attach_grad_node(out, "add", {a, b}, [ai, bi](TensorImpl& o) {
    dispatch_dtype(ai->dtype, [&](auto tag) {
      using T = decltype(tag);
      const T* go = o.grad_as<T>();
      int64_t n = ai->shape.numel();
      if (ai->requires_grad) acc(ai->grad_as<T>(), go, n);
      if (bi->requires_grad) acc(bi->grad_as<T>(), go, n);
    });
  });
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "sub");
  check_same_dtype(a, b, "sub");
  Tensor out(a.shape(), a.dtype());
  dispatch_dtype(a.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* pa = a.data<T>();
    const T* pb = b.data<T>();
    T* o = out.data<T>();
    for (int64_t i = 0; i < a.numel(); ++i) o[i] = pa[i] - pb[i];
  });
  auto ai = a.impl(), bi = b.impl();
  attach_grad_node(out, "sub", {a, b}, [ai, bi](TensorImpl& o) {
    dispatch_dtype(ai->dtype, [&](auto tag) {
      using T = decltype(tag);
      const T* go = o.grad_as<T>();
      int64_t n = ai->shape.numel();
      if (ai->requires_grad) acc(ai->grad_as<T>(), go, n);
      if (bi->requires_grad) {
        T* gb = bi->grad_as<T>();
        for (int64_t i = 0; i < n; ++i) gb[i] -= go[i];
      }
    });
  });
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_dtype(a, b, "mul");
  const bool a_scalar = a.numel() == 1 && b.numel() > 1;
  const bool b_scalar = b.numel() == 1 && a.numel() > 1;
  if (!a_scalar && !b_scalar) check_same_shape(a, b, "mul");

  const Tensor& big = a_scalar ? b : a;
  Tensor out(big.shape(), big.dtype());
  dispatch_dtype(a.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* pa = a.data<T>();
    const T* pb = b.data<T>();
    T* o = out.data<T>();
    int64_t n = out.numel();
    if (a_scalar) {
      T s = pa[0];
      for (int64_t i = 0; i < n; ++i) o[i] = s * pb[i];
    } else if (b_scalar) {
      T s = pb[0];
      for (int64_t i = 0; i < n; ++i) o[i] = pa[i] * s;
    } else {
      for (int64_t i = 0; i < n; ++i) o[i] = pa[i] * pb[i];
    }
  });
  auto ai = a.impl(), bi = b.impl();
  attach_grad_node(out, "mul", {a, b}, [ai, bi, a_scalar, b_scalar](TensorImpl& o) {
    dispatch_dtype(ai->dtype, [&](auto tag) {
      using T = decltype(tag);
      const T* go = o.grad_as<T>();
      const T* pa = ai->data_as<T>();
      const T* pb = bi->data_as<T>();
      int64_t n = o.shape.numel();
      auto scalar_grad = [&](TensorImpl* s, const T* other) {
        double g = 0;
        for (int64_t i = 0; i < n; ++i) g += static_cast<double>(go[i]) * other[i];
        s->grad_as<T>()[0] += static_cast<T>(g);
      };
      auto dense_grad = [&](TensorImpl* d, const T* other, bool other_scalar) {
        T* gd = d->grad_as<T>();
        if (other_scalar) {
          T s = other[0];
          for (int64_t i = 0; i < n; ++i) gd[i] += s * go[i];
        } else {
          for (int64_t i = 0; i < n; ++i) gd[i] += other[i] * go[i];
        }
      };
      if (ai->requires_grad) {
        if (a_scalar)
          scalar_grad(ai.get(), pb);
        else
          dense_grad(ai.get(), pb, b_scalar);
      }
      if (bi->requires_grad) {
        if (b_scalar)
          scalar_grad(bi.get(), pa);
        else
          dense_grad(bi.get(), pa, a_scalar);
      }
    });
  });
  return out;
}

Tensor scale(const Tensor& x, double k) {
  Tensor out(x.shape(), x.dtype());
  dispatch_dtype(x.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* in = x.data<T>();
    T* o = out.data<T>();
    T kk = static_cast<T>(k);
    for (int64_t i = 0; i < x.numel(); ++i) o[i] = kk * in[i];
  });
  auto xi = x.impl();
  attach_grad_node(out, "scale", {x}, [xi, k](TensorImpl& o) {
    dispatch_dtype(xi->dtype, [&](auto tag) {
      using T = decltype(tag);
      const T* go = o.grad_as<T>();
      T* gi = xi->grad_as<T>();
      T kk = static_cast<T>(k);
      for (int64_t i = 0; i < xi->shape.numel(); ++i) gi[i] += kk * go[i];
    });
  });
  return out;
}

Tensor abs(const Tensor& x) {
  Tensor out(x.shape(), x.dtype());
  dispatch_dtype(x.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* in = x.data<T>();
    T* o = out.data<T>();
    for (int64_t i = 0; i < x.numel(); ++i) o[i] = in[i] < T(0) ? -in[i] : in[i];
  });
  auto xi = x.impl();
  attach_grad_node(out, "abs", {x}, [xi](TensorImpl& o) {
    dispatch_dtype(xi->dtype, [&](auto tag) {
      using T = decltype(tag);
      const T* go = o.grad_as<T>();
      const T* in = xi->data_as<T>();
      T* gi = xi->grad_as<T>();
      // sign(0) = 0
      for (int64_t i = 0; i < xi->shape.numel(); ++i) {
        if (in[i] > T(0))
          gi[i] += go[i];
        else if (in[i] < T(0))
          gi[i] -= go[i];
      }
    });
  });
  return out;
}

namespace {
Tensor reduce(const Tensor& x, bool take_mean) {
  Tensor out({1, 1, 1, 1}, x.dtype());
  const double inv = take_mean ? 1.0 / static_cast<double>(x.numel()) : 1.0;
  dispatch_dtype(x.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* in = x.data<T>();
    double s = 0;
    for (int64_t i = 0; i < x.numel(); ++i) s += static_cast<double>(in[i]);
    out.data<T>()[0] = static_cast<T>(s * inv);
  });
  auto xi = x.impl();
  attach_grad_node(out, take_mean ? "mean" : "sum", {x}, [xi, inv](TensorImpl& o) {
    dispatch_dtype(xi->dtype, [&](auto tag) {
      using T = decltype(tag);
      T g = static_cast<T>(static_cast<double>(o.grad_as<T>()[0]) * inv);
      T* gi = xi->grad_as<T>();
      for (int64_t i = 0; i < xi->shape.numel(); ++i) gi[i] += g;
    });
  });
  return out;
}
}  // namespace

Tensor sum(const Tensor& x) { return reduce(x, false); }
Tensor mean(const Tensor& x) { return reduce(x, true); }

Tensor l1_loss(const Tensor& pred, const Tensor& target) {
  check_same_shape(pred, target, "l1_loss");
  return mean(abs(sub(pred, target)));
}

Tensor concat_channels(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw invalid_error("concat_channels: empty input list");
  const Shape& s0 = xs[0].shape();
  int64_t total_c = 0;
  for (const Tensor& x : xs) {
    const Shape& s = x.shape();
    if (s.n != s0.n || s.h != s0.h || s.w != s0.w)
      throw invalid_error("concat_channels: mismatched batch/spatial dims " + s.str() + " vs " +
                          s0.str());
    check_same_dtype(x, xs[0], "concat_channels");
    total_c += s.c;
  }
  Tensor out({s0.n, total_c, s0.h, s0.w}, xs[0].dtype());
  const int64_t hw = s0.h * s0.w;
  dispatch_dtype(out.dtype(), [&](auto tag) {
    using T = decltype(tag);
    T* o = out.data<T>();
    for (int64_t b = 0; b < s0.n; ++b) {
      int64_t co = 0;
      for (const Tensor& x : xs) {
        const T* in = x.data<T>() + b * x.shape().c * hw;
        std::memcpy(o + (b * total_c + co) * hw, in, static_cast<size_t>(x.shape().c * hw) * sizeof(T));
        co += x.shape().c;
      }
    }
  });
  std::vector<std::shared_ptr<TensorImpl>> impls;
  for (const Tensor& x : xs) impls.push_back(x.impl());
  attach_grad_node(out, "concat_channels", xs, [impls, hw, total_c](TensorImpl& o) {
    dispatch_dtype(o.dtype, [&](auto tag) {
      using T = decltype(tag);
      const T* go = o.grad_as<T>();
      int64_t nb = o.shape.n;
      for (int64_t b = 0; b < nb; ++b) {
        int64_t co = 0;
        for (auto& xi : impls) {
          int64_t xc = xi->shape.c;
          if (xi->requires_grad)
            acc(xi->grad_as<T>() + b * xc * hw, go + (b * total_c + co) * hw, xc * hw);
          co += xc;
        }
      }
    });
  });
  return out;
}

Tensor pixel_shuffle(const Tensor& x, int r) {
  if (r < 1) throw invalid_error("pixel_shuffle: factor must be >= 1");
  const Shape s = x.shape();
  if (s.c % (static_cast<int64_t>(r) * r) != 0)
    throw invalid_error("pixel_shuffle: channels " + std::to_string(s.c) +
                        " not divisible by r^2 = " + std::to_string(r * r));
  const int64_t oc = s.c / (static_cast<int64_t>(r) * r);
  Tensor out({s.n, oc, s.h * r, s.w * r}, x.dtype());
  dispatch_dtype(x.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* in = x.data<T>();
    T* o = out.data<T>();
    const int64_t ih = s.h, iw = s.w;
    for (int64_t b = 0; b < s.n; ++b)
      for (int64_t c = 0; c < oc; ++c)
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) {
            const T* src = in + ((b * s.c + (c * r * r + i * r + j)) * ih) * iw;
            T* dst = o + ((b * oc + c) * ih * r + i) * iw * r + j;
            for (int64_t y = 0; y < ih; ++y) {
              const T* srow = src + y * iw;
              T* drow = dst + y * r * iw * r;
              for (int64_t xx = 0; xx < iw; ++xx) drow[xx * r] = srow[xx];
            }
          }
  });
  auto xi = x.impl();
  attach_grad_node(out, "pixel_shuffle", {x}, [xi, r](TensorImpl& o) {
    dispatch_dtype(xi->dtype, [&](auto tag) {
      using T = decltype(tag);
      const T* go = o.grad_as<T>();
      T* gi = xi->grad_as<T>();
      const Shape s = xi->shape;
      const int64_t oc = o.shape.c, ih = s.h, iw = s.w;
      for (int64_t b = 0; b < s.n; ++b)
        for (int64_t c = 0; c < oc; ++c)
          for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
              T* dst = gi + ((b * s.c + (c * r * r + i * r + j)) * ih) * iw;
              const T* src = go + ((b * oc + c) * ih * r + i) * iw * r + j;
              for (int64_t y = 0; y < ih; ++y) {
                T* drow = dst + y * iw;
                const T* srow = src + y * r * iw * r;
                for (int64_t xx = 0; xx < iw; ++xx) drow[xx] += srow[xx * r];
              }
            }
    });
  });
  return out;
}

}  // namespace vsr
