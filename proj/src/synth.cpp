// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "vsr/error.hpp"
#include "vsr/image_io.hpp"
#include "vsr/rng.hpp"

namespace vsr {

namespace {

// Band-limited noise canvas: uniform noise, separable Gaussian blur,
// then min-max stretched into [0.05, 0.95]. Smooth enough that bilinear
// resampling and the degradations stay well-behaved.
std::vector<double> noise_canvas(int64_t h, int64_t w, uint64_t seed, double blur_sigma) {
  std::vector<double> a(static_cast<size_t>(h * w)), b(a.size());
  rng::Stream rs(seed);
  for (double& v : a) v = rs.next_uniform();
  const int r = static_cast<int>(std::ceil(3.0 * blur_sigma));
  std::vector<double> k(static_cast<size_t>(2 * r + 1));
  double sum = 0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<size_t>(i + r)] = std::exp(-0.5 * i * i / (blur_sigma * blur_sigma));
    sum += k[static_cast<size_t>(i + r)];
  }
  for (double& v : k) v /= sum;
  auto reflect = [](int64_t i, int64_t n) {
    while (i < 0 || i >= n) {
      if (i < 0) i = -i - 1;
      if (i >= n) i = 2 * n - i - 1;
    }
    return i;
  };
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < w; ++x) {
      double acc = 0;
      for (int t = -r; t <= r; ++t)
        acc += k[static_cast<size_t>(t + r)] * a[static_cast<size_t>(y * w + reflect(x + t, w))];
      b[static_cast<size_t>(y * w + x)] = acc;
    }
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < w; ++x) {
      double acc = 0;
      for (int t = -r; t <= r; ++t)
        acc += k[static_cast<size_t>(t + r)] * b[static_cast<size_t>(reflect(y + t, h) * w + x)];
      a[static_cast<size_t>(y * w + x)] = acc;
    }
  auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  // copy before the loop: the iterators point into the array being rewritten
  const double mn = *lo, span = *hi - mn;
  for (double& v : a) v = span > 0 ? 0.05 + 0.9 * (v - mn) / span : 0.5;
  return a;
}

double sample_canvas(const std::vector<double>& c, int64_t h, int64_t w, double y, double x) {
  const int64_t y0 = static_cast<int64_t>(std::floor(y)), x0 = static_cast<int64_t>(std::floor(x));
  const double ly = y - y0, lx = x - x0;
  auto at = [&](int64_t yy, int64_t xx) {
    yy = std::clamp<int64_t>(yy, 0, h - 1);
    xx = std::clamp<int64_t>(xx, 0, w - 1);
    return c[static_cast<size_t>(yy * w + xx)];
  };
  return (1 - ly) * ((1 - lx) * at(y0, x0) + lx * at(y0, x0 + 1)) +
         ly * ((1 - lx) * at(y0 + 1, x0) + lx * at(y0 + 1, x0 + 1));
}

}  // namespace

void SynthSpec::validate() const {
  if (kind != "translate" && kind != "rotate-texture" && kind != "checker-zoom")
    throw config_error("unknown synth kind '" + kind + "'");
  if (frames < 1) throw config_error("synth: frames must be >= 1");
  if (h < 8 || w < 8) throw config_error("synth: frame size too small");
}

std::vector<Tensor> synth_video(const SynthSpec& spec, Dtype dtype) {
  spec.validate();
  std::vector<Tensor> out;
  const int T = spec.frames;

  if (spec.kind == "translate") {
    const double span_y = std::fabs(spec.vy) * (T - 1), span_x = std::fabs(spec.vx) * (T - 1);
    const int64_t ch = spec.h + static_cast<int64_t>(std::ceil(span_y)) + 8;
    const int64_t cw = spec.w + static_cast<int64_t>(std::ceil(span_x)) + 8;
    const double base_y = 4 + std::max(0.0, -spec.vy * (T - 1));
    const double base_x = 4 + std::max(0.0, -spec.vx * (T - 1));
    std::vector<std::vector<double>> canvases;
    for (int c = 0; c < 3; ++c)
      canvases.push_back(noise_canvas(ch, cw, rng::derive(spec.seed, 11, c), 2.0));
    for (int t = 0; t < T; ++t) {
      Tensor f({1, 3, spec.h, spec.w}, dtype);
      dispatch_dtype(dtype, [&](auto tag) {
        using U = decltype(tag);
        U* d = f.data<U>();
        for (int c = 0; c < 3; ++c)
          for (int64_t y = 0; y < spec.h; ++y)
            for (int64_t x = 0; x < spec.w; ++x)
              d[(c * spec.h + y) * spec.w + x] = static_cast<U>(sample_canvas(
                  canvases[c], ch, cw, base_y + t * spec.vy + y, base_x + t * spec.vx + x));
      });
      out.push_back(f);
    }
    return out;
  }

  if (spec.kind == "rotate-texture") {
    const int64_t side =
        static_cast<int64_t>(std::ceil(std::hypot(static_cast<double>(spec.h), static_cast<double>(spec.w)))) + 8;
    std::vector<std::vector<double>> canvases;
    for (int c = 0; c < 3; ++c)
      canvases.push_back(noise_canvas(side, side, rng::derive(spec.seed, 23, c), 2.0));
    const double ccy = (side - 1) / 2.0, ccx = (side - 1) / 2.0;
    const double fcy = (spec.h - 1) / 2.0, fcx = (spec.w - 1) / 2.0;
    for (int t = 0; t < T; ++t) {
      const double a = -t * spec.rot_deg * std::numbers::pi / 180.0;  // inverse map
      const double ca = std::cos(a), sa = std::sin(a);
      Tensor f({1, 3, spec.h, spec.w}, dtype);
      dispatch_dtype(dtype, [&](auto tag) {
        using U = decltype(tag);
        U* d = f.data<U>();
        for (int c = 0; c < 3; ++c)
          for (int64_t y = 0; y < spec.h; ++y)
            for (int64_t x = 0; x < spec.w; ++x) {
              const double dy = y - fcy, dx = x - fcx;
              d[(c * spec.h + y) * spec.w + x] = static_cast<U>(sample_canvas(
                  canvases[c], side, side, ccy + ca * dy - sa * dx, ccx + sa * dy + ca * dx));
            }
      });
      out.push_back(f);
    }
    return out;
  }

  // checker-zoom: smooth sinusoidal checker slowly dilating about the center.
  rng::Stream rs(rng::derive(spec.seed, 37));
  const double fy = rs.next_uniform(0.02, 0.05), fx = rs.next_uniform(0.02, 0.05);
  double phy[3], phx[3];
  for (int c = 0; c < 3; ++c) {
    phy[c] = rs.next_uniform(0, 2 * std::numbers::pi);
    phx[c] = rs.next_uniform(0, 2 * std::numbers::pi);
  }
  const double fcy = (spec.h - 1) / 2.0, fcx = (spec.w - 1) / 2.0;
  for (int t = 0; t < T; ++t) {
    const double g = 1.0 + spec.zoom * t;
    Tensor f({1, 3, spec.h, spec.w}, dtype);
    dispatch_dtype(dtype, [&](auto tag) {
      using U = decltype(tag);
      U* d = f.data<U>();
      for (int c = 0; c < 3; ++c)
        for (int64_t y = 0; y < spec.h; ++y)
          for (int64_t x = 0; x < spec.w; ++x) {
            const double vy2 = std::sin(2 * std::numbers::pi * fy * (y - fcy) * g + phy[c]);
            const double vx2 = std::sin(2 * std::numbers::pi * fx * (x - fcx) * g + phx[c]);
            d[(c * spec.h + y) * spec.w + x] = static_cast<U>(0.5 + 0.45 * vy2 * vx2);
          }
    });
    out.push_back(f);
  }
  return out;
}

void synth_dataset(const std::string& root, const std::string& kind, int count, int frames,
                   int64_t h, int64_t w, uint64_t seed) {
  if (count < 1) throw config_error("synth: count must be >= 1");
  static const char* kinds[] = {"translate", "rotate-texture", "checker-zoom"};
  for (int i = 0; i < count; ++i) {
    SynthSpec spec;
    spec.kind = kind == "mixed" ? kinds[i % 3] : kind;
    spec.frames = frames;
    spec.h = h;
    spec.w = w;
    spec.seed = rng::derive(seed, 101, static_cast<uint64_t>(i));
    rng::Stream rs(rng::derive(spec.seed, 7));
    if (spec.kind == "translate") {
      // Speed 2..6 HR px/frame in a random direction: 0.5..1.5 LR px at x4.
      const double speed = rs.next_uniform(2.0, 6.0);
      const double ang = rs.next_uniform(0, 2 * std::numbers::pi);
      spec.vx = speed * std::cos(ang);
      spec.vy = speed * std::sin(ang);
    } else if (spec.kind == "rotate-texture") {
      spec.rot_deg = rs.next_uniform(0.4, 1.2);
    } else {
      spec.zoom = rs.next_uniform(0.002, 0.006);
    }
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03d", spec.kind.c_str(), i);
    save_frames(synth_video(spec), (std::filesystem::path(root) / name).string());
  }
}

}  // namespace vsr
