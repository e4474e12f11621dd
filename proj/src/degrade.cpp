// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "vsr/error.hpp"

namespace vsr {

namespace {

// Keys cubic kernel, a = -0.5.
double keys(double x) {
  x = std::fabs(x);
  if (x <= 1) return (1.5 * x - 2.5) * x * x + 1.0;
  if (x < 2) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
  return 0.0;
}

// One output sample's source taps along a single dimension.
struct TapRow {
  int first = 0;                // index of the first tap (clamped later)
  std::vector<double> weights;  // normalized to sum 1
};

// Resampling weights for n_in -> n_out with output pixel centers mapped by
// u = (i + 0.5) * (n_in / n_out) - 0.5. When shrinking, the kernel is
// stretched by 1/scale (antialiasing); indices are clamped at the edges.
std::vector<TapRow> plan_dim(int64_t n_in, int64_t n_out, bool antialias) {
  const double ratio = static_cast<double>(n_in) / static_cast<double>(n_out);
  const double scale = antialias && n_out < n_in ? static_cast<double>(n_out) / n_in : 1.0;
  const double support = 2.0 / scale;  // kernel half-width in input pixels
  std::vector<TapRow> rows(static_cast<size_t>(n_out));
  for (int64_t i = 0; i < n_out; ++i) {
    const double u = (i + 0.5) * ratio - 0.5;
    const int64_t first = static_cast<int64_t>(std::floor(u - support)) + 1;
    const int64_t last = static_cast<int64_t>(std::floor(u + support));
    TapRow& r = rows[static_cast<size_t>(i)];
    r.first = static_cast<int>(first);
    double sum = 0;
    for (int64_t k = first; k <= last; ++k) {
      const double w = scale * keys(scale * (u - k));
      r.weights.push_back(w);
      sum += w;
    }
    for (double& w : r.weights) w /= sum;
  }
  return rows;
}

// Applies a 1-D plan along the rows of an (h, w) plane -> (h, n_out).
void apply_rows(const std::vector<double>& in, int64_t h, int64_t w,
                const std::vector<TapRow>& plan, std::vector<double>& out) {
  const int64_t ow = static_cast<int64_t>(plan.size());
  out.assign(static_cast<size_t>(h * ow), 0.0);
  for (int64_t y = 0; y < h; ++y) {
    const double* src = in.data() + y * w;
    double* dst = out.data() + y * ow;
    for (int64_t x = 0; x < ow; ++x) {
      const TapRow& r = plan[static_cast<size_t>(x)];
      double acc = 0;
      for (size_t t = 0; t < r.weights.size(); ++t) {
        int64_t ix = std::clamp<int64_t>(r.first + static_cast<int64_t>(t), 0, w - 1);
        acc += r.weights[t] * src[ix];
      }
      dst[x] = acc;
    }
  }
}

void transpose(const std::vector<double>& in, int64_t h, int64_t w, std::vector<double>& out) {
  out.resize(in.size());
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < w; ++x) out[static_cast<size_t>(x * h + y)] = in[static_cast<size_t>(y * w + x)];
}

Tensor resize_core(const Tensor& img, int64_t out_h, int64_t out_w, bool antialias) {
  const Shape s = img.shape();
  if (out_h < 1 || out_w < 1) throw invalid_error("resize: non-positive output size");
  auto col_plan = plan_dim(s.h, out_h, antialias);
  auto row_plan = plan_dim(s.w, out_w, antialias);
  Tensor out({s.n, s.c, out_h, out_w}, img.dtype());
  std::vector<double> plane(static_cast<size_t>(s.h * s.w)), tmp, tmpt, res, rest;
  dispatch_dtype(img.dtype(), [&](auto tag) {
    using T = decltype(tag);
    for (int64_t n = 0; n < s.n; ++n)
      for (int64_t c = 0; c < s.c; ++c) {
        const T* src = img.data<T>() + (n * s.c + c) * s.h * s.w;
        for (size_t i = 0; i < plane.size(); ++i) plane[i] = static_cast<double>(src[i]);
        apply_rows(plane, s.h, s.w, row_plan, tmp);       // (h, out_w)
        transpose(tmp, s.h, out_w, tmpt);                 // (out_w, h)
        apply_rows(tmpt, out_w, s.h, col_plan, res);      // (out_w, out_h)
        transpose(res, out_w, out_h, rest);               // (out_h, out_w)
        T* dst = out.data<T>() + (n * s.c + c) * out_h * out_w;
        for (size_t i = 0; i < rest.size(); ++i)
          dst[i] = static_cast<T>(std::clamp(rest[i], 0.0, 1.0));
      }
  });
  return out;
}

int64_t reflect(int64_t i, int64_t n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - i - 1;
  }
  return i;
}

}  // namespace

DegradationSpec::Mode DegradationSpec::parse_mode(const std::string& m) {
  if (m == "bi" || m == "BI") return Mode::BI;
  if (m == "bd" || m == "BD") return Mode::BD;
  throw config_error("unknown degradation mode '" + m + "' (expected bi or bd)");
}

std::string DegradationSpec::mode_name() const { return mode == Mode::BI ? "bi" : "bd"; }

Tensor degrade_bi(const Tensor& hr, int s) {
  const Shape sh = hr.shape();
  if (s < 2) throw invalid_error("degrade_bi: scale must be >= 2, got " + std::to_string(s));
  if (sh.h % s != 0 || sh.w % s != 0)
    throw data_error("degrade_bi: frame " + std::to_string(sh.h) + "x" + std::to_string(sh.w) +
                     " not divisible by scale " + std::to_string(s));
  return resize_core(hr, sh.h / s, sh.w / s, /*antialias=*/true);
}

Tensor degrade_bd(const Tensor& hr, int s, double sigma, int phase) {
  const Shape sh = hr.shape();
  if (s < 2) throw invalid_error("degrade_bd: scale must be >= 2, got " + std::to_string(s));
  if (sh.h % s != 0 || sh.w % s != 0)
    throw data_error("degrade_bd: frame " + std::to_string(sh.h) + "x" + std::to_string(sh.w) +
                     " not divisible by scale " + std::to_string(s));
  if (sigma < 0) throw invalid_error("degrade_bd: negative sigma");
  if (phase < 0 || phase >= s)
    throw invalid_error("degrade_bd: phase " + std::to_string(phase) + " outside [0," +
                        std::to_string(s) + ")");
  const int r = static_cast<int>(std::floor(4.0 * sigma));
  std::vector<double> k(static_cast<size_t>(2 * r + 1));
  double sum = 0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<size_t>(i + r)] = sigma > 0 ? std::exp(-0.5 * (i * i) / (sigma * sigma)) : 1.0;
    sum += k[static_cast<size_t>(i + r)];
  }
  for (double& v : k) v /= sum;

  const int64_t oh = sh.h / s, ow = sh.w / s;
  Tensor out({sh.n, sh.c, oh, ow}, hr.dtype());
  std::vector<double> plane(static_cast<size_t>(sh.h * sh.w)), blur_h(plane.size()),
      blur(plane.size());
  dispatch_dtype(hr.dtype(), [&](auto tag) {
    using T = decltype(tag);
    for (int64_t n = 0; n < sh.n; ++n)
      for (int64_t c = 0; c < sh.c; ++c) {
        const T* src = hr.data<T>() + (n * sh.c + c) * sh.h * sh.w;
        for (size_t i = 0; i < plane.size(); ++i) plane[i] = static_cast<double>(src[i]);
        for (int64_t y = 0; y < sh.h; ++y)
          for (int64_t x = 0; x < sh.w; ++x) {
            double acc = 0;
            for (int t = -r; t <= r; ++t)
              acc += k[static_cast<size_t>(t + r)] *
                     plane[static_cast<size_t>(y * sh.w + reflect(x + t, sh.w))];
            blur_h[static_cast<size_t>(y * sh.w + x)] = acc;
          }
        for (int64_t y = 0; y < sh.h; ++y)
          for (int64_t x = 0; x < sh.w; ++x) {
            double acc = 0;
            for (int t = -r; t <= r; ++t)
              acc += k[static_cast<size_t>(t + r)] *
                     blur_h[static_cast<size_t>(reflect(y + t, sh.h) * sh.w + x)];
            blur[static_cast<size_t>(y * sh.w + x)] = acc;
          }
        T* dst = out.data<T>() + (n * sh.c + c) * oh * ow;
        for (int64_t y = 0; y < oh; ++y)
          for (int64_t x = 0; x < ow; ++x)
            dst[y * ow + x] =
                static_cast<T>(blur[static_cast<size_t>((y * s + phase) * sh.w + x * s + phase)]);
      }
  });
  return out;
}

Tensor degrade(const Tensor& hr, const DegradationSpec& spec) {
  return spec.mode == DegradationSpec::Mode::BI ? degrade_bi(hr, spec.s)
                                                : degrade_bd(hr, spec.s, spec.sigma, spec.phase);
}

Tensor resize_bicubic(const Tensor& img, int64_t out_h, int64_t out_w) {
  return resize_core(img, out_h, out_w, /*antialias=*/true);
}

std::string degradation_manifest(const DegradationSpec& spec) {
  std::ostringstream os;
  os << "mode " << spec.mode_name() << "\n";
  os << "scale " << spec.s << "\n";
  if (spec.mode == DegradationSpec::Mode::BD) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", spec.sigma);
    os << "sigma " << buf << "\n";
    os << "phase " << spec.phase << "\n";
  }
  return os.str();
}

DegradationSpec parse_degradation_manifest(const std::string& text) {
  DegradationSpec spec;
  std::istringstream is(text);
  std::string key;
  bool saw_mode = false, saw_scale = false;
  while (is >> key) {
    if (key == "mode") {
      std::string m;
      is >> m;
      spec.mode = DegradationSpec::parse_mode(m);
      saw_mode = true;
    } else if (key == "scale") {
      is >> spec.s;
      saw_scale = true;
    } else if (key == "sigma") {
      is >> spec.sigma;
    } else if (key == "phase") {
      is >> spec.phase;
    } else {
      throw data_error("unknown manifest key '" + key + "'");
    }
    if (!is) throw data_error("malformed degradation manifest");
  }
  if (!saw_mode || !saw_scale) throw data_error("degradation manifest missing mode or scale");
  return spec;
}

}  // namespace vsr
