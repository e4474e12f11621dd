// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "vsr/error.hpp"

namespace vsr {

namespace {

constexpr int kWin = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;  // (K1·L)², L = 1
constexpr double kC2 = 0.03 * 0.03;

struct Region {
  int64_t h, w;
  // planes[ch][y*w + x], cropped; 1 plane for luma, 3 for rgb
  std::vector<std::vector<double>> planes;
};

Region extract(const Tensor& frame, const EvalProtocol& p, const char* who) {
  const Shape s = frame.shape();
  if (s.n != 1 || s.c != 3)
    throw invalid_error(std::string(who) + ": expected a single RGB frame (1,3,H,W), got " +
                        s.str());
  const int b = p.border_crop;
  if (b < 0) throw invalid_error(std::string(who) + ": negative border crop");
  const int64_t h = s.h - 2 * b, w = s.w - 2 * b;
  if (h < 1 || w < 1)
    throw invalid_error(std::string(who) + ": border crop " + std::to_string(b) +
                        " leaves no pixels of a " + std::to_string(s.h) + "x" +
                        std::to_string(s.w) + " frame");
  Region r{h, w, {}};
  std::vector<std::vector<double>> rgb(3, std::vector<double>(static_cast<size_t>(h * w)));
  dispatch_dtype(frame.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* d = frame.data<T>();
    for (int c = 0; c < 3; ++c)
      for (int64_t y = 0; y < h; ++y)
        for (int64_t x = 0; x < w; ++x)
          rgb[c][static_cast<size_t>(y * w + x)] =
              static_cast<double>(d[(c * s.h + y + b) * s.w + x + b]);
  });
  if (p.channel_mode == ChannelMode::Luma) {
    std::vector<double> yp(static_cast<size_t>(h * w));
    for (size_t i = 0; i < yp.size(); ++i)
      yp[i] = 0.299 * rgb[0][i] + 0.587 * rgb[1][i] + 0.114 * rgb[2][i];
    r.planes.push_back(std::move(yp));
  } else {
    r.planes = std::move(rgb);
  }
  return r;
}

// Separable valid-mode filtering with an 11-tap Gaussian.
std::vector<double> gauss_valid(const std::vector<double>& in, int64_t h, int64_t w,
                                const double* k) {
  const int64_t ow = w - kWin + 1, oh = h - kWin + 1;
  std::vector<double> tmp(static_cast<size_t>(h * ow)), out(static_cast<size_t>(oh * ow));
  for (int64_t y = 0; y < h; ++y)
    for (int64_t x = 0; x < ow; ++x) {
      double s = 0;
      for (int t = 0; t < kWin; ++t) s += k[t] * in[static_cast<size_t>(y * w + x + t)];
      tmp[static_cast<size_t>(y * ow + x)] = s;
    }
  for (int64_t y = 0; y < oh; ++y)
    for (int64_t x = 0; x < ow; ++x) {
      double s = 0;
      for (int t = 0; t < kWin; ++t) s += k[t] * tmp[static_cast<size_t>((y + t) * ow + x)];
      out[static_cast<size_t>(y * ow + x)] = s;
    }
  return out;
}

double ssim_plane(const std::vector<double>& a, const std::vector<double>& b, int64_t h,
                  int64_t w) {
  double k[kWin];
  double ksum = 0;
  for (int i = 0; i < kWin; ++i) {
    const double d = i - (kWin - 1) / 2.0;
    k[i] = std::exp(-d * d / (2 * kSigma * kSigma));
    ksum += k[i];
  }
  for (double& v : k) v /= ksum;

  const size_t n = a.size();
  std::vector<double> aa(n), bb(n), ab(n);
  for (size_t i = 0; i < n; ++i) {
    aa[i] = a[i] * a[i];
    bb[i] = b[i] * b[i];
    ab[i] = a[i] * b[i];
  }
  auto mu_a = gauss_valid(a, h, w, k), mu_b = gauss_valid(b, h, w, k);
  auto s_aa = gauss_valid(aa, h, w, k), s_bb = gauss_valid(bb, h, w, k);
  auto s_ab = gauss_valid(ab, h, w, k);
  double total = 0;
  for (size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double va = s_aa[i] - ma * ma, vb = s_bb[i] - mb * mb, cov = s_ab[i] - ma * mb;
    total += ((2 * ma * mb + kC1) * (2 * cov + kC2)) / ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
  }
  return total / static_cast<double>(mu_a.size());
}

}  // namespace

ChannelMode parse_channel_mode(const std::string& s) {
  if (s == "luma") return ChannelMode::Luma;
  if (s == "rgb") return ChannelMode::Rgb;
  throw config_error("unknown channel mode '" + s + "' (expected luma or rgb)");
}

std::string channel_mode_name(ChannelMode m) { return m == ChannelMode::Luma ? "luma" : "rgb"; }

double psnr(const Tensor& pred, const Tensor& gt, const EvalProtocol& protocol) {
  check_same_shape(pred, gt, "psnr");
  Region a = extract(pred, protocol, "psnr"), b = extract(gt, protocol, "psnr");
  double se = 0;
  size_t count = 0;
  for (size_t c = 0; c < a.planes.size(); ++c) {
    for (size_t i = 0; i < a.planes[c].size(); ++i) {
      const double d = a.planes[c][i] - b.planes[c][i];
      se += d * d;
    }
    count += a.planes[c].size();
  }
  const double mse = se / static_cast<double>(count);
  if (mse == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const Tensor& pred, const Tensor& gt, const EvalProtocol& protocol) {
  check_same_shape(pred, gt, "ssim");
  Region a = extract(pred, protocol, "ssim"), b = extract(gt, protocol, "ssim");
  if (a.h < kWin || a.w < kWin)
    throw invalid_error("ssim: cropped frame " + std::to_string(a.h) + "x" + std::to_string(a.w) +
                        " smaller than the 11x11 window");
  double total = 0;
  for (size_t c = 0; c < a.planes.size(); ++c) total += ssim_plane(a.planes[c], b.planes[c], a.h, a.w);
  return total / static_cast<double>(a.planes.size());
}

SequenceReport evaluate_sequence(const std::vector<Tensor>& pred, const std::vector<Tensor>& gt,
                                 const EvalProtocol& protocol) {
  if (pred.size() != gt.size())
    throw invalid_error("evaluate_sequence: " + std::to_string(pred.size()) + " predicted vs " +
                        std::to_string(gt.size()) + " ground-truth frames");
  if (protocol.skip_head < 0 || protocol.skip_tail < 0)
    throw invalid_error("evaluate_sequence: negative skip counts");
  const int len = static_cast<int>(pred.size());
  const int first = protocol.skip_head, last = len - protocol.skip_tail;
  if (last - first < 1)
    throw invalid_error("evaluate_sequence: sequence of " + std::to_string(len) +
                        " frames too short for skip " + std::to_string(protocol.skip_head) + "+" +
                        std::to_string(protocol.skip_tail));
  SequenceReport r;
  r.skipped_head = protocol.skip_head;
  r.skipped_tail = protocol.skip_tail;
  double psum = 0, ssum = 0;
  for (int i = first; i < last; ++i) {
    FrameMetrics fm;
    fm.index = i;
    fm.psnr = psnr(pred[static_cast<size_t>(i)], gt[static_cast<size_t>(i)], protocol);
    fm.ssim = ssim(pred[static_cast<size_t>(i)], gt[static_cast<size_t>(i)], protocol);
    psum += fm.psnr;
    ssum += fm.ssim;
    r.frames.push_back(fm);
  }
  r.mean_psnr = psum / static_cast<double>(r.frames.size());
  r.mean_ssim = ssum / static_cast<double>(r.frames.size());
  return r;
}

std::string format_metric(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string report_text(const SequenceReport& r, const EvalProtocol& protocol) {
  std::string out = "frame        psnr      ssim\n";
  char buf[96];
  for (const auto& f : r.frames) {
    std::snprintf(buf, sizeof buf, "%5d  %10s  %8s\n", f.index, format_metric(f.psnr).c_str(),
                  format_metric(f.ssim).c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, " mean  %10s  %8s\n", format_metric(r.mean_psnr).c_str(),
                format_metric(r.mean_ssim).c_str());
  out += buf;
  std::snprintf(buf, sizeof buf, "skipped %d head + %d tail frames; border crop %d px; channel %s\n",
                r.skipped_head, r.skipped_tail, protocol.border_crop,
                channel_mode_name(protocol.channel_mode).c_str());
  out += buf;
  return out;
}

std::string report_kv(const SequenceReport& r) {
  std::string out;
  for (const auto& f : r.frames)
    out += std::to_string(f.index) + " " + format_metric(f.psnr) + " " + format_metric(f.ssim) + "\n";
  out += "mean " + format_metric(r.mean_psnr) + " " + format_metric(r.mean_ssim) + "\n";
  return out;
}

}  // namespace vsr
