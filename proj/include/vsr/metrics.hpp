// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "vsr/tensor.hpp"

namespace vsr {

enum class ChannelMode : uint8_t { Luma, Rgb };

// Evaluation protocol: ignore a pixel border on every side of each frame and
// drop frames at both ends of a sequence before averaging.
struct EvalProtocol {
  int border_crop = 4;
  int skip_head = 2;
  int skip_tail = 2;
  ChannelMode channel_mode = ChannelMode::Luma;
};

ChannelMode parse_channel_mode(const std::string& s);
std::string channel_mode_name(ChannelMode m);

// Peak signal-to-noise ratio in dB over the retained region; +infinity for
// identical inputs. Luma mode converts RGB to BT.601 full-range Y first.
double psnr(const Tensor& pred, const Tensor& gt, const EvalProtocol& protocol);

// Mean local structural similarity, 11x11 Gaussian window (sigma 1.5),
// K1=0.01, K2=0.03, dynamic range 1; windows fully inside the cropped frame.
double ssim(const Tensor& pred, const Tensor& gt, const EvalProtocol& protocol);

struct FrameMetrics {
  int index = 0;  // position in the input sequence
  double psnr = 0, ssim = 0;
};

struct SequenceReport {
  std::vector<FrameMetrics> frames;  // retained frames only
  double mean_psnr = 0, mean_ssim = 0;
  int skipped_head = 0, skipped_tail = 0;
};

SequenceReport evaluate_sequence(const std::vector<Tensor>& pred, const std::vector<Tensor>& gt,
                                 const EvalProtocol& protocol);

// Infinity renders as "inf" in both formats.
std::string report_text(const SequenceReport& r, const EvalProtocol& protocol);
std::string report_kv(const SequenceReport& r);
std::string format_metric(double v);

}  // namespace vsr
