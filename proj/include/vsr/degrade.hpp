// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "vsr/tensor.hpp"

namespace vsr {

// How HR frames are turned into LR training/eval inputs.
struct DegradationSpec {
  enum class Mode : uint8_t { BI, BD };
  Mode mode = Mode::BI;
  int s = 4;
  double sigma = 1.6;  // BD blur std in pixels
  int phase = 0;       // BD decimation offset within each s-px block

  static Mode parse_mode(const std::string& m);
  std::string mode_name() const;
};

// Bicubic downscale with antialiasing (Keys kernel a=-0.5, support widened by
// s, edge replication, weights renormalized); output clamped to [0,1].
Tensor degrade_bi(const Tensor& hr, int s);

// Separable Gaussian blur (truncated at 4 sigma, renormalized, reflective
// borders) followed by keeping every s-th pixel starting at `phase`.
Tensor degrade_bd(const Tensor& hr, int s, double sigma, int phase);

Tensor degrade(const Tensor& hr, const DegradationSpec& spec);

// General bicubic resize to an arbitrary size: antialiased when shrinking,
// plain kernel when enlarging. Output clamped to [0,1]. This is the baseline
// upscaler the model is compared against.
Tensor resize_bicubic(const Tensor& img, int64_t out_h, int64_t out_w);

// Plain-text manifest describing a degradation; parse() round-trips it.
std::string degradation_manifest(const DegradationSpec& spec);
DegradationSpec parse_degradation_manifest(const std::string& text);

}  // namespace vsr
