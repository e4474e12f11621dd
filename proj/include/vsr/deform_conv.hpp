// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deformable 2D convolution (3x3, stride 1, pad 1, one offset group).
// Each kernel tap samples the input at a per-pixel fractional displacement
// from its regular grid position; sampling is bilinear with zero padding
// outside the image. Differentiable w.r.t. input, weight, bias and offsets.

#pragma once

#include "vsr/tensor.hpp"

namespace vsr {

// Bilinear lookup at fractional (x, y) in pixel units; coordinates fully
// outside the image read as zero, partial overlap drops the outside corners.
double bilinear_sample(const Tensor& feature, double x, double y, int64_t n, int64_t c);

// offsets: (N, 18, H, W); channel 2k is the x displacement and 2k+1 the y
// displacement of tap k, taps numbered row-major over the 3x3 grid.
// weight: (C_out, C_in, 3, 3). Output grid equals the input grid.
Tensor deformable_conv2d(const Tensor& input, const Tensor& offsets, const Tensor& weight,
                         const Tensor* bias);

}  // namespace vsr
