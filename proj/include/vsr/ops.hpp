// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VSR_OPS_HPP
#define VSR_OPS_HPP

#include <vector>

#include "vsr/tensor.hpp"

namespace vsr {

// Dense 2D convolution with zero padding.
// weight: (C_out, C_in, kH, kW); output (N, C_out, (H+2p-kH)/s+1, (W+2p-kW)/s+1).
Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor* bias, int stride = 1,
              int padding = 0);

Tensor relu(const Tensor& x);

// Elementwise; both arguments same shape. mul additionally accepts one
// 1-element operand which scales the other (no general broadcasting).
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);

// x * k for a plain constant k.
Tensor scale(const Tensor& x, double k);

Tensor abs(const Tensor& x);

// Full reductions to a (1,1,1,1) scalar.
Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);

// mean(|pred - target|)
Tensor l1_loss(const Tensor& pred, const Tensor& target);

// Channel concatenation; inputs must agree on (N, H, W).
Tensor concat_channels(const std::vector<Tensor>& xs);

// (N, C, H, W) -> (N, C/r^2, H*r, W*r) with
// out(n, c, h*r+i, w*r+j) = in(n, c*r^2 + i*r + j, h, w).
Tensor pixel_shuffle(const Tensor& x, int r);

// Attaches an autograd edge to out when recording is on and any input
// requires grad. backward(out) reads out's grad and accumulates into
// the inputs' grads; the output impl is passed in rather than captured
// so closures cannot create ownership cycles. Exposed so composite
// layers and test fixtures can define custom recorded ops.
void attach_grad_node(Tensor& out, const char* op, const std::vector<Tensor>& inputs,
                      std::function<void(TensorImpl&)> backward);

}  // namespace vsr

#endif  // VSR_OPS_HPP
