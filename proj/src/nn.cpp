// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/nn.hpp"

#include "vsr/ops.hpp"

namespace vsr {

Conv2d::Conv2d(ParamStore& ps, const std::string& name, int64_t cin, int64_t cout, int64_t k,
               Init winit, uint64_t seed, Dtype dtype, int pad_) {
  w = ps.create(name + ".w", {cout, cin, k, k}, winit, seed, dtype);
  b = ps.create(name + ".b", {1, 1, 1, cout}, Init::Zero, seed, dtype);
  pad = pad_ >= 0 ? pad_ : static_cast<int>(k / 2);
}

Tensor Conv2d::operator()(const Tensor& x) const { return conv2d(x, w, &b, stride, pad); }

ResidualBlock::ResidualBlock(ParamStore& ps, const std::string& name, int64_t channels,
                             uint64_t seed, Dtype dtype)
    : c1(ps, name + ".conv1", channels, channels, 3, Init::FanInUniform, seed, dtype),
      c2(ps, name + ".conv2", channels, channels, 3, Init::FanInUniform, seed, dtype) {}

Tensor ResidualBlock::operator()(const Tensor& x) const { return add(c2(relu(c1(x))), x); }

}  // namespace vsr
