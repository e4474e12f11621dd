// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "vsr/params.hpp"
#include "vsr/tensor.hpp"

namespace vsr {

// 3x3 (or kxk) conv layer whose weight/bias live in a ParamStore under
// "<name>.w" / "<name>.b". Biases always start at zero; weights per `winit`.
struct Conv2d {
  Tensor w, b;
  int stride = 1, pad = 1;

  Conv2d() = default;
  Conv2d(ParamStore& ps, const std::string& name, int64_t cin, int64_t cout, int64_t k, Init winit,
         uint64_t seed, Dtype dtype, int pad_ = -1);
  Tensor operator()(const Tensor& x) const;
};

// conv -> ReLU -> conv -> + input  (no normalization, no scaling)
struct ResidualBlock {
  Conv2d c1, c2;

  ResidualBlock() = default;
  ResidualBlock(ParamStore& ps, const std::string& name, int64_t channels, uint64_t seed,
                Dtype dtype);
  Tensor operator()(const Tensor& x) const;
};

}  // namespace vsr
