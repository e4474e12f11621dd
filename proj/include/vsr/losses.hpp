// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "vsr/tensor.hpp"

namespace vsr {

// Mean over the supporting frames of the per-frame mean absolute error
// against the reference: the self-supervised alignment loss.
Tensor align_loss(const std::vector<Tensor>& aligned, const Tensor& ref);

// Mean absolute error between the upscaled estimate and ground truth.
Tensor sr_loss(const Tensor& pred, const Tensor& gt);

}  // namespace vsr
