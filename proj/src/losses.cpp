// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/losses.hpp"

#include "vsr/error.hpp"
#include "vsr/ops.hpp"

namespace vsr {

Tensor align_loss(const std::vector<Tensor>& aligned, const Tensor& ref) {
  if (aligned.empty()) throw invalid_error("align_loss: no aligned frames");
  Tensor acc = l1_loss(aligned[0], ref);
  for (size_t i = 1; i < aligned.size(); ++i) acc = add(acc, l1_loss(aligned[i], ref));
  return scale(acc, 1.0 / static_cast<double>(aligned.size()));
}

Tensor sr_loss(const Tensor& pred, const Tensor& gt) { return l1_loss(pred, gt); }

}  // namespace vsr
