// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vsr/tensor.hpp"

namespace vsr {

// Compares the recorded backward of `loss_fn` (a scalar-producing forward)
// against central finite differences over every element of `wrt`, all in
// 64-bit. Relative error uses denominator max(|analytic|, |numeric|, 1e-3).
double gradcheck_max_rel(const std::function<Tensor()>& loss_fn, const std::vector<Tensor>& wrt,
                         double h = 1e-6);

struct GradCheckEntry {
  std::string op;
  double max_rel = 0;
  double tolerance = 1e-4;
  bool pass = false;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  bool all_pass = false;
  std::string notes;
};

// module: "deform" (deformable conv grads), "tensor" (everything else),
// or "all".
GradCheckReport run_gradcheck(const std::string& module, uint64_t seed);

std::string gradcheck_text(const GradCheckReport& r);

}  // namespace vsr
