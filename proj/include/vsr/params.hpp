// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vsr/tensor.hpp"

namespace vsr {

enum class Init : uint8_t {
  FanInUniform,  // U(-b, b), b = sqrt(1 / (C_in * kH * kW)) of the weight shape
  Zero,
};

// Named, ordered registry of trainable tensors. Initialization draws a
// per-parameter stream keyed by (seed, name), so adding or reordering
// parameters never perturbs the others.
class ParamStore {
 public:
  Tensor create(const std::string& name, const Shape& shape, Init init, uint64_t seed, Dtype dtype);
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;
  bool has(const std::string& name) const;
  const std::vector<std::pair<std::string, Tensor>>& entries() const { return entries_; }
  int64_t param_count() const;
  void zero_grads();
  // Largest |grad| across all parameters; names the owner for diagnostics.
  bool grads_finite(std::string* first_bad = nullptr) const;

 private:
  std::vector<std::pair<std::string, Tensor>> entries_;
};

}  // namespace vsr
