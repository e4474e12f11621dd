// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "vsr/params.hpp"

namespace vsr {

struct AdamConfig {
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
};

// Bias-corrected Adam over a ParamStore. Moments are kept in double and
// updated in registry order; a non-finite gradient aborts the step with an
// error naming the offending parameter.
class Adam {
 public:
  explicit Adam(ParamStore& params, AdamConfig cfg = {});
  void step(double lr);

  int64_t step_count() const { return step_; }
  // Checkpoint access: moments in registry order.
  const std::vector<std::vector<double>>& m() const { return m_; }
  const std::vector<std::vector<double>>& v() const { return v_; }
  std::vector<std::vector<double>>& m() { return m_; }
  std::vector<std::vector<double>>& v() { return v_; }
  void set_step_count(int64_t s) { step_ = s; }
  const AdamConfig& config() const { return cfg_; }

 private:
  ParamStore& params_;
  AdamConfig cfg_;
  int64_t step_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// Rescales every gradient in the registry so their global L2 norm does not
// exceed max_norm; returns the norm before clipping. No-op when max_norm <= 0
// or the norm is non-finite (the optimizer's own check then names the bad
// parameter).
double clip_grad_norm(ParamStore& params, double max_norm);

// Base learning rate halved every 100 epochs.
double lr_schedule(int64_t epoch, double base_lr = 1e-4);

}  // namespace vsr
