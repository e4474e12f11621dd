// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/optim.hpp"

#include <cmath>

#include "vsr/error.hpp"

namespace vsr {

Adam::Adam(ParamStore& params, AdamConfig cfg) : params_(params), cfg_(cfg) {
  for (const auto& [name, t] : params_.entries()) {
    m_.emplace_back(static_cast<size_t>(t.numel()), 0.0);
    v_.emplace_back(static_cast<size_t>(t.numel()), 0.0);
  }
}

void Adam::step(double lr) {
  if (lr <= 0) throw invalid_error("adam: learning rate must be positive");
  ++step_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
  size_t pi = 0;
  for (const auto& [name, t] : params_.entries()) {
    auto& m = m_[pi];
    auto& v = v_[pi];
    ++pi;
    std::shared_ptr<TensorImpl> imp = t.impl();
    dispatch_dtype(t.dtype(), [&, &name = name](auto tag) {
      using T = decltype(tag);
      T* p = imp->data_as<T>();
      const T* g = imp->has_grad() ? imp->grad_as<T>() : nullptr;
      for (int64_t i = 0; i < imp->shape.numel(); ++i) {
        const double gi = g ? static_cast<double>(g[i]) : 0.0;
        if (!std::isfinite(gi))
          throw numeric_error("non-finite gradient in parameter '" + name + "' at element " +
                              std::to_string(i));
        m[static_cast<size_t>(i)] = cfg_.beta1 * m[static_cast<size_t>(i)] + (1 - cfg_.beta1) * gi;
        v[static_cast<size_t>(i)] =
            cfg_.beta2 * v[static_cast<size_t>(i)] + (1 - cfg_.beta2) * gi * gi;
        const double mhat = m[static_cast<size_t>(i)] / bc1;
        const double vhat = v[static_cast<size_t>(i)] / bc2;
        p[i] = static_cast<T>(static_cast<double>(p[i]) - lr * mhat / (std::sqrt(vhat) + cfg_.eps));
      }
    });
  }
}

double clip_grad_norm(ParamStore& params, double max_norm) {
  double sq = 0;
  for (const auto& [name, t] : params.entries()) {
    if (!t.has_grad()) continue;
    std::shared_ptr<TensorImpl> imp = t.impl();
    dispatch_dtype(t.dtype(), [&](auto tag) {
      using T = decltype(tag);
      const T* g = imp->grad_as<T>();
      for (int64_t i = 0; i < imp->shape.numel(); ++i)
        sq += static_cast<double>(g[i]) * static_cast<double>(g[i]);
    });
  }
  const double norm = std::sqrt(sq);
  if (max_norm > 0 && std::isfinite(norm) && norm > max_norm) {
    const double s = max_norm / norm;
    for (const auto& [name, t] : params.entries()) {
      if (!t.has_grad()) continue;
      std::shared_ptr<TensorImpl> imp = t.impl();
      dispatch_dtype(t.dtype(), [&](auto tag) {
        using T = decltype(tag);
        T* g = imp->grad_as<T>();
        for (int64_t i = 0; i < imp->shape.numel(); ++i)
          g[i] = static_cast<T>(static_cast<double>(g[i]) * s);
      });
    }
  }
  return norm;
}

double lr_schedule(int64_t epoch, double base_lr) {
  if (epoch < 0) throw invalid_error("lr_schedule: negative epoch");
  return base_lr * std::pow(0.5, static_cast<double>(epoch / 100));
}

}  // namespace vsr
