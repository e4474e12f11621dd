// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/params.hpp"

#include <cmath>

#include "vsr/error.hpp"
#include "vsr/rng.hpp"

namespace vsr {

Tensor ParamStore::create(const std::string& name, const Shape& shape, Init init, uint64_t seed,
                          Dtype dtype) {
  if (has(name)) throw invalid_error("parameter registered twice: " + name);
  Tensor t(shape, dtype);
  if (init == Init::FanInUniform) {
    const double fan_in = static_cast<double>(shape.c * shape.h * shape.w);
    const double bound = std::sqrt(1.0 / fan_in);
    rng::Stream rs(rng::derive(seed, rng::fnv1a(name)));
    dispatch_dtype(dtype, [&](auto tag) {
      using T = decltype(tag);
      T* p = t.data<T>();
      for (int64_t i = 0; i < t.numel(); ++i) p[i] = static_cast<T>(rs.next_uniform(-bound, bound));
    });
  }  // Zero: tensors start zero-filled
  t.impl()->requires_grad = true;
  entries_.emplace_back(name, t);
  return t;
}

Tensor& ParamStore::get(const std::string& name) {
  for (auto& [n, t] : entries_)
    if (n == name) return t;
  throw invalid_error("unknown parameter: " + name);
}

const Tensor& ParamStore::get(const std::string& name) const {
  for (const auto& [n, t] : entries_)
    if (n == name) return t;
  throw invalid_error("unknown parameter: " + name);
}

bool ParamStore::has(const std::string& name) const {
  for (const auto& [n, t] : entries_)
    if (n == name) return true;
  return false;
}

int64_t ParamStore::param_count() const {
  int64_t total = 0;
  for (const auto& [n, t] : entries_) total += t.numel();
  return total;
}

void ParamStore::zero_grads() {
  for (auto& [n, t] : entries_) t.zero_grad();
}

bool ParamStore::grads_finite(std::string* first_bad) const {
  for (const auto& [n, t] : entries_) {
    if (!t.impl()->has_grad()) continue;
    bool ok = true;
    dispatch_dtype(t.dtype(), [&](auto tag) {
      using T = decltype(tag);
      const T* g = t.impl()->grad_as<T>();
      for (int64_t i = 0; i < t.numel(); ++i)
        if (!std::isfinite(static_cast<double>(g[i]))) {
          ok = false;
          return;
        }
    });
    if (!ok) {
      if (first_bad) *first_bad = n;
      return false;
    }
  }
  return true;
}

}  // namespace vsr
