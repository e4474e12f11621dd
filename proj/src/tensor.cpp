// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/tensor.hpp"

#include <cmath>
#include <unordered_set>

namespace vsr {

std::string Shape::str() const {
  return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
         std::to_string(w) + ")";
}

const char* dtype_name(Dtype d) { return d == Dtype::F32 ? "f32" : "f64"; }

namespace {
thread_local bool g_grad_enabled = true;

void check_shape_positive(const Shape& s) {
  if (s.n <= 0 || s.c <= 0 || s.h <= 0 || s.w <= 0)
    throw invalid_error("tensor shape must be positive, got " + s.str());
}
}  // namespace

bool grad_enabled() { return g_grad_enabled; }
void set_grad_enabled(bool on) { g_grad_enabled = on; }

Tensor::Tensor(Shape shape, Dtype dtype, bool requires_grad) {
  check_shape_positive(shape);
  impl_ = std::make_shared<TensorImpl>();
  impl_->shape = shape;
  impl_->dtype = dtype;
  impl_->requires_grad = requires_grad;
  impl_->data.assign(static_cast<size_t>(shape.numel()) * dtype_size(dtype), std::byte{0});
}

Tensor Tensor::zeros(Shape shape, Dtype dtype) { return Tensor(shape, dtype); }

Tensor Tensor::full(Shape shape, double value, Dtype dtype) {
  Tensor t(shape, dtype);
  dispatch_dtype(dtype, [&](auto tag) {
    using T = decltype(tag);
    T* p = t.data<T>();
    for (int64_t i = 0; i < t.numel(); ++i) p[i] = static_cast<T>(value);
  });
  return t;
}

Tensor Tensor::scalar(double value, Dtype dtype) { return full({1, 1, 1, 1}, value, dtype); }

Tensor Tensor::from_values(Shape shape, const std::vector<double>& values, Dtype dtype) {
  Tensor t(shape, dtype);
  if (static_cast<int64_t>(values.size()) != shape.numel())
    throw invalid_error("from_values: " + std::to_string(values.size()) + " values for shape " +
                        shape.str());
  for (int64_t i = 0; i < t.numel(); ++i) t.set_value_at(i, values[static_cast<size_t>(i)]);
  return t;
}

void Tensor::zero_grad() { impl_->grad.assign(impl_->data.size(), std::byte{0}); }

double Tensor::value_at(int64_t flat_index) const {
  return dispatch_dtype(dtype(), [&](auto tag) -> double {
    using T = decltype(tag);
    return static_cast<double>(data<T>()[flat_index]);
  });
}

void Tensor::set_value_at(int64_t flat_index, double v) {
  dispatch_dtype(dtype(), [&](auto tag) {
    using T = decltype(tag);
    data<T>()[flat_index] = static_cast<T>(v);
  });
}

double Tensor::item() const {
  if (numel() != 1) throw invalid_error("item(): tensor has " + std::to_string(numel()) + " elements");
  return value_at(0);
}

Tensor Tensor::clone() const {
  Tensor t(shape(), dtype(), requires_grad());
  t.impl_->data = impl_->data;
  return t;
}

Tensor Tensor::detach() const {
  Tensor t;
  t.impl_ = std::make_shared<TensorImpl>();
  t.impl_->shape = impl_->shape;
  t.impl_->dtype = impl_->dtype;
  t.impl_->requires_grad = false;
  t.impl_->data = impl_->data;  // copy of bytes, not aliased
  return t;
}

Tensor Tensor::to_dtype(Dtype dt) const {
  if (dt == dtype()) return clone();
  Tensor t(shape(), dt, requires_grad());
  for (int64_t i = 0; i < numel(); ++i) t.set_value_at(i, value_at(i));
  return t;
}

Tensor Tensor::grad_tensor() const {
  Tensor t(shape(), dtype());
  if (impl_->has_grad()) t.impl_->data = impl_->grad;
  return t;
}

bool Tensor::all_finite() const {
  return dispatch_dtype(dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* p = data<T>();
    for (int64_t i = 0; i < numel(); ++i)
      if (!std::isfinite(static_cast<double>(p[i]))) return false;
    return true;
  });
}

void Tensor::backward() const {
  if (numel() != 1)
    throw invalid_error("backward: loss must be scalar, got shape " + shape().str());
  // Seed d(loss)/d(loss) = 1.
  dispatch_dtype(dtype(), [&](auto tag) {
    using T = decltype(tag);
    impl_->grad_as<T>()[0] = static_cast<T>(1);
  });
  if (!impl_->node) return;  // leaf scalar: nothing upstream

  // Iterative post-order DFS over producer nodes; each node once.
  std::vector<GradNode*> order;
  std::unordered_set<GradNode*> visited;
  struct Frame {
    GradNode* node;
    size_t next_input = 0;
  };
  std::vector<Frame> stack;
  stack.push_back({impl_->node.get()});
  visited.insert(impl_->node.get());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_input < f.node->inputs.size()) {
      TensorImpl* in = f.node->inputs[f.next_input++].get();
      if (in->node && !visited.count(in->node.get())) {
        visited.insert(in->node.get());
        stack.push_back({in->node.get()});
      }
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    GradNode* node = *it;
    std::shared_ptr<TensorImpl> out = node->output.lock();
    if (!out) continue;  // output freed: nothing depends on this branch
    node->backward(*out);
  }
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!(a.shape() == b.shape()))
    throw invalid_error(std::string(op) + ": shape mismatch " + a.shape().str() + " vs " +
                        b.shape().str());
}

void check_same_dtype(const Tensor& a, const Tensor& b, const char* op) {
  if (a.dtype() != b.dtype())
    throw invalid_error(std::string(op) + ": dtype mismatch " + dtype_name(a.dtype()) + " vs " +
                        dtype_name(b.dtype()));
}

}  // namespace vsr
