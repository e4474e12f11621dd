// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VSR_TENSOR_HPP
#define VSR_TENSOR_HPP

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vsr/error.hpp"

namespace vsr {

// All values are dense rank-4 arrays in (batch, channel, height, width)
// order, row-major. Scalars are (1,1,1,1).
struct Shape {
  int64_t n = 0, c = 0, h = 0, w = 0;

  int64_t numel() const { return n * c * h * w; }
  bool operator==(const Shape&) const = default;
  std::string str() const;
};

enum class Dtype : uint8_t { F32 = 0, F64 = 1 };

inline size_t dtype_size(Dtype d) { return d == Dtype::F32 ? 4 : 8; }
const char* dtype_name(Dtype d);

struct TensorImpl;

// One recorded autograd op. Owned by the impl of its (single) output;
// holds shared references to its inputs so the graph keeps saved
// activations alive until backward. The output is held weakly — the
// node must not keep its own owner alive, or graphs would never free.
struct GradNode {
  const char* op = "";
  std::vector<std::shared_ptr<TensorImpl>> inputs;
  std::weak_ptr<TensorImpl> output;
  // Reads out.grad, accumulates (+=) into input grads.
  std::function<void(TensorImpl& out)> backward;
};

struct TensorImpl {
  Shape shape;
  Dtype dtype = Dtype::F32;
  bool requires_grad = false;
  std::vector<std::byte> data;
  std::vector<std::byte> grad;  // empty until first accumulation
  std::shared_ptr<GradNode> node;

  template <typename T>
  T* data_as() {
    return reinterpret_cast<T*>(data.data());
  }
  template <typename T>
  const T* data_as() const {
    return reinterpret_cast<const T*>(data.data());
  }
  // Zero-initialises the gradient buffer on first access.
  template <typename T>
  T* grad_as() {
    if (grad.empty()) grad.assign(data.size(), std::byte{0});
    return reinterpret_cast<T*>(grad.data());
  }
  bool has_grad() const { return !grad.empty(); }
};

// Thread-local record/no-record switch for op recording.
bool grad_enabled();
void set_grad_enabled(bool on);

struct NoGradGuard {
  NoGradGuard() : prev_(grad_enabled()) { set_grad_enabled(false); }
  ~NoGradGuard() { set_grad_enabled(prev_); }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool prev_;
};

// Value-semantic handle sharing a TensorImpl. Copies alias the same
// storage; use clone() for a deep copy.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, Dtype dtype, bool requires_grad = false);

  static Tensor zeros(Shape shape, Dtype dtype = Dtype::F32);
  static Tensor full(Shape shape, double value, Dtype dtype = Dtype::F32);
  static Tensor scalar(double value, Dtype dtype = Dtype::F32);
  static Tensor from_values(Shape shape, const std::vector<double>& values,
                            Dtype dtype = Dtype::F32);

  bool defined() const { return impl_ != nullptr; }
  const Shape& shape() const { return impl_->shape; }
  Dtype dtype() const { return impl_->dtype; }
  int64_t numel() const { return impl_->shape.numel(); }
  bool requires_grad() const { return impl_->requires_grad; }
  void set_requires_grad(bool rg) { impl_->requires_grad = rg; }

  template <typename T>
  T* data() {
    return impl_->data_as<T>();
  }
  template <typename T>
  const T* data() const {
    return impl_->data_as<T>();
  }
  template <typename T>
  T* grad() {
    return impl_->grad_as<T>();
  }
  bool has_grad() const { return impl_->has_grad(); }
  void zero_grad();
  void drop_grad() { impl_->grad.clear(); }

  // Element accessors converting through double; for tests and small
  // setup code, not hot paths.
  double value_at(int64_t flat_index) const;
  void set_value_at(int64_t flat_index, double v);
  double item() const;  // numel()==1

  Tensor clone() const;              // deep copy of data (no graph)
  Tensor detach() const;             // shares data, drops graph edge
  Tensor to_dtype(Dtype dt) const;   // converting copy (no graph)
  Tensor grad_tensor() const;        // deep copy of grad as a plain tensor

  bool all_finite() const;

  // Reverse-mode sweep from a scalar. Populates grads of every
  // reachable tensor with requires_grad; visits each node once;
  // accumulates additively across shared inputs.
  void backward() const;

  std::shared_ptr<TensorImpl>& impl() { return impl_; }
  const std::shared_ptr<TensorImpl>& impl() const { return impl_; }

 private:
  std::shared_ptr<TensorImpl> impl_;
};

// Invokes f with a value of the scalar C++ type matching dt.
template <typename F>
decltype(auto) dispatch_dtype(Dtype dt, F&& f) {
  if (dt == Dtype::F32) return f(float{});
  return f(double{});
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op);
void check_same_dtype(const Tensor& a, const Tensor& b, const char* op);

}  // namespace vsr

#endif  // VSR_TENSOR_HPP
