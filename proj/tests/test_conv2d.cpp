// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <vector>

#include "oracles.hpp"
#include "vsr/gradcheck.hpp"
#include "vsr/ops.hpp"

using namespace vsr;

TEST_CASE("conv2d matches the naive loop across shapes and strides") {
  struct Case {
    int64_t n, cin, h, w, cout;
    int k, stride, pad;
    bool bias;
  };
  const Case cases[] = {
      {1, 1, 5, 5, 1, 3, 1, 1, true},  {2, 3, 8, 6, 4, 3, 1, 1, true},
      {1, 4, 7, 7, 2, 3, 2, 1, false}, {2, 2, 9, 5, 3, 1, 1, 0, true},
      {1, 3, 6, 6, 8, 3, 3, 1, true},  {3, 5, 4, 4, 5, 3, 1, 0, false},
  };
  uint64_t seed = 1000;
  for (const Case& c : cases) {
    INFO("case n=", c.n, " cin=", c.cin, " k=", c.k, " stride=", c.stride, " pad=", c.pad);
    Tensor in = oracle::random_tensor({c.n, c.cin, c.h, c.w}, seed++);
    Tensor w = oracle::random_tensor({c.cout, c.cin, c.k, c.k}, seed++);
    Tensor b = oracle::random_tensor({1, 1, 1, c.cout}, seed++);
    Tensor got = conv2d(in, w, c.bias ? &b : nullptr, c.stride, c.pad);
    Tensor want = oracle::conv2d(in, w, c.bias ? &b : nullptr, c.stride, c.pad);
    REQUIRE(got.shape() == want.shape());
    CHECK(oracle::max_rel_diff(got, want) < 1e-5);
  }
}

TEST_CASE("conv2d 64-bit matches the oracle almost exactly") {
  Tensor in = oracle::random_tensor({2, 4, 6, 5}, 7, -1, 1, Dtype::F64);
  Tensor w = oracle::random_tensor({3, 4, 3, 3}, 8, -1, 1, Dtype::F64);
  Tensor b = oracle::random_tensor({1, 1, 1, 3}, 9, -1, 1, Dtype::F64);
  CHECK(oracle::max_rel_diff(conv2d(in, w, &b, 1, 1), oracle::conv2d(in, w, &b, 1, 1)) < 1e-12);
}

TEST_CASE("conv2d is linear in its input") {
  Tensor a = oracle::random_tensor({1, 3, 6, 6}, 21, -1, 1, Dtype::F64);
  Tensor b = oracle::random_tensor({1, 3, 6, 6}, 22, -1, 1, Dtype::F64);
  Tensor w = oracle::random_tensor({2, 3, 3, 3}, 23, -1, 1, Dtype::F64);
  // conv(2a + 3b) == 2 conv(a) + 3 conv(b) (no bias)
  Tensor lhs = conv2d(add(scale(a, 2), scale(b, 3)), w, nullptr, 1, 1);
  Tensor rhs = add(scale(conv2d(a, w, nullptr, 1, 1), 2), scale(conv2d(b, w, nullptr, 1, 1), 3));
  CHECK(oracle::max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("conv2d identity kernel passes the input through") {
  Tensor in = oracle::random_tensor({1, 2, 4, 4}, 31, -1, 1, Dtype::F64);
  Tensor w = Tensor::zeros({2, 2, 3, 3}, Dtype::F64);
  // center tap of the matching channel = 1
  for (int oc = 0; oc < 2; ++oc) w.set_value_at(((oc * 2 + oc) * 3 + 1) * 3 + 1, 1.0);
  CHECK(oracle::max_abs_diff(conv2d(in, w, nullptr, 1, 1), in) == 0.0);
}

TEST_CASE("conv2d validates arguments") {
  Tensor in = Tensor::zeros({1, 3, 4, 4});
  Tensor w = Tensor::zeros({2, 3, 3, 3});
  Tensor wrong_c = Tensor::zeros({2, 4, 3, 3});
  Tensor b_bad = Tensor::zeros({1, 1, 1, 3});
  CHECK_THROWS_AS(conv2d(in, wrong_c, nullptr, 1, 1), Error);
  CHECK_THROWS_AS(conv2d(in, w, &b_bad, 1, 1), Error);
  CHECK_THROWS_AS(conv2d(in, w, nullptr, 0, 1), Error);
  CHECK_THROWS_AS(conv2d(in, w, nullptr, 1, -1), Error);
}

TEST_CASE("conv2d backward agrees with finite differences") {
  Tensor in = oracle::random_tensor({2, 3, 5, 5}, 41, -1, 1, Dtype::F64);
  Tensor w = oracle::random_tensor({4, 3, 3, 3}, 42, -1, 1, Dtype::F64);
  Tensor b = oracle::random_tensor({1, 1, 1, 4}, 43, -1, 1, Dtype::F64);
  in.set_requires_grad(true);
  w.set_requires_grad(true);
  b.set_requires_grad(true);
  Tensor proj = oracle::random_tensor({2, 4, 5, 5}, 44, -1, 1, Dtype::F64);
  auto loss = [&] { return sum(mul(conv2d(in, w, &b, 1, 1), proj)); };
  CHECK(gradcheck_max_rel(loss, {in, w, b}) < 1e-6);
}

TEST_CASE("conv2d gradient accumulates additively when weights are shared") {
  Tensor in = oracle::random_tensor({1, 2, 4, 4}, 51, -1, 1, Dtype::F64);
  Tensor w = oracle::random_tensor({2, 2, 3, 3}, 52, -1, 1, Dtype::F64);
  w.set_requires_grad(true);
  // Two layers sharing one weight tensor.
  sum(conv2d(conv2d(in, w, nullptr, 1, 1), w, nullptr, 1, 1)).backward();
  Tensor g_shared = w.grad_tensor();

  // Same graph with an explicit copy for the second layer: grads must add up.
  w.zero_grad();
  Tensor w2 = w.clone();
  w2.set_requires_grad(true);
  sum(conv2d(conv2d(in, w, nullptr, 1, 1), w2, nullptr, 1, 1)).backward();
  Tensor expect = add(w.grad_tensor(), w2.grad_tensor());
  CHECK(oracle::max_abs_diff(g_shared, expect) < 1e-12);
}

TEST_CASE("conv2d forward and backward are bitwise deterministic") {
  Tensor in = oracle::random_tensor({2, 8, 12, 12}, 61);
  Tensor w = oracle::random_tensor({8, 8, 3, 3}, 62);
  Tensor b = oracle::random_tensor({1, 1, 1, 8}, 63);
  in.set_requires_grad(true);
  w.set_requires_grad(true);
  auto run = [&](Tensor& gin, Tensor& gw) {
    in.zero_grad();
    w.zero_grad();
    Tensor out = conv2d(in, w, &b, 1, 1);
    sum(out).backward();
    gin = in.grad_tensor();
    gw = w.grad_tensor();
    return out;
  };
  Tensor gin1, gw1, gin2, gw2;
  Tensor o1 = run(gin1, gw1);
  Tensor o2 = run(gin2, gw2);
  CHECK(std::memcmp(o1.data<float>(), o2.data<float>(), sizeof(float) * o1.numel()) == 0);
  CHECK(std::memcmp(gin1.data<float>(), gin2.data<float>(), sizeof(float) * gin1.numel()) == 0);
  CHECK(std::memcmp(gw1.data<float>(), gw2.data<float>(), sizeof(float) * gw1.numel()) == 0);
}
