// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/gradcheck.hpp"

#include <cmath>
#include <cstdio>

#include "vsr/deform_conv.hpp"
#include "vsr/losses.hpp"
#include "vsr/nn.hpp"
#include "vsr/ops.hpp"
#include "vsr/rng.hpp"

namespace vsr {

double gradcheck_max_rel(const std::function<Tensor()>& loss_fn, const std::vector<Tensor>& wrt,
                         double h) {
  for (const auto& t : wrt) {
    if (t.dtype() != Dtype::F64) throw invalid_error("gradcheck requires 64-bit tensors");
    t.impl()->requires_grad = true;
    t.impl()->grad.clear();
  }
  Tensor loss = loss_fn();
  loss.backward();
  std::vector<std::vector<double>> analytic;
  for (const auto& t : wrt) {
    std::vector<double> g(static_cast<size_t>(t.numel()), 0.0);
    if (t.impl()->has_grad()) {
      const double* gp = t.impl()->grad_as<double>();
      for (int64_t i = 0; i < t.numel(); ++i) g[static_cast<size_t>(i)] = gp[i];
    }
    analytic.push_back(std::move(g));
  }

  NoGradGuard ng;
  double worst = 0;
  for (size_t ti = 0; ti < wrt.size(); ++ti) {
    Tensor t = wrt[ti];
    double* d = t.data<double>();
    for (int64_t i = 0; i < t.numel(); ++i) {
      const double save = d[i];
      d[i] = save + h;
      const double up = loss_fn().item();
      d[i] = save - h;
      const double dn = loss_fn().item();
      d[i] = save;
      const double fd = (up - dn) / (2 * h);
      const double a = analytic[ti][static_cast<size_t>(i)];
      const double rel = std::fabs(a - fd) / std::max({std::fabs(a), std::fabs(fd), 1e-3});
      if (rel > worst) worst = rel;
    }
  }
  return worst;
}

namespace {

Tensor randu(Shape s, rng::Stream& rs, double lo = -1, double hi = 1) {
  Tensor t(s, Dtype::F64);
  double* d = t.data<double>();
  for (int64_t i = 0; i < t.numel(); ++i) d[i] = rs.next_uniform(lo, hi);
  return t;
}

// Values bounded away from zero, for ops with a kink at the origin.
Tensor randu_nonzero(Shape s, rng::Stream& rs, double lo = 0.1, double hi = 1.0) {
  Tensor t(s, Dtype::F64);
  double* d = t.data<double>();
  for (int64_t i = 0; i < t.numel(); ++i) {
    const double sign = rs.next_uniform() < 0.5 ? -1.0 : 1.0;
    d[i] = sign * rs.next_uniform(lo, hi);
  }
  return t;
}

// Scalar loss: sum of the output weighted by a fixed random projection, so
// every output element influences the gradient with its own coefficient.
Tensor projected(const Tensor& out, const Tensor& proj) { return sum(mul(out, proj)); }

struct Ctx {
  GradCheckReport& rep;
  uint64_t seed;

  void add(const std::string& op, double max_rel, double tol = 1e-4) {
    rep.entries.push_back({op, max_rel, tol, max_rel < tol});
  }
};

void check_deform(Ctx& cx) {
  rng::Stream rs(rng::derive(cx.seed, 1));
  Tensor x = randu({2, 3, 6, 5}, rs);
  Tensor w = randu({4, 3, 3, 3}, rs, -0.5, 0.5);
  Tensor b = randu({1, 1, 1, 4}, rs, -0.3, 0.3);
  // Offsets with fractional parts in [0.2, 0.8]: integer part in {-1,0,1}.
  Tensor off({2, 18, 6, 5}, Dtype::F64);
  double* od = off.data<double>();
  for (int64_t i = 0; i < off.numel(); ++i)
    od[i] = static_cast<double>(static_cast<int64_t>(rs.next_below(3)) - 1) +
            rs.next_uniform(0.2, 0.8);
  Tensor proj;
  {
    NoGradGuard ng;
    proj = randu({2, 4, 6, 5}, rs);
  }
  auto fwd = [&] { return projected(deformable_conv2d(x, off, w, &b), proj); };
  cx.add("deformable_conv2d.input", gradcheck_max_rel(fwd, {x}));
  cx.add("deformable_conv2d.offsets", gradcheck_max_rel(fwd, {off}));
  cx.add("deformable_conv2d.weight", gradcheck_max_rel(fwd, {w}));
  cx.add("deformable_conv2d.bias", gradcheck_max_rel(fwd, {b}));
}

void check_tensor_ops(Ctx& cx) {
  {
    rng::Stream rs(rng::derive(cx.seed, 2));
    Tensor x = randu({2, 3, 6, 5}, rs);
    Tensor w = randu({4, 3, 3, 3}, rs, -0.5, 0.5);
    Tensor b = randu({1, 1, 1, 4}, rs, -0.3, 0.3);
    Tensor proj;
    {
      NoGradGuard ng;
      proj = randu({2, 4, 6, 5}, rs);
    }
    auto fwd = [&] { return projected(conv2d(x, w, &b, 1, 1), proj); };
    cx.add("conv2d", gradcheck_max_rel(fwd, {x, w, b}));
  }
  {
    rng::Stream rs(rng::derive(cx.seed, 21));
    Tensor x = randu({1, 2, 7, 7}, rs);
    Tensor w = randu({3, 2, 3, 3}, rs, -0.5, 0.5);
    Tensor proj;
    {
      NoGradGuard ng;
      proj = randu({1, 3, 3, 3}, rs);
    }
    auto fwd = [&] { return projected(conv2d(x, w, nullptr, 2, 0), proj); };
    cx.add("conv2d.stride2", gradcheck_max_rel(fwd, {x, w}));
  }
  {
    rng::Stream rs(rng::derive(cx.seed, 3));
    ParamStore ps;
    ResidualBlock blk(ps, "rb", 4, rng::derive(cx.seed, 31), Dtype::F64);
    Tensor x = randu({2, 4, 5, 5}, rs);
    Tensor proj;
    {
      NoGradGuard ng;
      proj = randu({2, 4, 5, 5}, rs);
    }
    auto fwd = [&] { return projected(blk(x), proj); };
    cx.add("residual_block",
           gradcheck_max_rel(fwd, {x, blk.c1.w, blk.c1.b, blk.c2.w, blk.c2.b}));
  }
  {
    rng::Stream rs(rng::derive(cx.seed, 4));
    Tensor x = randu({1, 8, 3, 3}, rs);
    Tensor proj;
    {
      NoGradGuard ng;
      proj = randu({1, 2, 6, 6}, rs);
    }
    auto fwd = [&] { return projected(pixel_shuffle(x, 2), proj); };
    cx.add("pixel_shuffle", gradcheck_max_rel(fwd, {x}));
  }
  {
    rng::Stream rs(rng::derive(cx.seed, 5));
    std::vector<Tensor> aligned;
    for (int i = 0; i < 4; ++i) aligned.push_back(randu({1, 3, 5, 5}, rs));
    Tensor ref = randu({1, 3, 5, 5}, rs);
    std::vector<Tensor> wrt = aligned;
    wrt.push_back(ref);
    auto fwd = [&] { return align_loss(aligned, ref); };
    cx.add("l_align", gradcheck_max_rel(fwd, wrt));
  }
  {
    rng::Stream rs(rng::derive(cx.seed, 6));
    Tensor p = randu({1, 3, 8, 8}, rs), g = randu({1, 3, 8, 8}, rs);
    auto fwd = [&] { return sr_loss(p, g); };
    cx.add("l_sr", gradcheck_max_rel(fwd, {p, g}));
  }
  {
    rng::Stream rs(rng::derive(cx.seed, 7));
    Tensor x = randu_nonzero({2, 3, 4, 4}, rs);
    Tensor proj;
    {
      NoGradGuard ng;
      proj = randu({2, 3, 4, 4}, rs);
    }
    cx.add("relu", gradcheck_max_rel([&] { return projected(relu(x), proj); }, {x}));
    cx.add("abs", gradcheck_max_rel([&] { return projected(abs(x), proj); }, {x}));
  }
  {
    rng::Stream rs(rng::derive(cx.seed, 8));
    Tensor a = randu({2, 2, 3, 3}, rs), b = randu({2, 2, 3, 3}, rs);
    Tensor proj;
    {
      NoGradGuard ng;
      proj = randu({2, 2, 3, 3}, rs);
    }
    cx.add("add", gradcheck_max_rel([&] { return projected(add(a, b), proj); }, {a, b}));
    cx.add("mul", gradcheck_max_rel([&] { return projected(mul(a, b), proj); }, {a, b}));
    cx.add("scale", gradcheck_max_rel([&] { return projected(scale(a, 1.7), proj); }, {a}));
    cx.add("mean", gradcheck_max_rel([&] { return mean(a); }, {a}));
    cx.add("sum", gradcheck_max_rel([&] { return scale(sum(a), 0.1); }, {a}));
  }
  {
    rng::Stream rs(rng::derive(cx.seed, 9));
    Tensor a = randu({1, 2, 3, 3}, rs), b = randu({1, 3, 3, 3}, rs);
    Tensor proj;
    {
      NoGradGuard ng;
      proj = randu({1, 5, 3, 3}, rs);
    }
    cx.add("concat_channels",
           gradcheck_max_rel([&] { return projected(concat_channels({a, b}), proj); }, {a, b}));
  }
}

}  // namespace

GradCheckReport run_gradcheck(const std::string& module, uint64_t seed) {
  if (module != "deform" && module != "tensor" && module != "all")
    throw config_error("unknown gradcheck module '" + module + "' (expected deform, tensor, all)");
  GradCheckReport rep;
  Ctx cx{rep, seed};
  if (module == "deform" || module == "all") check_deform(cx);
  if (module == "tensor" || module == "all") check_tensor_ops(cx);
  rep.all_pass = true;
  for (const auto& e : rep.entries) rep.all_pass = rep.all_pass && e.pass;
  rep.notes =
      "central differences, h=1e-06, 64-bit; deformable offsets drawn with fractional parts in "
      "[0.2, 0.8]";
  return rep;
}

std::string gradcheck_text(const GradCheckReport& r) {
  std::string out = "op                            max_rel     tolerance  status\n";
  char buf[128];
  for (const auto& e : r.entries) {
    std::snprintf(buf, sizeof buf, "%-28s  %.3e   %.1e    %s\n", e.op.c_str(), e.max_rel,
                  e.tolerance, e.pass ? "pass" : "FAIL");
    out += buf;
  }
  out += r.notes + "\n";
  out += r.all_pass ? "gradcheck: all pass\n" : "gradcheck: FAILURES PRESENT\n";
  return out;
}

}  // namespace vsr
