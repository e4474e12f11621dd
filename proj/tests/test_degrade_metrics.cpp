// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vsr/degrade.hpp"
#include "vsr/metrics.hpp"

using namespace vsr;

TEST_CASE("bicubic downscale matches the direct 2-D oracle") {
  uint64_t seed = 100;
  for (int i = 0; i < 8; ++i) {
    const int s = i % 2 ? 2 : 4;
    const int64_t h = s * (3 + i % 4), w = s * (2 + i % 5);
    INFO("instance ", i, ": ", h, "x", w, " /", s);
    Tensor hr = oracle::random_tensor({1, 3, h, w}, seed++, 0, 1);
    CHECK(oracle::max_abs_diff(degrade_bi(hr, s), oracle::resize_keys(hr, h / s, w / s, true)) <
          1e-6);
  }
}

TEST_CASE("blur + decimate matches the direct 2-D oracle") {
  uint64_t seed = 200;
  const double sigmas[] = {0.8, 1.6, 2.3};
  for (int i = 0; i < 9; ++i) {
    const int s = i % 3 ? 4 : 2;
    const int phase = i % s;
    const double sigma = sigmas[i % 3];
    const int64_t h = s * (3 + i % 3), w = s * (4 + i % 2);
    INFO("instance ", i, ": ", h, "x", w, " /", s, " sigma ", sigma, " phase ", phase);
    Tensor hr = oracle::random_tensor({1, 3, h, w}, seed++, 0, 1);
    CHECK(oracle::max_abs_diff(degrade_bd(hr, s, sigma, phase),
                               oracle::blur_decimate(hr, s, sigma, phase)) < 1e-6);
  }
}

TEST_CASE("degradations preserve constants exactly") {
  Tensor flat = Tensor::full({1, 3, 16, 16}, 0.37, Dtype::F64);
  Tensor bi = degrade_bi(flat, 4);
  Tensor bd = degrade_bd(flat, 4, 1.6, 1);
  for (int64_t i = 0; i < bi.numel(); ++i) CHECK(bi.value_at(i) == doctest::Approx(0.37).epsilon(1e-12));
  for (int64_t i = 0; i < bd.numel(); ++i) CHECK(bd.value_at(i) == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("bicubic upscale of a constant is that constant") {
  Tensor lr = Tensor::full({1, 3, 6, 5}, 0.81, Dtype::F64);
  Tensor up = resize_bicubic(lr, 24, 20);
  REQUIRE(up.shape() == Shape{1, 3, 24, 20});
  CHECK(oracle::max_abs_diff(up, Tensor::full({1, 3, 24, 20}, 0.81, Dtype::F64)) < 1e-12);
}

TEST_CASE("bicubic upscale matches the oracle") {
  Tensor lr = oracle::random_tensor({1, 3, 7, 5}, 42, 0, 1);
  CHECK(oracle::max_abs_diff(resize_bicubic(lr, 21, 15), oracle::resize_keys(lr, 21, 15, true)) <
        1e-6);
}

TEST_CASE("translation commutes with decimation when aligned to the grid") {
  // An HR shift of exactly s pixels becomes an LR shift of exactly 1 pixel.
  const int s = 4;
  Tensor hr = oracle::random_tensor({1, 1, 32, 32}, 7, 0, 1, Dtype::F64);
  Tensor shifted = Tensor::zeros({1, 1, 32, 32}, Dtype::F64);
  for (int64_t y = 0; y < 32; ++y)
    for (int64_t x = s; x < 32; ++x)
      shifted.set_value_at(y * 32 + x, hr.value_at(y * 32 + x - s));
  Tensor a = degrade_bd(hr, s, 1.2, 0);
  Tensor b = degrade_bd(shifted, s, 1.2, 0);
  // compare away from both borders: the blur kernel (radius 4*sigma) must not
  // touch the zero-filled strip on the left or the reflected columns on the right
  double worst = 0;
  for (int64_t y = 0; y < 8; ++y)
    for (int64_t x = 3; x < 7; ++x)
      worst = std::max(worst, std::fabs(b.value_at(y * 8 + x) - a.value_at(y * 8 + x - 1)));
  CHECK(worst < 1e-12);
}

TEST_CASE("degradation errors") {
  CHECK_THROWS_AS(degrade_bi(Tensor::zeros({1, 3, 30, 32}), 4), Error);
  CHECK_THROWS_AS(degrade_bd(Tensor::zeros({1, 3, 32, 32}), 4, 1.6, 4), Error);
  CHECK_THROWS_AS(degrade_bd(Tensor::zeros({1, 3, 32, 32}), 4, -1.0, 0), Error);
}

TEST_CASE("manifest round-trips") {
  DegradationSpec spec;
  spec.mode = DegradationSpec::Mode::BD;
  spec.s = 2;
  spec.sigma = 2.25;
  spec.phase = 1;
  DegradationSpec back = parse_degradation_manifest(degradation_manifest(spec));
  CHECK(back.mode == spec.mode);
  CHECK(back.s == spec.s);
  CHECK(back.sigma == doctest::Approx(spec.sigma));
  CHECK(back.phase == spec.phase);
  CHECK_THROWS_AS(parse_degradation_manifest("mode bd\nscale 4\nwhat 3\n"), Error);
  CHECK_THROWS_AS(parse_degradation_manifest("scale 4\n"), Error);
  CHECK_THROWS_AS(parse_degradation_manifest("mode bq\nscale 4\n"), Error);
}

TEST_CASE("psnr matches the direct computation") {
  uint64_t seed = 300;
  EvalProtocol p;  // border 4, luma
  for (int i = 0; i < 6; ++i) {
    Tensor a = oracle::random_tensor({1, 3, 24, 20}, seed++, 0, 1, Dtype::F64);
    Tensor b = oracle::random_tensor({1, 3, 24, 20}, seed++, 0, 1, Dtype::F64);
    CHECK(psnr(a, b, p) == doctest::Approx(oracle::psnr(a, b, 4, true)).epsilon(1e-9));
  }
  p.channel_mode = ChannelMode::Rgb;
  p.border_crop = 2;
  Tensor a = oracle::random_tensor({1, 3, 16, 16}, seed++, 0, 1, Dtype::F64);
  Tensor b = oracle::random_tensor({1, 3, 16, 16}, seed++, 0, 1, Dtype::F64);
  CHECK(psnr(a, b, p) == doctest::Approx(oracle::psnr(a, b, 2, false)).epsilon(1e-9));
}

TEST_CASE("psnr analytic anchor points") {
  EvalProtocol p;
  p.border_crop = 0;
  Tensor zero = Tensor::zeros({1, 3, 8, 8}, Dtype::F64);
  Tensor tenth = Tensor::full({1, 3, 8, 8}, 0.1, Dtype::F64);
  // uniform error of 0.1 -> mse 0.01 -> exactly 20 dB (same on every channel)
  CHECK(psnr(tenth, zero, p) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(std::isinf(psnr(zero, zero, p)));
  CHECK(format_metric(psnr(zero, zero, p)) == "inf");
}

TEST_CASE("ssim matches the direct windowed oracle") {
  uint64_t seed = 400;
  EvalProtocol p;
  for (int i = 0; i < 4; ++i) {
    // smooth-ish inputs: quantized noise plus a gradient
    Tensor a = oracle::random_tensor({1, 3, 24, 22}, seed++, 0.3, 0.7, Dtype::F64);
    Tensor b = a.clone();
    vsr::rng::Stream st(seed++);
    for (int64_t j = 0; j < b.numel(); ++j)
      b.set_value_at(j, std::clamp(b.value_at(j) + 0.05 * (st.next_uniform() - 0.5), 0.0, 1.0));
    CHECK(ssim(a, b, p) == doctest::Approx(oracle::ssim(a, b, 4, true)).epsilon(1e-9));
    p.channel_mode = ChannelMode::Rgb;
    CHECK(ssim(a, b, p) == doctest::Approx(oracle::ssim(a, b, 4, false)).epsilon(1e-9));
    p.channel_mode = ChannelMode::Luma;
  }
}

TEST_CASE("ssim of identical frames is 1") {
  Tensor a = oracle::random_tensor({1, 3, 20, 20}, 11, 0, 1);
  EvalProtocol p;
  CHECK(ssim(a, a, p) == doctest::Approx(1.0).epsilon(1e-12));
  // and degrades when one side is disturbed
  Tensor b = a.clone();
  for (int64_t i = 0; i < b.numel(); i += 3) b.set_value_at(i, 1.0 - b.value_at(i));
  CHECK(ssim(a, b, p) < 0.9);
}

TEST_CASE("ssim needs room for its window") {
  EvalProtocol p;  // border 4 leaves 10x10 < 11x11
  Tensor small = Tensor::zeros({1, 3, 18, 18});
  CHECK_THROWS_AS(ssim(small, small, p), Error);
  CHECK_THROWS_AS(psnr(Tensor::zeros({1, 3, 8, 8}), Tensor::zeros({1, 3, 8, 8}), p), Error);
  CHECK_THROWS_AS(psnr(Tensor::zeros({1, 1, 18, 18}), Tensor::zeros({1, 1, 18, 18}), p), Error);
}

TEST_CASE("evaluate_sequence applies the frame-skip protocol") {
  std::vector<Tensor> pred, gt;
  for (int i = 0; i < 7; ++i) {
    gt.push_back(oracle::random_tensor({1, 3, 20, 20}, 500 + i, 0, 1));
    pred.push_back(i == 3 ? gt.back().clone() : oracle::random_tensor({1, 3, 20, 20}, 600 + i, 0, 1));
  }
  EvalProtocol p;
  SequenceReport r = evaluate_sequence(pred, gt, p);
  REQUIRE(r.frames.size() == 3);  // 7 - 2 head - 2 tail
  CHECK(r.frames.front().index == 2);
  CHECK(r.frames.back().index == 4);
  CHECK(r.skipped_head == 2);
  CHECK(r.skipped_tail == 2);
  CHECK(std::isinf(r.frames[1].psnr));  // the identical frame sits at index 3
  CHECK(r.frames[1].ssim == doctest::Approx(1.0));

  // mean is the plain average of the retained frames
  double ps = 0;
  for (const auto& f : r.frames) ps += f.psnr;
  CHECK((std::isinf(ps) ? std::isinf(r.mean_psnr) : r.mean_psnr == doctest::Approx(ps / 3)));

  CHECK_THROWS_AS(evaluate_sequence({pred[0]}, gt, p), Error);
  std::vector<Tensor> three(pred.begin(), pred.begin() + 3);
  std::vector<Tensor> gthree(gt.begin(), gt.begin() + 3);
  CHECK_THROWS_AS(evaluate_sequence(three, gthree, p), Error);  // 3 - 4 skips < 1
}

TEST_CASE("reports render both formats") {
  std::vector<Tensor> pred, gt;
  for (int i = 0; i < 5; ++i) {
    gt.push_back(oracle::random_tensor({1, 3, 20, 20}, 700 + i, 0, 1));
    pred.push_back(gt.back().clone());
  }
  EvalProtocol p;
  SequenceReport r = evaluate_sequence(pred, gt, p);
  std::string text = report_text(r, p);
  CHECK(text.find("mean") != std::string::npos);
  CHECK(text.find("inf") != std::string::npos);
  CHECK(text.find("border crop 4") != std::string::npos);
  std::string kv = report_kv(r);
  CHECK(kv.find("2 inf 1.000000") != std::string::npos);
  CHECK(kv.find("mean inf 1.000000") != std::string::npos);
}

TEST_CASE("luma weights are the BT.601 full-range triple") {
  // A pure-red frame against black: psnr depends only on the 0.299 weight.
  Tensor red = Tensor::zeros({1, 3, 12, 12}, Dtype::F64);
  for (int64_t i = 0; i < 144; ++i) red.set_value_at(i, 1.0);
  Tensor black = Tensor::zeros({1, 3, 12, 12}, Dtype::F64);
  EvalProtocol p;
  p.border_crop = 0;
  const double want = 10.0 * std::log10(1.0 / (0.299 * 0.299));
  CHECK(psnr(red, black, p) == doctest::Approx(want).epsilon(1e-12));
}
