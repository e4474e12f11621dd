// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "vsr/config.hpp"
#include "vsr/error.hpp"

using namespace vsr;

namespace {

void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    parse_run_config(text);
    FAIL("expected config error for: ", text);
  } catch (const Error& e) {
    CHECK(e.error_class() == ErrorClass::Config);
    INFO("message: ", e.what());
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("an empty object yields pure defaults") {
  RunConfig rc = parse_run_config("{}");
  CHECK(rc.model.variant == "tdan");
  CHECK(rc.model.channels == 64);
  CHECK(rc.model.k1 == 5);
  CHECK(rc.model.k2 == 14);
  CHECK(rc.model.d == 4);
  CHECK(rc.model.radius == 2);
  CHECK(rc.model.scale == 4);
  CHECK(rc.data.degradation == "bi");
  CHECK(rc.data.sigma == doctest::Approx(1.6));
  CHECK(rc.data.augment == false);
  CHECK(rc.train.batch == 64);
  CHECK(rc.train.patch == 48);
  CHECK(rc.train.lr == doctest::Approx(1e-4));
  CHECK(rc.train.epochs == 100);
  CHECK(rc.train.steps == 0);
  CHECK(rc.train.checkpoint_dir == "runs/default");
  CHECK(rc.eval.border == 4);
  CHECK(rc.eval.skip_head == 2);
  CHECK(rc.eval.skip_tail == 2);
  CHECK(rc.eval.channel == "luma");
  CHECK_NOTHROW(rc.validate());
}

TEST_CASE("partial sections override only what they mention") {
  RunConfig rc = parse_run_config(R"({
    "model": {"variant": "mfsr", "channels": 48},
    "data": {"train_root": "/data/train", "degradation": "bd", "sigma": 2.0, "phase": 1},
    "train": {"batch": 8, "steps": 500, "seed": 7},
    "eval": {"channel": "rgb", "border": 0}
  })");
  CHECK(rc.model.variant == "mfsr");
  CHECK(rc.model.channels == 48);
  CHECK(rc.model.k1 == 5);  // untouched default
  CHECK(rc.data.train_root == "/data/train");
  CHECK(rc.data.degradation == "bd");
  CHECK(rc.data.phase == 1);
  CHECK(rc.train.batch == 8);
  CHECK(rc.train.steps == 500);
  CHECK(rc.train.seed == 7);
  CHECK(rc.train.patch == 48);
  CHECK(rc.eval.channel == "rgb");
  CHECK(rc.eval.border == 0);

  DegradationSpec deg = rc.degradation_spec();
  CHECK(deg.mode == DegradationSpec::Mode::BD);
  CHECK(deg.s == 4);  // model.scale
  CHECK(deg.sigma == doctest::Approx(2.0));
  CHECK(deg.phase == 1);

  TrainConfig tc = rc.train_config();
  CHECK(tc.batch == 8);
  CHECK(tc.steps == 500);
  CHECK(tc.seed == 7);
  CHECK(tc.augment == false);

  EvalProtocol ep = rc.eval_protocol();
  CHECK(ep.border_crop == 0);
  CHECK(ep.channel_mode == ChannelMode::Rgb);
}

TEST_CASE("unknown keys are named in the error") {
  expect_config_error(R"({"train": {"bogus": 1}})", "train.bogus");
  expect_config_error(R"({"modle": {}})", "modle");
  expect_config_error(R"({"model": {"layers": 3}})", "model.layers");
  expect_config_error(R"({"eval": {"skip": 1}})", "eval.skip");
}

TEST_CASE("type mismatches are config errors naming the path") {
  expect_config_error(R"({"train": {"batch": "many"}})", "train.batch");
  expect_config_error(R"({"model": {"variant": 4}})", "model.variant");
  expect_config_error(R"({"data": {"augment": "yes"}})", "data.augment");
  expect_config_error(R"({"train": 3})", "train");
}

TEST_CASE("malformed json is a config error") {
  expect_config_error("{", "");
  expect_config_error("[1,2]", "");
}

TEST_CASE("semantic validation happens on parse") {
  expect_config_error(R"({"data": {"degradation": "nearest"}})", "degradation");
  expect_config_error(R"({"data": {"sigma": -0.5, "degradation": "bd"}})", "sigma");
  expect_config_error(R"({"data": {"phase": 4, "degradation": "bd"}})", "phase");
  expect_config_error(R"({"model": {"scale": 5}})", "scale");
  expect_config_error(R"({"train": {"batch": 0}})", "batch");
  expect_config_error(R"({"train": {"patch": -3}})", "patch");
  expect_config_error(R"({"train": {"lr": 0}})", "lr");
  expect_config_error(R"({"eval": {"border": -1}})", "border");
  expect_config_error(R"({"eval": {"channel": "y"}})", "channel");
}

TEST_CASE("canonical serialization round-trips") {
  RunConfig rc = parse_run_config(R"({
    "model": {"variant": "sisr", "k2": 3, "scale": 2},
    "data": {"train_root": "a", "eval_root": "b", "degradation": "bd", "sigma": 1.25},
    "train": {"batch": 2, "patch": 12, "lr": 0.0005, "epochs": 4, "seed": 11},
    "eval": {"border": 1, "skip_head": 0, "skip_tail": 1, "channel": "rgb"}
  })");
  std::string canon = run_config_json(rc);
  RunConfig back = parse_run_config(canon);
  CHECK(run_config_json(back) == canon);

  CHECK(back.model.variant == "sisr");
  CHECK(back.model.k2 == 3);
  CHECK(back.model.scale == 2);
  CHECK(back.data.eval_root == "b");
  CHECK(back.data.sigma == doctest::Approx(1.25));
  CHECK(back.train.lr == doctest::Approx(5e-4));
  CHECK(back.eval.skip_tail == 1);

  // canonical text is stable: serializing the default config twice agrees
  CHECK(run_config_json(RunConfig{}) == run_config_json(parse_run_config("{}")));
}
