// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "vsr/dataset.hpp"
#include "vsr/degrade.hpp"
#include "vsr/metrics.hpp"
#include "vsr/model.hpp"
#include "vsr/trainer.hpp"

namespace vsr {

// One JSON file describing a full run: model architecture, dataset roots and
// degradation, training hyperparameters and the evaluation protocol. Every
// field has a default; unknown keys are rejected so typos cannot silently
// fall back to defaults.
struct RunConfig {
  ModelConfig model;

  struct Data {
    std::string train_root;
    std::string eval_root;
    std::string degradation = "bi";  // bi | bd
    double sigma = 1.6;              // bd blur std
    int phase = 0;                   // bd decimation offset
    bool augment = false;
  } data;

  struct Train {
    int batch = 64;
    int patch = 48;
    double lr = 1e-4;
    int epochs = 100;
    int64_t steps = 0;  // > 0 caps the run in steps instead of epochs
    uint64_t seed = 0;
    double clip_norm = 0;  // > 0: clip the global gradient norm
    std::string checkpoint_dir = "runs/default";
  } train;

  struct Eval {
    int border = 4;
    int skip_head = 2;
    int skip_tail = 2;
    std::string channel = "luma";  // luma | rgb
  } eval;

  void validate() const;  // throws config_error

  DegradationSpec degradation_spec() const;  // scale taken from model.scale
  TrainConfig train_config() const;
  EvalProtocol eval_protocol() const;
};

// Parses JSON text; missing fields keep defaults, unknown keys and type
// mismatches throw config_error naming the offending path.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Canonical serialization (stable key order, 2-space indent). Writing this
// into the run directory makes every run reproducible from one artifact.
std::string run_config_json(const RunConfig& rc);

}  // namespace vsr
