// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vsr/checkpoint.hpp"
#include "vsr/dataset.hpp"
#include "vsr/losses.hpp"
#include "vsr/metrics.hpp"
#include "vsr/model.hpp"
#include "vsr/optim.hpp"

namespace vsr {

struct TrainConfig {
  int batch = 64, patch = 48;
  double lr = 1e-4;  // halved every 100 epochs
  int epochs = 100;
  int64_t steps = 0;  // > 0 caps the run in steps instead of epochs
  uint64_t seed = 0;
  bool augment = false;
  double clip_norm = 0;  // > 0: clip the global gradient norm before each update

  void validate() const;
};

struct LossReport {
  int64_t step = 0;  // 1-based, the step just taken
  double l_align = 0, l_sr = 0, total = 0, lr = 0;
};

struct ValidationResult {
  double mean_psnr = 0, mean_ssim = 0;
  int64_t sequences = 0;
};

class Trainer {
 public:
  // Fresh run. `data` must outlive the trainer.
  Trainer(const ModelConfig& mc, const TrainConfig& tc, std::shared_ptr<const ClipDataset> data,
          Dtype dtype = Dtype::F32);
  // Resume. The checkpoint's model config must equal `mc`; the data seed
  // stored in the checkpoint replaces tc.seed so the batch stream continues
  // exactly where it stopped.
  Trainer(const std::string& checkpoint, const ModelConfig& mc, const TrainConfig& tc,
          std::shared_ptr<const ClipDataset> data, Dtype dtype = Dtype::F32);

  LossReport step();

  ValidationResult validate(const ClipDataset& eval, const EvalProtocol& protocol) const;

  void save(const std::string& path) const;

  Model& model() { return *model_; }
  const Model& model() const { return *model_; }
  const TrainConfig& train_config() const { return tc_; }
  int64_t current_step() const { return step_; }
  int64_t steps_per_epoch() const;
  int64_t epoch() const { return step_ / steps_per_epoch(); }
  double current_lr() const { return lr_schedule(epoch(), tc_.lr); }
  // Total step budget implied by the config (steps, or epochs x steps/epoch).
  int64_t planned_steps() const;

 private:
  TrainConfig tc_;
  std::shared_ptr<const ClipDataset> data_;
  std::unique_ptr<Model> model_;
  std::unique_ptr<Adam> optim_;
  int64_t step_ = 0;
};

// Super-resolves every frame of an LR sequence (boundary frames via clip
// replication). When `aligned_out` is non-null (tdan variant), receives the
// 2N aligned supporting frames of each position.
std::vector<Tensor> infer_sequence(const Model& model, const std::vector<Tensor>& lr_frames,
                                   std::vector<std::vector<Tensor>>* aligned_out = nullptr);

}  // namespace vsr
