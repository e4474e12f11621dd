// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/trainer.hpp"

#include <cmath>

#include "vsr/error.hpp"
#include "vsr/ops.hpp"

namespace vsr {

void TrainConfig::validate() const {
  if (batch < 1) throw config_error("batch must be >= 1");
  if (patch < 1) throw config_error("patch must be >= 1");
  if (lr <= 0) throw config_error("lr must be positive");
  if (epochs < 1 && steps < 1) throw config_error("need epochs >= 1 or steps >= 1");
  if (clip_norm < 0) throw config_error("clip_norm must be >= 0 (0 disables clipping)");
}

Trainer::Trainer(const ModelConfig& mc, const TrainConfig& tc,
                 std::shared_ptr<const ClipDataset> data, Dtype dtype)
    : tc_(tc), data_(std::move(data)) {
  tc_.validate();
  model_ = std::make_unique<Model>(mc, tc_.seed, dtype);
  optim_ = std::make_unique<Adam>(model_->params());
}

Trainer::Trainer(const std::string& checkpoint, const ModelConfig& mc, const TrainConfig& tc,
                 std::shared_ptr<const ClipDataset> data, Dtype dtype)
    : tc_(tc), data_(std::move(data)) {
  tc_.validate();
  Restored r = load_checkpoint(checkpoint, dtype, /*want_optim=*/true);
  if (!(r.model->config() == mc))
    throw config_error("checkpoint " + checkpoint + " was trained with a different model config (" +
                       r.model->config().variant + " k1=" + std::to_string(r.model->config().k1) +
                       " k2=" + std::to_string(r.model->config().k2) +
                       " channels=" + std::to_string(r.model->config().channels) +
                       " d=" + std::to_string(r.model->config().d) +
                       " radius=" + std::to_string(r.model->config().radius) +
                       " scale=" + std::to_string(r.model->config().scale) + ")");
  model_ = std::move(r.model);
  optim_ = r.optim ? std::move(r.optim) : std::make_unique<Adam>(model_->params());
  step_ = r.progress.next_step;
  tc_.seed = r.progress.data_seed;
}

int64_t Trainer::steps_per_epoch() const {
  const int64_t frames = data_ ? data_->total_frames() : 0;
  if (frames < 1) return 1;
  return (frames + tc_.batch - 1) / tc_.batch;
}

int64_t Trainer::planned_steps() const {
  return tc_.steps > 0 ? tc_.steps : static_cast<int64_t>(tc_.epochs) * steps_per_epoch();
}

LossReport Trainer::step() {
  if (!data_) throw invalid_error("trainer has no dataset");
  const ModelConfig& mc = model_->config();
  const double lr = current_lr();
  PatchBatch batch = sample_patch_batch(*data_, tc_.batch, tc_.patch, mc.radius, tc_.seed, step_,
                                        tc_.augment, model_->dtype());
  model_->params().zero_grads();
  Model::Forward fw = model_->forward(batch.lr);
  Tensor l_sr_t = sr_loss(fw.hr, batch.hr);
  Tensor total_t = l_sr_t;
  double l_align_v = 0;
  if (mc.aligns()) {
    Tensor l_align_t = align_loss(fw.aligned, batch.lr[static_cast<size_t>(mc.radius)]);
    l_align_v = l_align_t.item();
    total_t = add(l_align_t, l_sr_t);
  }
  LossReport rep;
  rep.l_sr = l_sr_t.item();
  rep.l_align = l_align_v;
  rep.total = total_t.item();
  rep.lr = lr;
  if (!std::isfinite(rep.total))
    throw numeric_error("non-finite loss at step " + std::to_string(step_ + 1));
  total_t.backward();
  if (tc_.clip_norm > 0) clip_grad_norm(model_->params(), tc_.clip_norm);
  optim_->step(lr);
  ++step_;
  rep.step = step_;
  return rep;
}

ValidationResult Trainer::validate(const ClipDataset& eval, const EvalProtocol& protocol) const {
  NoGradGuard ng;
  ValidationResult res;
  for (int64_t i = 0; i < eval.num_sequences(); ++i) {
    const SequenceData& sq = eval.seq(i);
    std::vector<Tensor> preds = infer_sequence(*model_, sq.lr);
    SequenceReport rep = evaluate_sequence(preds, sq.hr, protocol);
    res.mean_psnr += rep.mean_psnr;
    res.mean_ssim += rep.mean_ssim;
    ++res.sequences;
  }
  if (res.sequences > 0) {
    res.mean_psnr /= static_cast<double>(res.sequences);
    res.mean_ssim /= static_cast<double>(res.sequences);
  }
  return res;
}

void Trainer::save(const std::string& path) const {
  TrainProgress p;
  p.epoch = epoch();
  p.data_seed = tc_.seed;
  p.next_step = step_;
  save_checkpoint(path, *model_, optim_.get(), p);
}

std::vector<Tensor> infer_sequence(const Model& model, const std::vector<Tensor>& lr_frames,
                                   std::vector<std::vector<Tensor>>* aligned_out) {
  if (lr_frames.empty()) throw data_error("infer_sequence: no frames");
  NoGradGuard ng;
  const int radius = model.config().radius;
  const auto len = static_cast<int64_t>(lr_frames.size());
  std::vector<Tensor> out;
  if (aligned_out) aligned_out->clear();
  for (int64_t t = 0; t < len; ++t) {
    std::vector<Tensor> clip;
    for (int64_t idx : clip_indices(len, t, radius)) clip.push_back(lr_frames[static_cast<size_t>(idx)]);
    Model::Forward fw = model.forward(clip);
    out.push_back(fw.hr);
    if (aligned_out) aligned_out->push_back(std::move(fw.aligned));
  }
  return out;
}

}  // namespace vsr
