// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vsr/degrade.hpp"
#include "vsr/tensor.hpp"

namespace vsr {

// Frame indices of the clip centered at t, clamped by edge replication.
std::vector<int64_t> clip_indices(int64_t len, int64_t center, int radius);

struct SequenceData {
  std::string name;
  std::vector<Tensor> hr;  // (1,3,sH,sW)
  std::vector<Tensor> lr;  // (1,3,H,W), degraded from hr
};

// HR sequences loaded from root/<name>/*.png and degraded in memory.
class ClipDataset {
 public:
  ClipDataset(const std::string& root, const DegradationSpec& degradation, Dtype dtype);

  int64_t num_sequences() const { return static_cast<int64_t>(seqs_.size()); }
  const SequenceData& seq(int64_t i) const { return seqs_.at(static_cast<size_t>(i)); }
  int scale() const { return degradation_.s; }
  const DegradationSpec& degradation() const { return degradation_; }
  int64_t min_lr_height() const { return min_h_; }
  int64_t min_lr_width() const { return min_w_; }
  int64_t min_frames() const { return min_frames_; }
  int64_t total_frames() const { return total_frames_; }

 private:
  std::vector<SequenceData> seqs_;
  DegradationSpec degradation_;
  int64_t min_h_ = 0, min_w_ = 0, min_frames_ = 0, total_frames_ = 0;
};

// One training batch: lr[f] stacks the f-th clip frame across batch slots;
// hr is the co-located ground-truth crop of each clip's center frame.
struct PatchBatch {
  std::vector<Tensor> lr;  // 2N+1 tensors (B,3,p,p)
  Tensor hr;               // (B,3,s*p,s*p)
};

// Draws `batch` clips: per slot an independent rng stream derived from
// (seed, step, slot) picks sequence, center frame and a shared crop for all
// 2N+1 frames (HR crop at s x the LR origin). Augmentation (when enabled)
// adds horizontal flip and temporal reversal, each with probability 1/2.
PatchBatch sample_patch_batch(const ClipDataset& ds, int batch, int patch, int radius,
                              uint64_t seed, int64_t step, bool augment, Dtype dtype);

}  // namespace vsr
