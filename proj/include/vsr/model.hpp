// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Video super-resolution model: a deformable alignment network warps each
// supporting low-res frame onto the reference, then a reconstruction network
// fuses the 2N+1 frames and upscales the reference by s. Ablation variants
// drop the alignment stage (mfsr: raw frames fused; sisr: reference only).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vsr/nn.hpp"
#include "vsr/params.hpp"
#include "vsr/tensor.hpp"

namespace vsr {

struct ModelConfig {
  std::string variant = "tdan";  // tdan | mfsr | sisr
  int k1 = 5;                    // residual blocks in the feature extractor
  int k2 = 14;                   // residual blocks in the reconstruction trunk
  int channels = 64;
  int d = 4;       // deformable layers in the alignment cascade
  int radius = 2;  // temporal radius N; a clip holds 2N+1 frames
  int scale = 4;   // upscale factor s

  void validate() const;
  // Frames consumed per clip by the forward pass.
  int frames() const { return variant == "sisr" ? 1 : 2 * radius + 1; }
  bool aligns() const { return variant == "tdan"; }
  bool operator==(const ModelConfig&) const = default;
};

class Model {
 public:
  Model(const ModelConfig& cfg, uint64_t seed, Dtype dtype = Dtype::F32);

  // --- alignment stage (variant tdan) ---
  Tensor extract_features(const Tensor& frame) const;
  // Fused feature conditioning the offset predictions: concat(sup, ref) -> bottleneck -> ReLU.
  Tensor predict_offsets(const Tensor& f_sup, const Tensor& f_ref) const;
  // Cascade of d deformable layers over the supporting stream, each with its
  // own offset conv reading `fused`; ReLU between layers, none after the last.
  Tensor align_features(const Tensor& f_sup, const Tensor& fused) const;
  Tensor reconstruct_aligned_frame(const Tensor& f_aligned) const;
  // Full alignment of one supporting frame onto the reference.
  Tensor tdan_forward(const Tensor& ref, const Tensor& sup) const;

  // --- reconstruction stage ---
  Tensor fuse_temporal(const std::vector<Tensor>& frames) const;
  Tensor nonlinear_map(Tensor x) const;
  Tensor upscale_reconstruct(Tensor x) const;
  Tensor sr_forward(const std::vector<Tensor>& frames) const;

  struct Forward {
    std::vector<Tensor> aligned;  // 2N aligned supporting frames (tdan variant only)
    Tensor hr;
  };
  // clip: 2N+1 frames oldest-first (sisr also accepts the full clip and uses
  // only the center frame).
  Forward forward(const std::vector<Tensor>& clip) const;

  const ModelConfig& config() const { return cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }
  int64_t param_count() const { return params_.param_count(); }
  Dtype dtype() const { return dtype_; }

 private:
  ModelConfig cfg_;
  Dtype dtype_;
  ParamStore params_;

  // alignment
  Conv2d feat0_;
  std::vector<ResidualBlock> feat_res_;
  Conv2d bottleneck_;
  std::vector<Conv2d> offset_convs_, deform_convs_;
  Conv2d align_out_;
  // reconstruction
  Conv2d fuse_;
  std::vector<ResidualBlock> sr_res_;
  std::vector<Conv2d> up_;
  Conv2d sr_out_;
};

}  // namespace vsr
