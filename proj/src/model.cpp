// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/model.hpp"

#include "vsr/deform_conv.hpp"
#include "vsr/error.hpp"
#include "vsr/ops.hpp"

namespace vsr {

void ModelConfig::validate() const {
  if (variant != "tdan" && variant != "mfsr" && variant != "sisr")
    throw config_error("unknown variant '" + variant + "' (expected tdan, mfsr or sisr)");
  if (d < 2 || d > 5) throw config_error("d must be in [2,5], got " + std::to_string(d));
  if (scale != 2 && scale != 4)
    throw config_error("scale must be 2 or 4, got " + std::to_string(scale));
  if (k1 < 1) throw config_error("k1 must be >= 1, got " + std::to_string(k1));
  if (k2 < 0) throw config_error("k2 must be >= 0, got " + std::to_string(k2));
  if (channels < 8) throw config_error("channels must be >= 8, got " + std::to_string(channels));
  if (radius < 1) throw config_error("radius must be >= 1, got " + std::to_string(radius));
}

Model::Model(const ModelConfig& cfg, uint64_t seed, Dtype dtype) : cfg_(cfg), dtype_(dtype) {
  cfg_.validate();
  const int64_t C = cfg_.channels;
  auto conv = [&](const std::string& name, int64_t cin, int64_t cout, Init winit) {
    return Conv2d(params_, name, cin, cout, 3, winit, seed, dtype_);
  };

  if (cfg_.aligns()) {
    feat0_ = conv("align.feat.conv0", 3, C, Init::FanInUniform);
    for (int i = 0; i < cfg_.k1; ++i)
      feat_res_.emplace_back(params_, "align.feat.res" + std::to_string(i), C, seed, dtype_);
    bottleneck_ = conv("align.bottleneck", 2 * C, C, Init::FanInUniform);
    for (int j = 0; j < cfg_.d; ++j) {
      // Offset branches start at zero so the fresh cascade reduces to plain convs.
      offset_convs_.push_back(conv("align.deform" + std::to_string(j) + ".offset", C, 18, Init::Zero));
      deform_convs_.push_back(
          conv("align.deform" + std::to_string(j), C, C, Init::FanInUniform));
    }
    align_out_ = conv("align.recon", C, 3, Init::FanInUniform);
  }

  const int64_t fuse_in = 3 * cfg_.frames();
  fuse_ = conv("sr.fuse", fuse_in, C, Init::FanInUniform);
  for (int i = 0; i < cfg_.k2; ++i)
    sr_res_.emplace_back(params_, "sr.res" + std::to_string(i), C, seed, dtype_);
  const int stages = cfg_.scale == 4 ? 2 : 1;
  for (int u = 0; u < stages; ++u)
    up_.push_back(conv("sr.up" + std::to_string(u), C, 4 * C, Init::FanInUniform));
  sr_out_ = conv("sr.out", C, 3, Init::FanInUniform);
}

Tensor Model::extract_features(const Tensor& frame) const {
  if (!cfg_.aligns()) throw invalid_error("variant '" + cfg_.variant + "' has no alignment stage");
  if (frame.shape().c != 3)
    throw invalid_error("extract_features expects 3-channel frames, got " + frame.shape().str());
  Tensor x = relu(feat0_(frame));
  for (const auto& blk : feat_res_) x = blk(x);
  return x;
}

Tensor Model::predict_offsets(const Tensor& f_sup, const Tensor& f_ref) const {
  check_same_shape(f_sup, f_ref, "predict_offsets");
  return relu(bottleneck_(concat_channels({f_sup, f_ref})));
}

Tensor Model::align_features(const Tensor& f_sup, const Tensor& fused) const {
  Tensor x = f_sup;
  for (size_t j = 0; j < deform_convs_.size(); ++j) {
    Tensor offsets = offset_convs_[j](fused);
    x = deformable_conv2d(x, offsets, deform_convs_[j].w, &deform_convs_[j].b);
    if (j + 1 < deform_convs_.size()) x = relu(x);
  }
  return x;
}

Tensor Model::reconstruct_aligned_frame(const Tensor& f_aligned) const {
  return align_out_(f_aligned);
}

Tensor Model::tdan_forward(const Tensor& ref, const Tensor& sup) const {
  check_same_shape(ref, sup, "tdan_forward");
  Tensor f_ref = extract_features(ref);
  Tensor f_sup = extract_features(sup);
  return reconstruct_aligned_frame(align_features(f_sup, predict_offsets(f_sup, f_ref)));
}

Tensor Model::fuse_temporal(const std::vector<Tensor>& frames) const {
  if (static_cast<int>(frames.size()) != cfg_.frames())
    throw invalid_error("fuse_temporal expects " + std::to_string(cfg_.frames()) +
                        " frames, got " + std::to_string(frames.size()));
  Tensor x = frames.size() == 1 ? frames[0] : concat_channels(frames);
  return relu(fuse_(x));
}

Tensor Model::nonlinear_map(Tensor x) const {
  for (const auto& blk : sr_res_) x = blk(x);
  return x;
}

Tensor Model::upscale_reconstruct(Tensor x) const {
  for (const auto& up : up_) x = relu(pixel_shuffle(up(x), 2));
  return sr_out_(x);
}

Tensor Model::sr_forward(const std::vector<Tensor>& frames) const {
  return upscale_reconstruct(nonlinear_map(fuse_temporal(frames)));
}

Model::Forward Model::forward(const std::vector<Tensor>& clip) const {
  const int n = cfg_.radius;
  Forward out;
  if (cfg_.variant == "sisr") {
    const Tensor& ref = clip.size() == 1 ? clip[0] : clip.at(n);
    out.hr = sr_forward({ref});
    return out;
  }
  if (static_cast<int>(clip.size()) != 2 * n + 1)
    throw invalid_error("forward expects a clip of " + std::to_string(2 * n + 1) +
                        " frames, got " + std::to_string(clip.size()));
  if (cfg_.variant == "mfsr") {
    out.hr = sr_forward(clip);
    return out;
  }
  const Tensor& ref = clip[n];
  Tensor f_ref = extract_features(ref);
  std::vector<Tensor> frames;
  frames.reserve(clip.size());
  for (int i = 0; i < static_cast<int>(clip.size()); ++i) {
    if (i == n) {
      frames.push_back(ref);
      continue;
    }
    Tensor f_sup = extract_features(clip[i]);
    Tensor aligned =
        reconstruct_aligned_frame(align_features(f_sup, predict_offsets(f_sup, f_ref)));
    out.aligned.push_back(aligned);
    frames.push_back(aligned);
  }
  out.hr = sr_forward(frames);
  return out;
}

}  // namespace vsr
