// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vsr/tensor.hpp"

namespace vsr {

// Deterministic HR test sequences with known ground-truth motion.
struct SynthSpec {
  std::string kind = "translate";  // translate | rotate-texture | checker-zoom
  int frames = 9;
  int64_t h = 128, w = 128;
  double vx = 4, vy = 0;    // translate: HR pixels per frame
  double rot_deg = 0.8;     // rotate-texture: degrees per frame
  double zoom = 0.004;      // checker-zoom: relative dilation per frame
  uint64_t seed = 0;

  void validate() const;
};

std::vector<Tensor> synth_video(const SynthSpec& spec, Dtype dtype = Dtype::F32);

// Writes `count` sequences under root/<kind>_<idx>/frame_%05d.png, varying
// motion parameters per sequence from the seed. kind "mixed" cycles through
// all three generators.
void synth_dataset(const std::string& root, const std::string& kind, int count, int frames,
                   int64_t h, int64_t w, uint64_t seed);

}  // namespace vsr
