// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "vsr/tensor.hpp"

namespace vsr {

// Loads an 8-bit PNG as (1,3,H,W) in [0,1] (exactly value/255). Grayscale and
// paletted files are expanded to RGB; an alpha channel is dropped.
Tensor load_png(const std::string& path, Dtype dtype = Dtype::F32);

// Saves (1,3,H,W): clamps to [0,1], scales by 255 and rounds half up.
void save_png(const Tensor& frame, const std::string& path);

// Lexicographically sorted *.png paths; errors when none are found.
std::vector<std::string> list_pngs(const std::string& dir);

// All frames of a sequence directory; dimensions must agree across frames.
std::vector<Tensor> load_frames(const std::string& dir, Dtype dtype = Dtype::F32);

// Writes frames as <dir>/<prefix>00000.png, creating the directory.
void save_frames(const std::vector<Tensor>& frames, const std::string& dir,
                 const std::string& prefix = "frame_");

// Subdirectories of a dataset root, sorted; errors when none exist.
std::vector<std::string> list_sequence_dirs(const std::string& root);

}  // namespace vsr
