// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Binary checkpoint: magic + version, model configuration, named parameter
// blobs, optional optimizer moments, epoch and data-sampling state. All
// scalars little-endian; names length-prefixed. Saving the result of a load
// reproduces the file byte for byte.

#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "vsr/model.hpp"
#include "vsr/optim.hpp"

namespace vsr {

struct TrainProgress {
  int64_t epoch = 0;
  uint64_t data_seed = 0;
  int64_t next_step = 0;  // batch-sampling position; step streams are keyed by it
};

void save_checkpoint(const std::string& path, const Model& model, const Adam* optim,
                     const TrainProgress& progress);

// Reads just the stored ModelConfig (for compatibility checks).
ModelConfig peek_checkpoint_config(const std::string& path);

struct Restored {
  std::unique_ptr<Model> model;
  std::unique_ptr<Adam> optim;  // null when the file has no optimizer state
  TrainProgress progress;
};

// Rebuilds the model (and optimizer when present and requested) from a file.
Restored load_checkpoint(const std::string& path, Dtype dtype, bool want_optim);

}  // namespace vsr
