// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VSR_PARALLEL_HPP
#define VSR_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace vsr {

// Global worker cap. 1 (the default fallback when hardware_concurrency is
// unknown) gives fully serial, bit-reproducible execution.
void set_num_threads(int n);
int num_threads();

// Splits [0, count) into num_threads() contiguous chunks and runs
// fn(begin, end, chunk_index) on each. Chunk boundaries depend only on
// count and the thread cap, so per-chunk partial results can be merged
// in chunk order for reproducible reductions. Serial when the cap is 1.
void parallel_for(int64_t count, const std::function<void(int64_t, int64_t, int)>& fn);

}  // namespace vsr

#endif  // VSR_PARALLEL_HPP
