// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/dataset.hpp"

#include <algorithm>
#include <filesystem>

#include "vsr/error.hpp"
#include "vsr/image_io.hpp"
#include "vsr/rng.hpp"

namespace vsr {

std::vector<int64_t> clip_indices(int64_t len, int64_t center, int radius) {
  if (len < 1) throw invalid_error("clip_indices: empty sequence");
  if (center < 0 || center >= len)
    throw invalid_error("clip_indices: center " + std::to_string(center) + " outside [0," +
                        std::to_string(len) + ")");
  std::vector<int64_t> idx;
  for (int64_t i = center - radius; i <= center + radius; ++i)
    idx.push_back(std::clamp<int64_t>(i, 0, len - 1));
  return idx;
}

ClipDataset::ClipDataset(const std::string& root, const DegradationSpec& degradation, Dtype dtype)
    : degradation_(degradation) {
  for (const auto& dir : list_sequence_dirs(root)) {
    SequenceData sd;
    sd.name = std::filesystem::path(dir).filename().string();
    sd.hr = load_frames(dir, dtype);
    for (const auto& f : sd.hr) sd.lr.push_back(degrade(f, degradation_));
    const Shape ls = sd.lr.front().shape();
    min_h_ = min_h_ == 0 ? ls.h : std::min(min_h_, ls.h);
    min_w_ = min_w_ == 0 ? ls.w : std::min(min_w_, ls.w);
    const auto n = static_cast<int64_t>(sd.lr.size());
    min_frames_ = min_frames_ == 0 ? n : std::min(min_frames_, n);
    total_frames_ += n;
    seqs_.push_back(std::move(sd));
  }
}

namespace {

// Copies a patch from src (1,3,H,W) into slot b of dst (B,3,p,p)-shaped
// tensors, optionally mirrored horizontally.
template <typename T>
void copy_patch(const Tensor& src, int64_t y0, int64_t x0, int64_t p, bool flip, Tensor& dst,
                int64_t b) {
  const Shape ss = src.shape(), ds = dst.shape();
  const T* sp = src.data<T>();
  T* dp = dst.data<T>() + b * ds.c * ds.h * ds.w;
  for (int64_t c = 0; c < 3; ++c)
    for (int64_t y = 0; y < p; ++y)
      for (int64_t x = 0; x < p; ++x) {
        const int64_t sx = flip ? x0 + p - 1 - x : x0 + x;
        dp[(c * p + y) * p + x] = sp[(c * ss.h + y0 + y) * ss.w + sx];
      }
}

}  // namespace

PatchBatch sample_patch_batch(const ClipDataset& ds, int batch, int patch, int radius,
                              uint64_t seed, int64_t step, bool augment, Dtype dtype) {
  if (ds.num_sequences() == 0) throw data_error("sample_patch_batch: empty dataset");
  if (batch < 1 || patch < 1) throw invalid_error("sample_patch_batch: bad batch/patch size");
  if (ds.min_lr_height() < patch || ds.min_lr_width() < patch)
    throw data_error("sample_patch_batch: LR frames " + std::to_string(ds.min_lr_height()) + "x" +
                     std::to_string(ds.min_lr_width()) + " smaller than patch " +
                     std::to_string(patch));
  const int frames = 2 * radius + 1;
  const int s = ds.scale();
  PatchBatch out;
  for (int f = 0; f < frames; ++f) out.lr.emplace_back(Shape{batch, 3, patch, patch}, dtype);
  out.hr = Tensor({batch, 3, static_cast<int64_t>(s) * patch, static_cast<int64_t>(s) * patch},
                  dtype);

  for (int64_t b = 0; b < batch; ++b) {
    rng::Stream rs(rng::derive(seed, static_cast<uint64_t>(step), static_cast<uint64_t>(b), 0x9a7c));
    const auto& sq = ds.seq(static_cast<int64_t>(rs.next_below(static_cast<uint64_t>(ds.num_sequences()))));
    const int64_t len = static_cast<int64_t>(sq.lr.size());
    const int64_t center = static_cast<int64_t>(rs.next_below(static_cast<uint64_t>(len)));
    const Shape ls = sq.lr.front().shape();
    const int64_t y0 = static_cast<int64_t>(rs.next_below(static_cast<uint64_t>(ls.h - patch + 1)));
    const int64_t x0 = static_cast<int64_t>(rs.next_below(static_cast<uint64_t>(ls.w - patch + 1)));
    const bool flip = augment && rs.next_uniform() < 0.5;
    const bool reverse = augment && rs.next_uniform() < 0.5;
    auto idx = clip_indices(len, center, radius);
    if (reverse) std::reverse(idx.begin(), idx.end());
    dispatch_dtype(dtype, [&](auto tag) {
      using T = decltype(tag);
      for (int f = 0; f < frames; ++f)
        copy_patch<T>(sq.lr[static_cast<size_t>(idx[static_cast<size_t>(f)])], y0, x0, patch, flip,
                      out.lr[static_cast<size_t>(f)], b);
      copy_patch<T>(sq.hr[static_cast<size_t>(center)], y0 * s, x0 * s,
                    static_cast<int64_t>(s) * patch, flip, out.hr, b);
    });
  }
  return out;
}

}  // namespace vsr
