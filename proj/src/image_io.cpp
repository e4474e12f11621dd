// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "vsr/error.hpp"

namespace fs = std::filesystem;

namespace vsr {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Tensor load_png(const std::string& path, Dtype dtype) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw data_error("cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw data_error("libpng init failed for " + path);
  }
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 w = 0, h = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw data_error("failed to decode " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  w = png_get_image_width(png, info);
  h = png_get_image_height(png, info);
  // Normalize every input flavor to 8-bit RGB.
  png_set_expand(png);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
      png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != static_cast<size_t>(w) * 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw data_error("unsupported PNG layout in " + path);
  }
  pixels.resize(static_cast<size_t>(w) * h * 3);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = pixels.data() + static_cast<size_t>(y) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Tensor t({1, 3, h, w}, dtype);
  dispatch_dtype(dtype, [&](auto tag) {
    using T = decltype(tag);
    T* d = t.data<T>();
    const int64_t hw = static_cast<int64_t>(h) * w;
    for (int64_t i = 0; i < hw; ++i)
      for (int c = 0; c < 3; ++c)
        d[c * hw + i] = static_cast<T>(pixels[static_cast<size_t>(i * 3 + c)] / 255.0);
  });
  return t;
}

void save_png(const Tensor& frame, const std::string& path) {
  const Shape s = frame.shape();
  if (s.n != 1 || s.c != 3)
    throw invalid_error("save_png expects (1,3,H,W), got " + s.str());
  std::vector<png_byte> pixels(static_cast<size_t>(s.h) * s.w * 3);
  dispatch_dtype(frame.dtype(), [&](auto tag) {
    using T = decltype(tag);
    const T* d = frame.data<T>();
    const int64_t hw = s.h * s.w;
    for (int64_t i = 0; i < hw; ++i)
      for (int c = 0; c < 3; ++c) {
        double v = static_cast<double>(d[c * hw + i]);
        v = std::clamp(v, 0.0, 1.0);
        pixels[static_cast<size_t>(i * 3 + c)] =
            static_cast<png_byte>(std::floor(v * 255.0 + 0.5));
      }
  });
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw data_error("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw data_error("libpng init failed for " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw data_error("failed to encode " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(s.w), static_cast<png_uint_32>(s.h), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(static_cast<size_t>(s.h));
  for (int64_t y = 0; y < s.h; ++y)
    rows[static_cast<size_t>(y)] = pixels.data() + static_cast<size_t>(y) * s.w * 3;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

std::vector<std::string> list_pngs(const std::string& dir) {
  if (!fs::is_directory(dir)) throw data_error("not a directory: " + dir);
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") out.push_back(e.path().string());
  if (out.empty()) throw data_error("no .png frames in " + dir);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Tensor> load_frames(const std::string& dir, Dtype dtype) {
  std::vector<Tensor> frames;
  for (const auto& p : list_pngs(dir)) {
    frames.push_back(load_png(p, dtype));
    if (frames.size() > 1 && !(frames.back().shape() == frames.front().shape()))
      throw data_error("frame dimensions differ within " + dir + ": " +
                       frames.front().shape().str() + " vs " + frames.back().shape().str() +
                       " at " + p);
  }
  return frames;
}

void save_frames(const std::vector<Tensor>& frames, const std::string& dir,
                 const std::string& prefix) {
  fs::create_directories(dir);
  char name[64];
  for (size_t i = 0; i < frames.size(); ++i) {
    std::snprintf(name, sizeof name, "%s%05zu.png", prefix.c_str(), i);
    save_png(frames[i], (fs::path(dir) / name).string());
  }
}

std::vector<std::string> list_sequence_dirs(const std::string& root) {
  if (!fs::is_directory(root)) throw data_error("not a directory: " + root);
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) out.push_back(e.path().string());
  if (out.empty()) throw data_error("no sequence directories in " + root);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vsr
