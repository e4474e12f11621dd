// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "vsr/error.hpp"

namespace vsr {

namespace {

constexpr char kMagic[8] = {'V', 'S', 'R', 'C', 'K', 'P', 'T', '\0'};
constexpr uint32_t kVersion = 1;

struct Writer {
  std::string buf;

  void bytes(const void* p, size_t n) { buf.append(static_cast<const char*>(p), n); }
  void u8(uint8_t v) { bytes(&v, 1); }
  void u32(uint32_t v) { bytes(&v, 4); }
  void i32(int32_t v) { bytes(&v, 4); }
  void i64(int64_t v) { bytes(&v, 8); }
  void u64(uint64_t v) { bytes(&v, 8); }
  void f64(double v) { bytes(&v, 8); }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
};

struct Reader {
  std::string buf;
  size_t pos = 0;
  std::string path;

  void need(size_t n) const {
    if (pos + n > buf.size())
      throw data_error("checkpoint truncated or corrupt: " + path + " (need " +
                       std::to_string(n) + " bytes at offset " + std::to_string(pos) + ")");
  }
  void bytes(void* p, size_t n) {
    need(n);
    std::memcpy(p, buf.data() + pos, n);
    pos += n;
  }
  uint8_t u8() {
    uint8_t v;
    bytes(&v, 1);
    return v;
  }
  uint32_t u32() {
    uint32_t v;
    bytes(&v, 4);
    return v;
  }
  int32_t i32() {
    int32_t v;
    bytes(&v, 4);
    return v;
  }
  int64_t i64() {
    int64_t v;
    bytes(&v, 8);
    return v;
  }
  uint64_t u64() {
    uint64_t v;
    bytes(&v, 8);
    return v;
  }
  double f64() {
    double v;
    bytes(&v, 8);
    return v;
  }
  std::string str() {
    uint32_t n = u32();
    need(n);
    std::string s(buf.data() + pos, n);
    pos += n;
    return s;
  }
};

void write_config(Writer& w, const ModelConfig& c) {
  w.str(c.variant);
  w.i32(c.k1);
  w.i32(c.k2);
  w.i32(c.channels);
  w.i32(c.d);
  w.i32(c.radius);
  w.i32(c.scale);
}

ModelConfig read_config(Reader& r) {
  ModelConfig c;
  c.variant = r.str();
  c.k1 = r.i32();
  c.k2 = r.i32();
  c.channels = r.i32();
  c.d = r.i32();
  c.radius = r.i32();
  c.scale = r.i32();
  return c;
}

Reader open_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw data_error("cannot open checkpoint " + path);
  Reader r;
  r.path = path;
  r.buf.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  char magic[8];
  r.bytes(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw data_error("not a checkpoint file (bad magic): " + path);
  const uint32_t ver = r.u32();
  if (ver != kVersion)
    throw data_error("unsupported checkpoint version " + std::to_string(ver) + " in " + path);
  return r;
}

}  // namespace

void save_checkpoint(const std::string& path, const Model& model, const Adam* optim,
                     const TrainProgress& progress) {
  Writer w;
  w.bytes(kMagic, 8);
  w.u32(kVersion);
  write_config(w, model.config());

  const auto& entries = model.params().entries();
  w.u32(static_cast<uint32_t>(entries.size()));
  for (const auto& [name, t] : entries) {
    w.str(name);
    w.u8(static_cast<uint8_t>(t.dtype()));
    const Shape s = t.shape();
    w.i64(s.n);
    w.i64(s.c);
    w.i64(s.h);
    w.i64(s.w);
    w.bytes(t.impl()->data.data(), t.impl()->data.size());
  }

  w.u8(optim ? 1 : 0);
  if (optim) {
    w.i64(optim->step_count());
    for (size_t i = 0; i < entries.size(); ++i) {
      for (double v : optim->m()[i]) w.f64(v);
      for (double v : optim->v()[i]) w.f64(v);
    }
  }
  w.i64(progress.epoch);
  w.u64(progress.data_seed);
  w.i64(progress.next_step);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw data_error("cannot write checkpoint " + path);
  f.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
  if (!f) throw data_error("short write to checkpoint " + path);
}

ModelConfig peek_checkpoint_config(const std::string& path) {
  Reader r = open_checkpoint(path);
  return read_config(r);
}

Restored load_checkpoint(const std::string& path, Dtype dtype, bool want_optim) {
  Reader r = open_checkpoint(path);
  const ModelConfig cfg = read_config(r);
  Restored out;
  out.model = std::make_unique<Model>(cfg, /*seed=*/0, dtype);

  const uint32_t count = r.u32();
  const auto& entries = out.model->params().entries();
  if (count != entries.size())
    throw data_error("checkpoint " + path + " stores " + std::to_string(count) +
                     " parameters, model has " + std::to_string(entries.size()));
  for (uint32_t i = 0; i < count; ++i) {
    const std::string name = r.str();
    const auto stored_dtype = static_cast<Dtype>(r.u8());
    Shape s{r.i64(), r.i64(), r.i64(), r.i64()};
    Tensor& t = out.model->params().get(name);  // throws on unknown name
    if (!(t.shape() == s))
      throw data_error("checkpoint parameter '" + name + "' has shape " + s.str() +
                       ", model expects " + t.shape().str());
    Tensor raw(s, stored_dtype);
    r.bytes(raw.impl()->data.data(), raw.impl()->data.size());
    if (stored_dtype == dtype) {
      std::memcpy(t.impl()->data.data(), raw.impl()->data.data(), raw.impl()->data.size());
    } else {
      for (int64_t j = 0; j < t.numel(); ++j) t.set_value_at(j, raw.value_at(j));
    }
  }

  const bool has_optim = r.u8() != 0;
  if (has_optim) {
    const int64_t steps = r.i64();
    auto optim = std::make_unique<Adam>(out.model->params());
    optim->set_step_count(steps);
    for (size_t i = 0; i < entries.size(); ++i) {
      for (double& v : optim->m()[i]) v = r.f64();
      for (double& v : optim->v()[i]) v = r.f64();
    }
    if (want_optim) out.optim = std::move(optim);
  }
  out.progress.epoch = r.i64();
  out.progress.data_seed = r.u64();
  out.progress.next_step = r.i64();
  if (r.pos != r.buf.size())
    throw data_error("checkpoint " + path + " has " + std::to_string(r.buf.size() - r.pos) +
                     " trailing bytes");
  return out;
}

}  // namespace vsr
