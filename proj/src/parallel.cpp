// Copyright 2026 The vsr Authors
// SPDX-License-Identifier: Apache-2.0

#include "vsr/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "vsr/error.hpp"

namespace vsr {

namespace {
std::atomic<int> g_num_threads{0};  // 0 = not yet initialized

int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}
}  // namespace

void set_num_threads(int n) {
  if (n < 0) throw invalid_error("set_num_threads: thread count must be >= 0");
  g_num_threads.store(n == 0 ? default_threads() : n);
}

int num_threads() {
  int n = g_num_threads.load();
  if (n == 0) {
    n = default_threads();
    g_num_threads.store(n);
  }
  return n;
}

void parallel_for(int64_t count, const std::function<void(int64_t, int64_t, int)>& fn) {
  if (count <= 0) return;
  int nt = std::min<int64_t>(num_threads(), count);
  if (nt <= 1) {
    fn(0, count, 0);
    return;
  }
  // Contiguous static partition; chunk c covers [c*per + min(c,rem), ...).
  int64_t per = count / nt;
  int64_t rem = count % nt;
  std::vector<std::thread> workers;
  workers.reserve(nt - 1);
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto run_chunk = [&](int c) {
    int64_t begin = c * per + std::min<int64_t>(c, rem);
    int64_t end = begin + per + (c < rem ? 1 : 0);
    try {
      fn(begin, end, c);
    } catch (...) {
      if (!failed.exchange(true)) first_error = std::current_exception();
    }
  };
  for (int c = 1; c < nt; ++c) workers.emplace_back(run_chunk, c);
  run_chunk(0);
  for (auto& w : workers) w.join();
  if (failed.load()) std::rethrow_exception(first_error);
}

}  // namespace vsr
