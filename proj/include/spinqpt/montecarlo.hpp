// Copyright 2026 The spinqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace spinqpt {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; mixes a master seed with stream/chunk indices so
/// every chunk of work owns an independent, reproducible generator.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t chunk = 0) {
  return mix_seed(mix_seed(mix_seed(master) ^ stream) ^ chunk);
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct McOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  /// 0 = hardware concurrency.
  unsigned jobs = 0;
};

inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

inline constexpr std::size_t kMcChunk = 4096;

/// Runs `task(index)` for index in [0, count) on up to `jobs` threads.
/// Each index is executed exactly once; callers write results by index.
template <typename Task>
void parallel_for(std::size_t count, unsigned jobs, Task&& task) {
  const std::size_t workers = std::min<std::size_t>(resolve_jobs(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Mean and standard error of `sample(rng)` over `opts.samples` draws.
/// Work is split into fixed chunks seeded from (seed, stream, chunk) and
/// reduced in chunk order, so the result does not depend on `opts.jobs`.
template <typename Sampler>
McEstimate estimate_mean(const McOptions& opts, std::uint64_t stream,
                         Sampler&& sample) {
  const std::size_t n = opts.samples;
  const std::size_t chunks = (n + kMcChunk - 1) / kMcChunk;
  std::vector<double> sums(chunks, 0.0), sq(chunks, 0.0);
  parallel_for(chunks, opts.jobs, [&](std::size_t c) {
    Rng rng(derive_seed(opts.seed, stream, c));
    const std::size_t begin = c * kMcChunk;
    const std::size_t end = std::min(n, begin + kMcChunk);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = sample(rng);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    sq[c] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sums[c];
    s2 += sq[c];
  }
  McEstimate est;
  est.samples = n;
  est.mean = n ? s / static_cast<double>(n) : 0.0;
  if (n > 1) {
    const double var =
        std::max(0.0, (s2 - s * est.mean) / static_cast<double>(n - 1));
    est.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

}  // namespace spinqpt
