#pragma once

// Sharded Monte Carlo. Worker w draws samples [M w / W, M (w + 1) / W) from an
// rng seeded with (seed, w); results land in sample order, so everything
// downstream is reproducible for a fixed (seed, M, W).

#include <cstdint>
#include <thread>
#include <vector>

#include "ymc/group.hpp"

namespace ymc {

struct McOptions {
  std::uint64_t seed = 1;
  long samples = 1000;
  int workers = 1;
};

Rng worker_rng(std::uint64_t seed, int worker);

template <class T, class Fn>
std::vector<T> mc_map(const McOptions& opt, Fn&& fn) {
  if (opt.samples < 1) throw std::invalid_argument("Monte Carlo needs at least one sample");
  const int workers = std::max(1, opt.workers);
  std::vector<T> out(opt.samples);
  auto run = [&](int w) {
    Rng rng = worker_rng(opt.seed, w);
    const long begin = opt.samples * w / workers, end = opt.samples * (w + 1) / workers;
    for (long i = begin; i < end; ++i) out[i] = fn(rng);
  };
  if (workers == 1) {
    run(0);
    return out;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  for (auto& t : pool) t.join();
  return out;
}

struct Estimate {
  cplx value;
  double se;  // standard error of the complex mean
  long samples;
};

Estimate mean_estimate(const std::vector<cplx>& v);
Estimate mean_estimate(const std::vector<double>& v);

}  // namespace ymc
