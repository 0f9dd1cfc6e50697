#include "ymc/mc.hpp"

#include <cmath>
#include <random>

namespace ymc {

Rng worker_rng(std::uint64_t seed, int worker) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(worker)};
  return Rng(seq);
}

Estimate mean_estimate(const std::vector<cplx>& v) {
  const long n = static_cast<long>(v.size());
  cplx mean = 0.0;
  for (const cplx& x : v) mean += x;
  mean /= double(n);
  double ss = 0.0;
  for (const cplx& x : v) ss += std::norm(x - mean);
  return {mean, n > 1 ? std::sqrt(ss / (double(n) * (n - 1))) : 0.0, n};
}

Estimate mean_estimate(const std::vector<double>& v) {
  return mean_estimate(std::vector<cplx>(v.begin(), v.end()));
}

}  // namespace ymc
