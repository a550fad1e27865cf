#pragma once

#include "conik/duality.hpp"

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace conik {

// Deterministic interior-point sampler.  Dual points come from the gradient
// bijection s = -t F'(x'), which keeps the pair's shadows in closed form.
class PairSampler {
 public:
  PairSampler(ConePtr cone, std::uint64_t seed)
      : barrier_(std::move(cone)), rng_(seed) {}

  Vector interior_point(double max_radius = 0.9, int steps = 2, double log_scale_sd = 0.0);
  Vector dual_interior_point(double max_radius = 0.9, double log_scale_sd = 1.0);

  PrimalDualPair pair(double max_radius = 0.9, double log_scale_sd = 1.0);
  PrimalDualPair near_central_pair(double gamma_target);
  // Pair with mu = 1 and mu x~ inside the Dikin ellipsoid of radius_max at x.
  PrimalDualPair half_dikin_pair(double radius_max = 0.5);
  // Wild pair with mu mu~ above the threshold, if one shows up.
  std::optional<PrimalDualPair> far_pair(double min_mu_mu_tilde, int max_tries = 200);

  const Barrier& barrier() const { return barrier_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  Vector random_direction(int n);

  Barrier barrier_;
  std::mt19937_64 rng_;
};

// Ordered parallel map over [0, count); items must be independent and pure.
template <class Fn>
auto parallel_map(int count, Fn fn) -> std::vector<decltype(fn(0))> {
  using T = decltype(fn(0));
  std::vector<T> out(static_cast<size_t>(count));
  const unsigned hw = std::thread::hardware_concurrency();
  const int nthreads = std::max(1, std::min<int>(hw ? static_cast<int>(hw) : 1, count));
  if (nthreads == 1) {
    for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          out[static_cast<size_t>(i)] = fn(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace conik
