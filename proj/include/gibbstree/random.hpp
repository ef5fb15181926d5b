#ifndef GIBBSTREE_RANDOM_HPP_
#define GIBBSTREE_RANDOM_HPP_

#include <algorithm>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace gibbstree {

using Engine = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20260101;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of stream `index` under `master`: a pure function of the pair, so the
/// stream of task i never depends on how many other tasks exist or which
/// worker runs it.
///   seed(master, i) = splitmix64(splitmix64(master) ^ splitmix64(i + 1)).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 1));
}

inline Engine make_engine(std::uint64_t master, std::uint64_t index) {
  return Engine(derive_seed(master, index));
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Engine &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Inverse-CDF sampler over {0, ..., size-1}.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const Eigen::VectorXd &probs) : cdf_(static_cast<std::size_t>(probs.size())) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      acc += probs(i);
      cdf_[static_cast<std::size_t>(i)] = acc;
    }
    for (auto &c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  int operator()(Engine &rng) const {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                     static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
  }

 private:
  std::vector<double> cdf_;
};

inline unsigned default_worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Calls fn(i) for i in [0, count) across `workers` threads. Output is
/// independent of `workers` as long as fn(i) only depends on i.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn &&fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool) t.join();
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace gibbstree

#endif  // GIBBSTREE_RANDOM_HPP_
