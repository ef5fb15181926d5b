#ifndef GIBBSTREE_TESTS_SUPPORT_HPP_
#define GIBBSTREE_TESTS_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "gibbstree/counting.hpp"
#include "gibbstree/model.hpp"
#include "gibbstree/neighborhood_tree.hpp"
#include "gibbstree/plane_tree.hpp"

namespace testing {

struct ModelRanges {
  int d_min = 2;
  int d_max = 6;
  double energy = 3.0;  // E_i uniform on [-energy, energy]
  double beta = 2.0;    // beta uniform on [-beta, beta]
};

inline gibbstree::EnergyModel random_model(std::mt19937_64 &rng, const ModelRanges &ranges = {}) {
  std::uniform_int_distribution<int> degree(ranges.d_min, ranges.d_max);
  std::uniform_real_distribution<double> energy(-ranges.energy, ranges.energy);
  std::uniform_real_distribution<double> beta(-ranges.beta, ranges.beta);
  const int D = degree(rng);
  std::vector<double> E(static_cast<std::size_t>(D) + 1);
  for (auto &e : E) e = energy(rng);
  return gibbstree::EnergyModel::make(D, E, beta(rng));
}

// Catalan(n) = binom(2n, n) / (n + 1), by the product formula.
inline gibbstree::BigInt catalan(int n) {
  gibbstree::BigInt c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

// Brute-force mu_N pi_{n,N}^{-1}: every tree of order N, projected to radius n.
inline std::map<std::string, double> brute_force_pushforward(int N, int n,
                                                             const gibbstree::EnergyModel &model) {
  std::map<std::string, double> weights;
  double total = 0.0;
  gibbstree::for_each_tree(N, model.max_degree(), [&](const gibbstree::PlaneTree &t) {
    const double w = std::exp(-model.beta() * gibbstree::tree_energy(t, model));
    weights[gibbstree::NeighborhoodTree::project(t, n).to_string()] += w;
    total += w;
  });
  for (auto &[key, w] : weights) w /= total;
  return weights;
}

// Visits every ordered forest of k trees on N vertices (out-degrees <= D) as
// its combined degree histogram.
inline void for_each_forest(int N, int k, int D, const std::function<void(const std::vector<int> &)> &visit) {
  std::vector<int> chi(static_cast<std::size_t>(D) + 1, 0);
  std::function<void(int, int)> place = [&](int remaining, int trees_left) {
    if (trees_left == 0) {
      if (remaining == 0) visit(chi);
      return;
    }
    for (int size = 1; size <= remaining - (trees_left - 1); ++size) {
      for (const auto &t : gibbstree::enumerate_trees(size, D)) {
        const auto c = t.degree_counts(D);
        for (int i = 0; i <= D; ++i) chi[i] += c[i];
        place(remaining - size, trees_left - 1);
        for (int i = 0; i <= D; ++i) chi[i] -= c[i];
      }
    }
  };
  place(N, k);
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

// Pearson chi-square p-value of observed counts against cell probabilities.
// Cells with expected count below 5 are pooled into one cell.
inline double chi_square_p_value(const std::vector<double> &observed, const std::vector<double> &probs) {
  double total = 0.0;
  for (double o : observed) total += o;
  double stat = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = total * probs[i];
    if (expected < 5.0) {
      pooled_obs += observed[i];
      pooled_exp += expected;
      continue;
    }
    stat += (observed[i] - expected) * (observed[i] - expected) / expected;
    ++cells;
  }
  if (pooled_exp == 0.0 && pooled_obs > 0.0) return 0.0;
  if (pooled_exp > 0.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  if (cells < 2) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(cells - 1), stat));
}

}  // namespace testing

#endif  // GIBBSTREE_TESTS_SUPPORT_HPP_
