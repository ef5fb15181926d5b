#include "gibbstree/counting.hpp"

#include <algorithm>
#include <cmath>

#include "gibbstree/errors.hpp"
#include "gibbstree/numeric.hpp"

namespace gibbstree {

namespace {

constexpr double kNegInf = neg_infinity<double>;

// out[j] = log sum_i exp(a[i] + b[j - i]).
std::vector<double> log_convolve(const std::vector<double> &a, const std::vector<double> &b,
                                 int max_index) {
  std::vector<double> out(static_cast<std::size_t>(max_index) + 1, kNegInf);
  std::vector<double> terms;
  for (int j = 0; j <= max_index; ++j) {
    terms.clear();
    for (int i = 0; i <= j; ++i) {
      const double x = a[static_cast<std::size_t>(i)] + b[static_cast<std::size_t>(j - i)];
      if (x != kNegInf) terms.push_back(x);
    }
    out[static_cast<std::size_t>(j)] = log_sum_exp<double>(terms);
  }
  return out;
}

}  // namespace

WeightedCountTable::WeightedCountTable(const EnergyModel &model, int max_order,
                                       int max_components)
    : max_order_(max_order) {
  if (max_order < 1) throw DomainError("table order must be at least 1");
  if (max_order > kMaxDpOrder) {
    throw ResourceError("DP order " + std::to_string(max_order) + " exceeds limit " +
                        std::to_string(kMaxDpOrder));
  }
  const int D = model.max_degree();
  const int components = std::max(D, max_components);
  const auto len = static_cast<std::size_t>(max_order) + 1;

  forest_.reserve(static_cast<std::size_t>(components) + 1);  // F below must stay valid
  forest_.assign(static_cast<std::size_t>(D) + 1, std::vector<double>(len, kNegInf));
  forest_[0][0] = 0.0;
  auto &F = forest_[1];
  F[1] = model.log_weight(0);

  std::vector<double> terms;
  for (int m = 2; m <= max_order; ++m) {
    const int j = m - 1;
    // Forests of d >= 2 trees on j vertices use only F[1..j-1].
    for (int d = 2; d <= D; ++d) {
      terms.clear();
      for (int i = 1; i <= j - (d - 1); ++i) {
        const double x = F[static_cast<std::size_t>(i)] + forest_[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(j - i)];
        if (x != kNegInf) terms.push_back(x);
      }
      forest_[static_cast<std::size_t>(d)][static_cast<std::size_t>(j)] = log_sum_exp<double>(terms);
    }
    terms.clear();
    for (int d = 1; d <= std::min(D, j); ++d) {
      terms.push_back(model.log_weight(d) + forest_[static_cast<std::size_t>(d)][static_cast<std::size_t>(j)]);
    }
    F[static_cast<std::size_t>(m)] = log_sum_exp<double>(terms);
  }
  // Complete the d-fold tables at the top order.
  for (int d = 2; d <= D; ++d) {
    terms.clear();
    for (int i = 1; i <= max_order - (d - 1); ++i) {
      const double x = F[static_cast<std::size_t>(i)] + forest_[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(max_order - i)];
      if (x != kNegInf) terms.push_back(x);
    }
    forest_[static_cast<std::size_t>(d)][static_cast<std::size_t>(max_order)] = log_sum_exp<double>(terms);
  }
  for (int c = D + 1; c <= components; ++c) {
    forest_.push_back(log_convolve(forest_[static_cast<std::size_t>(c - 1)], F, max_order));
  }
}

double WeightedCountTable::log_trees(int m) const { return log_forests(m, 1); }

double WeightedCountTable::log_forests(int j, int c) const {
  if (j < 0 || j > max_order_) throw DomainError("forest order outside the table");
  if (c < 0 || c > max_components()) throw DomainError("component count outside the table");
  return forest_[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
}

double log_partition_function(int N, const EnergyModel &model) {
  return WeightedCountTable(model, N).log_trees(N);
}

BigInt count_forests_exact(int N, int c, int D) {
  if (N < 0 || c < 0) return 0;
  // trees[m] by the root-degree recursion, forests[d][j] by convolution.
  std::vector<BigInt> trees(static_cast<std::size_t>(N) + 1, 0);
  const int width = std::max(D, c);
  std::vector<std::vector<BigInt>> forests(static_cast<std::size_t>(width) + 1,
                                           std::vector<BigInt>(static_cast<std::size_t>(N) + 1, 0));
  forests[0][0] = 1;
  for (int m = 1; m <= N; ++m) {
    BigInt t = 0;
    for (int d = 0; d <= std::min(D, m - 1); ++d) t += forests[static_cast<std::size_t>(d)][static_cast<std::size_t>(m - 1)];
    trees[static_cast<std::size_t>(m)] = t;
    for (int d = 1; d <= width; ++d) {
      BigInt acc = 0;
      for (int i = 1; i <= m; ++i) {
        acc += trees[static_cast<std::size_t>(i)] * forests[static_cast<std::size_t>(d - 1)][static_cast<std::size_t>(m - i)];
      }
      forests[static_cast<std::size_t>(d)][static_cast<std::size_t>(m)] = acc;
    }
  }
  return forests[static_cast<std::size_t>(c)][static_cast<std::size_t>(N)];
}

BigInt count_trees_exact(int N, int D) { return count_forests_exact(N, 1, D); }

BigInt forest_count(int N, int k, std::span<const int> r) {
  long long total = 0;
  long long edges = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 0) return 0;
    total += r[i];
    edges += static_cast<long long>(i) * r[i];
  }
  if (total != N || edges != static_cast<long long>(N) - k) return 0;
  if (N == 0) return k == 0 ? 1 : 0;
  if (k < 0) return 0;
  BigInt multinomial = 1;
  int placed = 0;
  for (int ri : r) {
    for (int j = 1; j <= ri; ++j) {
      ++placed;
      multinomial *= placed;
      multinomial /= j;
    }
  }
  // (k / N) * multinomial is always an integer.
  return multinomial * k / N;
}

namespace {

void degree_rec(std::vector<int> &r, std::size_t idx, int count_left, int edges_left,
                const std::function<void(std::span<const int>)> &visit) {
  if (idx == 0) {
    if (edges_left == 0) {
      r[0] = count_left;
      visit(r);
    }
    return;
  }
  const int i = static_cast<int>(idx);
  for (int ri = 0; ri <= count_left && ri * i <= edges_left; ++ri) {
    r[idx] = ri;
    degree_rec(r, idx - 1, count_left - ri, edges_left - ri * i, visit);
  }
  r[idx] = 0;
}

}  // namespace

void for_each_degree_vector(int N, int k, int D,
                            const std::function<void(std::span<const int>)> &visit) {
  if (N < 0 || D < 0 || N - k < 0) return;
  std::vector<int> r(static_cast<std::size_t>(D) + 1, 0);
  degree_rec(r, static_cast<std::size_t>(D), N, N - k, visit);
}

int min_feasible_order(int n, int D) {
  // Largest tree of height < n has 1 + D + ... + D^{n-1} vertices.
  long long largest_short = 0;
  long long level = 1;
  for (int h = 0; h < n; ++h) {
    largest_short += level;
    level *= D;
    if (largest_short > kMaxDpOrder) return kMaxDpOrder + 1;
  }
  return static_cast<int>(largest_short) + 1;
}

std::vector<AtomProbability> pushforward_finite(int N, int n, const EnergyModel &model) {
  if (N < 1 || N > kMaxDpOrder) {
    throw ResourceError("order N = " + std::to_string(N) + " outside 1.." +
                        std::to_string(kMaxDpOrder));
  }
  const int D = model.max_degree();
  // Boundary sizes are bounded by both N and D^n.
  long long k_max = 1;
  for (int h = 0; h < n && k_max < N; ++h) k_max *= D;
  const WeightedCountTable table(model, N, static_cast<int>(std::min<long long>(k_max, N)));
  return pushforward_finite(N, n, model, table);
}

std::vector<AtomProbability> pushforward_finite(int N, int n, const EnergyModel &model,
                                                const WeightedCountTable &table) {
  if (n < 1) throw DomainError("neighbourhood radius must be at least 1");
  if (N > table.max_order()) throw DomainError("count table does not cover order N");
  if (N < min_feasible_order(n, model.max_degree())) {
    throw SupportError("pi_{n,N} undefined for n = " + std::to_string(n) + ", N = " +
                       std::to_string(N) + ": some trees of order N have height < n");
  }
  const double log_Z = table.log_trees(N);
  std::vector<AtomProbability> atoms;
  for_each_neighborhood(n, model.max_degree(), N, [&](const NeighborhoodTree &tau) {
    const NeighborhoodStats s = tau.stats(model);
    if (s.k > table.max_components()) {
      throw ResourceError("count table lacks forests with " + std::to_string(s.k) + " trees");
    }
    const double lw = table.log_forests(N - s.m, s.k);
    if (lw == neg_infinity<double>) return;
    const double lp = -model.beta() * s.energy_bar + lw - log_Z;
    atoms.push_back({tau, s, lp, std::exp(lp)});
  });
  if (atoms.empty()) throw SupportError("empty support");
  return atoms;
}

}  // namespace gibbstree
