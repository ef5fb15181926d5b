#ifndef GIBBSTREE_COUNTING_HPP_
#define GIBBSTREE_COUNTING_HPP_

#include <functional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gibbstree/model.hpp"
#include "gibbstree/neighborhood_tree.hpp"

namespace gibbstree {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kMaxDpOrder = 2000;

/// Log-space weighted counts of plane trees and forests with out-degree <= D:
///   log F(m)    = log sum_{|T| = m} e^{-beta E(T)},
///   log W(j, c) = log of the c-fold convolution of F at j (forests of c trees
///                 on j vertices in total).
/// Immutable once built.
class WeightedCountTable {
 public:
  /// Tables for orders 1..max_order and forests of up to max(D, max_components)
  /// trees. Throws ResourceError beyond kMaxDpOrder.
  WeightedCountTable(const EnergyModel &model, int max_order, int max_components = 0);

  int max_order() const { return max_order_; }
  int max_components() const { return static_cast<int>(forest_.size()) - 1; }

  double log_trees(int m) const;
  /// -inf when no such forest exists (j < c); log W(0, 0) = 0.
  double log_forests(int j, int c) const;

 private:
  int max_order_;
  // forest_[c][j] = log W(j, c); forest_[1] is log F.
  std::vector<std::vector<double>> forest_;
};

/// log Z_N for the model.
double log_partition_function(int N, const EnergyModel &model);

/// Number of plane trees on N vertices with out-degrees <= D (beta = 0 path).
BigInt count_trees_exact(int N, int D);
/// Number of ordered forests of c plane trees on N vertices, out-degrees <= D.
BigInt count_forests_exact(int N, int c, int D);

/// (k / N) * multinomial(N; r_0..r_D) when sum r_i = N and sum i r_i = N - k, else 0.
BigInt forest_count(int N, int k, std::span<const int> r);

/// Visits every degree vector r in Z_+^{D+1} with sum r_i = N and sum i r_i = N - k.
void for_each_degree_vector(int N, int k, int D,
                            const std::function<void(std::span<const int>)> &visit);

struct AtomProbability {
  NeighborhoodTree tau;
  NeighborhoodStats stats;
  double log_probability = 0.0;
  double probability = 0.0;
};

/// Smallest N for which every tree in T_N(D) reaches height n.
int min_feasible_order(int n, int D);

/// Exact law of the radius-n ball around the root under mu_N. Throws
/// SupportError when some tree of order N is shorter than n (then pi_{n,N} is
/// not defined on all of T_N).
std::vector<AtomProbability> pushforward_finite(int N, int n, const EnergyModel &model);
/// Same, reusing a prebuilt table (must cover order N).
std::vector<AtomProbability> pushforward_finite(int N, int n, const EnergyModel &model,
                                                const WeightedCountTable &table);

}  // namespace gibbstree

#endif  // GIBBSTREE_COUNTING_HPP_
