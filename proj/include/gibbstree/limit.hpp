#ifndef GIBBSTREE_LIMIT_HPP_
#define GIBBSTREE_LIMIT_HPP_

#include <span>
#include <utility>
#include <vector>

#include "gibbstree/counting.hpp"
#include "gibbstree/model.hpp"
#include "gibbstree/neighborhood_tree.hpp"

namespace gibbstree {

/// log P_n{tau} = log(C k e^{-beta Ebar} rho^k sigma^{m-1}).
double limit_log_prob(const NeighborhoodStats &stats, const CriticalParams &params);
double limit_prob(const NeighborhoodTree &tau, const CriticalParams &params);

inline constexpr double kDefaultConsistencyBudget = 2e8;

/// max over tau in S_n of |P_n{tau} - sum of P_{n+1} over one-level extensions
/// of tau|. Throws ResourceError once the number of extensions visited would
/// exceed `budget`.
double check_consistency(int n, const CriticalParams &params,
                         double budget = kDefaultConsistencyBudget);

/// Total variation distance between mu_N pi_{n,N}^{-1} and P_n. Limit atoms
/// outside the finite-N support contribute their full mass.
double tv_distance(int N, int n, const EnergyModel &model);
double tv_distance(int N, int n, const CriticalParams &params, const WeightedCountTable &table);

struct RatioCheck {
  double finite = 0.0;
  double limit = 0.0;
};

/// Finite-N ratio mu_N pi^{-1}{tau1} / mu_N pi^{-1}{tau2} next to its limit.
/// Throws DomainError if either atom has zero finite-N probability.
RatioCheck ratio_check(const NeighborhoodTree &tau1, const NeighborhoodTree &tau2, int N,
                       const EnergyModel &model);
RatioCheck ratio_check(const NeighborhoodTree &tau1, const NeighborhoodTree &tau2, int N,
                       const CriticalParams &params, const WeightedCountTable &table);

struct ConvergenceRow {
  int N = 0;
  int n = 0;
  double tv = 0.0;
};

/// TV distance at every order in `orders`, sharing one count table.
std::vector<ConvergenceRow> convergence_table(const EnergyModel &model, int n,
                                              std::span<const int> orders);

/// Number of adjacent pairs with values[i + 1] > values[i].
int count_increases(std::span<const double> values);

}  // namespace gibbstree

#endif  // GIBBSTREE_LIMIT_HPP_
