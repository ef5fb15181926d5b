#include "gibbstree/limit.hpp"

#include <algorithm>
#include <cmath>

#include "gibbstree/errors.hpp"
#include "gibbstree/numeric.hpp"

namespace gibbstree {

double limit_log_prob(const NeighborhoodStats &s, const CriticalParams &params) {
  if (s.k < 1 || s.m < 1) return neg_infinity<double>;
  return params.log_C + std::log(static_cast<double>(s.k)) - params.model.beta() * s.energy_bar +
         s.k * params.log_rho + (s.m - 1) * params.log_sigma;
}

double limit_prob(const NeighborhoodTree &tau, const CriticalParams &params) {
  return std::exp(limit_log_prob(tau.stats(params.model), params));
}

double check_consistency(int n, const CriticalParams &params, double budget) {
  const EnergyModel &model = params.model;
  const int D = model.max_degree();
  double work = 0.0;
  double worst = 0.0;
  // S_n is finite; cap the vertex count at its largest member.
  long long max_vertices = 0;
  long long level = 1;
  for (int h = 0; h <= n; ++h) {
    max_vertices += level;
    level *= D;
  }
  for_each_neighborhood(n, D, static_cast<int>(max_vertices), [&](const NeighborhoodTree &tau) {
    const NeighborhoodStats s = tau.stats(model);
    work += std::pow(D + 1.0, s.k);
    if (work > budget) {
      throw ResourceError("consistency check at n = " + std::to_string(n) +
                          " exceeds the extension budget");
    }
    CompensatedSum<double> total;
    for_each_offspring_vector(s.k, D, 1, s.k * D, [&](std::span<const int> counts) {
      NeighborhoodStats ext{.k = 0, .m = s.m + s.k, .energy_bar = s.energy_bar};
      for (int c : counts) {
        ext.k += c;
        ext.energy_bar += model.energies()(c);
      }
      total += std::exp(limit_log_prob(ext, params));
    });
    worst = std::max(worst, std::abs(std::exp(limit_log_prob(s, params)) - total.value()));
  });
  return worst;
}

double tv_distance(int N, int n, const CriticalParams &params, const WeightedCountTable &table) {
  const auto atoms = pushforward_finite(N, n, params.model, table);
  CompensatedSum<double> abs_diff;
  CompensatedSum<double> limit_mass;
  for (const auto &atom : atoms) {
    const double p = std::exp(limit_log_prob(atom.stats, params));
    limit_mass += p;
    abs_diff += std::abs(atom.probability - p);
  }
  const double missing = std::max(0.0, 1.0 - limit_mass.value());
  return std::clamp(0.5 * (abs_diff.value() + missing), 0.0, 1.0);
}

double tv_distance(int N, int n, const EnergyModel &model) {
  const CriticalParams params = critical_params(model);
  long long k_max = 1;
  for (int h = 0; h < n && k_max < N; ++h) k_max *= model.max_degree();
  const WeightedCountTable table(model, N, static_cast<int>(std::min<long long>(k_max, N)));
  return tv_distance(N, n, params, table);
}

namespace {

double finite_log_prob(const NeighborhoodTree &tau, int N, const EnergyModel &model,
                       const WeightedCountTable &table) {
  const NeighborhoodStats s = tau.stats(model);
  if (N - s.m < s.k || s.k > table.max_components()) return neg_infinity<double>;
  return -model.beta() * s.energy_bar + table.log_forests(N - s.m, s.k) - table.log_trees(N);
}

}  // namespace

RatioCheck ratio_check(const NeighborhoodTree &tau1, const NeighborhoodTree &tau2, int N,
                       const CriticalParams &params, const WeightedCountTable &table) {
  if (tau1.height() != tau2.height()) throw DomainError("atoms must have the same height");
  const EnergyModel &model = params.model;
  const double l1 = finite_log_prob(tau1, N, model, table);
  const double l2 = finite_log_prob(tau2, N, model, table);
  if (l1 == neg_infinity<double> || l2 == neg_infinity<double>) {
    throw DomainError("atom has zero probability at N = " + std::to_string(N));
  }
  return {.finite = std::exp(l1 - l2),
          .limit = std::exp(limit_log_prob(tau1.stats(model), params) -
                            limit_log_prob(tau2.stats(model), params))};
}

RatioCheck ratio_check(const NeighborhoodTree &tau1, const NeighborhoodTree &tau2, int N,
                       const EnergyModel &model) {
  const int k = std::max(tau1.boundary_size(), tau2.boundary_size());
  const WeightedCountTable table(model, N, k);
  return ratio_check(tau1, tau2, N, critical_params(model), table);
}

std::vector<ConvergenceRow> convergence_table(const EnergyModel &model, int n,
                                              std::span<const int> orders) {
  if (orders.empty()) return {};
  const int N_max = *std::max_element(orders.begin(), orders.end());
  long long k_max = 1;
  for (int h = 0; h < n && k_max < N_max; ++h) k_max *= model.max_degree();
  const WeightedCountTable table(model, N_max, static_cast<int>(std::min<long long>(k_max, N_max)));
  const CriticalParams params = critical_params(model);
  std::vector<ConvergenceRow> rows;
  for (int N : orders) rows.push_back({N, n, tv_distance(N, n, params, table)});
  return rows;
}

int count_increases(std::span<const double> values) {
  int count = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1]) ++count;
  }
  return count;
}

}  // namespace gibbstree
