// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gibbstree/asymptotics.hpp"
#include "gibbstree/counting.hpp"
#include "gibbstree/ks.hpp"
#include "gibbstree/limit.hpp"
#include "gibbstree/markov_tree.hpp"
#include "gibbstree/model.hpp"
#include "gibbstree/numeric.hpp"
#include "gibbstree/plane_tree.hpp"
#include "gibbstree/random.hpp"
#include "support.hpp"

using namespace gibbstree;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Random models shared by the property criteria: E_i ~ U[-3, 3], beta ~ U[-2, 2].
std::vector<EnergyModel> random_models(int count, int d_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<EnergyModel> out;
  for (int i = 0; i < count; ++i) out.push_back(testing::random_model(rng, {.d_min = 2, .d_max = d_max}));
  return out;
}

CriticalParams uniform_binary() { return critical_params(EnergyModel::make(2, {0.0, 0.0, 0.0}, 0.0)); }

Verdict solver_values() {
  const auto model = EnergyModel::make(2, {0.0, 0.0, 0.0}, 0.0);
  const double w0 = std::exp(model.log_weight(0)), w2 = std::exp(model.log_weight(2));
  const double rho_oracle = std::sqrt(w0 / w2);
  (void)critical_params(model);
  const int reps = 1000;
  const auto start = Clock::now();
  CriticalParams p = critical_params(model);
  for (int i = 1; i < reps; ++i) p = critical_params(model);
  const double per_call = seconds_since(start) / reps;
  const double err = std::max({std::abs(p.rho - rho_oracle), std::abs(p.C - 1.0 / 3.0),
                               std::abs(p.sigma - 1.0 / 3.0), std::abs(p.mu - 2.0 / 3.0)});
  return {err <= 1e-10 && per_call < 1e-3,
          fmt("max |error| %.2e (tol 1e-10), %.1f us per solve (limit 1000 us)", err, per_call * 1e6)};
}

Verdict enumeration_counts() {
  const auto start = Clock::now();
  const auto four = enumerate_trees(4, 3).size();
  bool ok = four == 5;
  for (int N = 1; N <= 12; ++N) {
    long long count = 0;
    for_each_tree(N, std::max(1, N - 1), [&](const PlaneTree &) { ++count; });
    ok = ok && BigInt(count) == testing::catalan(N - 1);
  }
  const double t = seconds_since(start);
  return {ok && t < 10.0, fmt("|T_4(3)| = %zu, Catalan match for N <= 12: %s, %.2f s (limit 10 s)", four,
                              ok ? "yes" : "no", t)};
}

Verdict forest_formula() {
  int checked = 0, mismatched = 0;
  for (int N = 1; N <= 8; ++N) {
    for (int k = 1; k <= N; ++k) {
      const int D = std::max(1, N - 1);
      std::map<std::vector<int>, long long> tally;
      testing::for_each_forest(N, k, D, [&](const std::vector<int> &chi) { ++tally[chi]; });
      for_each_degree_vector(N, k, D, [&](std::span<const int> r) {
        const auto it = tally.find(std::vector<int>(r.begin(), r.end()));
        ++checked;
        if (forest_count(N, k, r) != BigInt(it == tally.end() ? 0 : it->second)) ++mismatched;
      });
    }
  }
  return {mismatched == 0 && checked > 0,
          fmt("%d degree vectors checked, %d mismatches (exact)", checked, mismatched)};
}

Verdict ratio_convergence() {
  int pairs = 0, improved = 0;
  for (const auto &model : random_models(20, 3, 404)) {
    const auto params = critical_params(model);
    const int D = model.max_degree();
    const WeightedCountTable table(model, 10, D);
    for (int a = 1; a <= D; ++a) {
      for (int b = a + 1; b <= D; ++b) {
        const auto tau_a = NeighborhoodTree::from_levels({LevelEncoding::from_parents(std::vector<int>(a, 1))});
        const auto tau_b = NeighborhoodTree::from_levels({LevelEncoding::from_parents(std::vector<int>(b, 1))});
        const auto r6 = ratio_check(tau_a, tau_b, 6, params, table);
        const auto r10 = ratio_check(tau_a, tau_b, 10, params, table);
        ++pairs;
        if (std::abs(r10.finite / r10.limit - 1.0) < std::abs(r6.finite / r6.limit - 1.0)) ++improved;
      }
    }
  }
  const double fraction = static_cast<double>(improved) / pairs;
  return {fraction >= 0.9, fmt("gap(N=10) < gap(N=6) for %d/%d pairs = %.3f (need >= 0.9)", improved, pairs,
                               fraction)};
}

Verdict tv_convergence() {
  const auto start = Clock::now();
  const std::vector<int> orders = {16, 32, 64, 128, 256, 512};
  bool ok = true;
  std::string detail;
  for (double beta : {-0.5, 0.0, 0.5}) {
    const auto rows = convergence_table(EnergyModel::make(2, {0.0, 0.0, 1.0}, beta), 1, orders);
    std::vector<double> tv;
    for (const auto &r : rows) tv.push_back(r.tv);
    const int inversions = count_increases(tv);
    ok = ok && inversions <= 1 && tv.back() < tv.front() / 3.0;
    detail += fmt("beta %.1f: TV %.3e -> %.3e, %d inversions; ", beta, tv.front(), tv.back(), inversions);
  }
  const double t = seconds_since(start);
  return {ok && t < 60.0, detail + fmt("%.2f s (limit 60 s)", t)};
}

Verdict consistency() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const auto &model : random_models(100, 3, 606)) {
    const auto params = critical_params(model);
    worst = std::max({worst, check_consistency(1, params), check_consistency(2, params)});
  }
  const double t = seconds_since(start);
  return {worst < 1e-10 && t < 60.0, fmt("max defect %.2e (tol 1e-10), %.2f s (limit 60 s)", worst, t)};
}

Verdict kernel() {
  double worst = 0.0;
  for (const auto &model : random_models(20, 3, 707)) {
    const auto params = critical_params(model);
    for (int size = 1; size <= 3; ++size) {
      const auto g = LevelEncoding::from_parents(std::vector<int>(size, 1));
      CompensatedSum<double> total;
      for (const auto &next : enumerate_next_levels(size, model.max_degree()))
        total += transition_prob(g, next, params);
      worst = std::max(worst, std::abs(total.value() - 1.0));
    }
  }
  const auto params = critical_params(random_models(1, 3, 708).front());
  const OffspringLaw law(params);
  Engine rng = make_engine(kDefaultSeed, 7);
  double min_p = 1.0;
  for (int size = 1; size <= 3; ++size) {
    const auto g = LevelEncoding::from_parents(std::vector<int>(size, 1));
    const auto support = enumerate_next_levels(size, params.max_degree());
    std::map<LevelEncoding, std::size_t> index;
    std::vector<double> probs;
    for (const auto &next : support) {
      index[next] = probs.size();
      probs.push_back(transition_prob(g, next, params));
    }
    std::vector<double> observed(probs.size(), 0.0);
    for (int i = 0; i < 1000000; ++i) {
      const auto it = index.find(sample_next_level(g, law, rng));
      if (it == index.end()) return {false, "sampler left the kernel support"};
      observed[it->second] += 1.0;
    }
    min_p = std::min(min_p, testing::chi_square_p_value(observed, probs));
  }
  return {worst <= 1e-10 && min_p > 0.001,
          fmt("max |row sum - 1| %.2e (tol 1e-10), min chi-square p %.3f at 1e6 draws (need > 0.001)", worst,
              min_p)};
}

Verdict conditional_moments() {
  double worst = 0.0;
  for (const auto &model : random_models(20, 4, 808)) {
    const auto params = critical_params(model);
    for (int k = 1; k <= 4; ++k)
      for (int q = 1; q <= 4; ++q)
        worst = std::max(worst, testing::relative_error(conditional_moment_exhaustive(k, q, params),
                                                        conditional_moment_formula(k, q, params)));
  }
  return {worst < 1e-10, fmt("max relative error %.2e over k <= 4, q = 1..4 (tol 1e-10)", worst)};
}

Verdict laplace() {
  const auto params = uniform_binary();
  const double gap = std::abs(laplace_exact(10000, -1.0, params) - 9.0 / 16.0);
  double oracle = 0.0;
  for (int n = 1; n <= 10; ++n)
    oracle = std::max(oracle, std::abs(laplace_exact(n, -1.0, params) - laplace_expectation(n, -1.0, params)));
  return {gap < 5e-3 && oracle < 1e-9,
          fmt("|L_1e4(-1/n) - 9/16| = %.2e (tol 5e-3), max |iteration - oracle| n <= 10: %.2e (tol 1e-9)", gap,
              oracle)};
}

GammaLimitResult gamma_samples;

Verdict gamma_monte_carlo() {
  const auto start = Clock::now();
  gamma_samples = gamma_limit_test(500, 100000, uniform_binary(), kDefaultSeed, default_worker_count());
  const double t = seconds_since(start);
  return {gamma_samples.ks.statistic < 0.02 && t < 300.0,
          fmt("KS %.4f (need < 0.02), p %.3f, scaled mean %.4f, %.1f s (limit 300 s)", gamma_samples.ks.statistic,
              gamma_samples.ks.p_value, gamma_samples.sample_mean, t)};
}

Verdict besq() {
  const auto params = uniform_binary();
  const auto z = besq_terminal_values(100000, 1.0, 1e-3, params, derive_seed(kDefaultSeed, 1),
                                      default_worker_count());
  CompensatedSum<double> sum;
  for (double v : z) sum += v;
  const double mean = sum.value() / static_cast<double>(z.size());
  std::vector<double> scaled;
  scaled.reserve(z.size());
  for (double v : z) scaled.push_back(2.0 / params.mu * v);
  const double rel = std::abs(mean / params.mu - 1.0);
  const double ks = ks_test(scaled, gamma2_cdf).statistic;
  const double two = gamma_samples.scaled.empty() ? 1.0 : ks_two_sample(scaled, gamma_samples.scaled).statistic;
  return {rel < 0.01 && ks < 0.02 && two < 0.03,
          fmt("mean %.5f vs mu %.5f (rel %.2e, tol 1e-2), KS %.4f (need < 0.02), two-sample KS %.4f (need < 0.03)",
              mean, params.mu, rel, ks, two)};
}

Verdict group_coefficients() {
  const auto s = group_increment_statistics(400, 2, 10000, uniform_binary(), derive_seed(kDefaultSeed, 4),
                                            default_worker_count());
  const double zd = std::abs(s.drift_residual_mean) / s.drift_residual_se;
  const double zc = std::abs(s.cross_variation_mean) / s.cross_variation_se;
  return {zd <= 3.0 && zc <= 3.0,
          fmt("drift residual %.2e +- %.2e (%.2f SE), cross variation %.2e +- %.2e (%.2f SE), %zu steps", s.drift_residual_mean,
              s.drift_residual_se, zd, s.cross_variation_mean, s.cross_variation_se, zc, s.steps)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
      {"variational solver", solver_values},
      {"tree enumeration", enumeration_counts},
      {"forest formula", forest_formula},
      {"finite-order ratios", ratio_convergence},
      {"total variation convergence", tv_convergence},
      {"consistency of limit laws", consistency},
      {"Markov kernel", kernel},
      {"conditional moments", conditional_moments},
      {"Laplace iteration", laplace},
      {"gamma limit Monte Carlo", gamma_monte_carlo},
      {"squared Bessel diffusion", besq},
      {"group drift and cross variation", group_coefficients},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception &e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
