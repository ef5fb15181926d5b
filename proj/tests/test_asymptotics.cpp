#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "gibbstree/asymptotics.hpp"
#include "gibbstree/errors.hpp"
#include "gibbstree/limit.hpp"
#include "support.hpp"

using namespace gibbstree;

namespace {

CriticalParams uniform_binary() { return critical_params(EnergyModel::make(2, {0.0, 0.0, 0.0}, 0.0)); }

}  // namespace

TEST_CASE("generating functions near zero") {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 50; ++trial) {
    const auto params = critical_params(testing::random_model(rng));
    const LaplaceFunctions<double> fn(params);
    CHECK(fn.v(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fn.w(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fn.f(0.0) == 0.0);
    CHECK(fn.z(0.0) == doctest::Approx(1.0).epsilon(1e-12));
    const double h = 1e-4;
    const double f1 = (fn.f(h) - fn.f(-h)) / (2 * h);
    const double f2 = (fn.f(h) - 2 * fn.f(0.0) + fn.f(-h)) / (h * h);
    CHECK(std::abs(f1 - 1.0) < 1e-6);
    CHECK(std::abs(f2 - params.mu) < 1e-6 * std::max(1.0, params.mu));
    const double lz1 = (std::log(fn.z(h)) - std::log(fn.z(-h))) / (2 * h);
    CHECK(std::abs(lz1 - params.mu) < 1e-6 * std::max(1.0, params.mu));
    // f(s) = s + mu s^2 / 2 + O(s^3)
    CHECK(std::abs(fn.f(1e-8) - 1e-8) < 1e-15);
  }
}

TEST_CASE("Laplace iteration") {
  const auto params = uniform_binary();
  CHECK(laplace_exact(7, 0.0, params) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(laplace_exact(5, 0.5, params), DomainError);
  CHECK_THROWS_AS(laplace_exact(0, -1.0, params), DomainError);
  CHECK(laplace_limit(-1.0, 2.0 / 3.0) == doctest::Approx(9.0 / 16.0));
  CHECK(std::abs(laplace_exact(10000, -1.0, params) - 9.0 / 16.0) < 5e-3);
  // the gap to the limit is O(1/n)
  const double g1 = std::abs(laplace_exact(1000, -1.0, params) - 9.0 / 16.0);
  const double g2 = std::abs(laplace_exact(10000, -1.0, params) - 9.0 / 16.0);
  CHECK(g2 < g1 / 5.0);
  const auto iterates = laplace_iterates(20, -1.0, params);
  CHECK(iterates.size() == 21);
  CHECK(iterates.front() == doctest::Approx(-1.0 / 20));
}

TEST_CASE("Laplace iteration agrees with the exact law") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto params = critical_params(testing::random_model(rng, {.d_min = 2, .d_max = 4}));
    for (int n = 1; n <= 10; ++n)
      for (double x : {-0.3, -1.0, -2.5})
        CHECK(std::abs(laplace_exact(n, x, params) - laplace_expectation(n, x, params)) < 1e-9);
  }
}

TEST_CASE("comparison sequence stays within K / n^2") {
  const auto params = uniform_binary();
  const double k100 = laplace_comparison_constant(100, -1.0, params);
  const double k1000 = laplace_comparison_constant(1000, -1.0, params);
  CHECK(std::isfinite(k100));
  CHECK(k1000 < 2.0 * k100);
  CHECK(k1000 > 0.5 * k100);
}

TEST_CASE("mean level size telescopes") {
  const auto params = critical_params(EnergyModel::make(3, {0.1, -0.3, 0.4, 0.2}, 1.0));
  for (int n : {10, 100}) {
    const auto sizes = sample_level_sizes(n, 100000, params, 11);
    double mean = 0.0, sq = 0.0;
    for (long long y : sizes) {
      mean += static_cast<double>(y);
      sq += static_cast<double>(y) * static_cast<double>(y);
    }
    mean /= sizes.size();
    const double se = std::sqrt((sq / sizes.size() - mean * mean) / sizes.size());
    CHECK(std::abs(mean - (1.0 + n * params.mu)) < 3.0 * se);
  }
}

TEST_CASE("gamma limit at moderate depth") {
  const auto params = uniform_binary();
  const auto r = gamma_limit_test(200, 20000, params, 12);
  CHECK(r.ks.statistic < 0.03);
  CHECK(r.scaled.size() == 20000);
  CHECK(std::abs(r.raw_mean - (1.0 + 200 * params.mu)) < 3.0 * r.raw_mean_standard_error);
  CHECK_THROWS_AS(gamma_limit_test(10, 999, params, 1), DomainError);
}

TEST_CASE("results do not depend on the worker count") {
  const auto params = uniform_binary();
  CHECK(sample_level_sizes(50, 3000, params, 9, 1) == sample_level_sizes(50, 3000, params, 9, 4));
  CHECK(besq_terminal_values(500, 1.0, 1e-2, params, 9, 1) ==
        besq_terminal_values(500, 1.0, 1e-2, params, 9, 3));
}

TEST_CASE("squared Bessel paths") {
  const auto params = uniform_binary();
  Engine rng = make_engine(13, 0);
  const auto path = simulate_besq(1.0, 1e-3, params, rng);
  CHECK(path.values.rows() == 1001);
  CHECK(path.values(0, 0) == 0.0);
  CHECK(path.values.minCoeff() >= 0.0);

  const auto z = besq_terminal_values(20000, 1.0, 1e-3, params, 14);
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / z.size();
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= z.size() - 1;
  CHECK(std::abs(mean / params.mu - 1.0) < 0.02);
  CHECK(std::abs(var / (params.mu * params.mu / 2.0) - 1.0) < 0.05);
  std::vector<double> scaled;
  for (double v : z) scaled.push_back(2.0 / params.mu * v);
  CHECK(ks_test(scaled, gamma2_cdf).statistic < 0.02);
}

TEST_CASE("group system") {
  const auto params = uniform_binary();
  Engine rng = make_engine(15, 0);
  CHECK_THROWS_AS(simulate_groups(2, Eigen::Vector2d(0.0, 0.0), 1.0, 1e-3, params, rng), DomainError);
  CHECK_THROWS_AS(simulate_groups(2, Eigen::Vector2d(-0.1, 0.5), 1.0, 1e-3, params, rng), DomainError);
  CHECK_THROWS_AS(simulate_groups(3, Eigen::Vector2d(0.1, 0.5), 1.0, 1e-3, params, rng), DomainError);

  // the sum of the groups has mean sum v + mu t
  const Eigen::Vector3d v0(0.2, 0.1, 0.3);
  double total = 0.0;
  const int paths = 20000;
  std::vector<double> one_group, scalar;
  for (int i = 0; i < paths; ++i) {
    Engine path_rng = make_engine(16, i);
    const auto p = simulate_groups(3, v0, 1.0, 1e-3, params, path_rng);
    CHECK(p.values.minCoeff() >= 0.0);
    total += p.values.row(p.values.rows() - 1).sum();
    Engine single_rng = make_engine(17, i);
    one_group.push_back(simulate_groups(1, Eigen::VectorXd::Constant(1, 0.4), 1.0, 1e-3, params, single_rng)
                            .values(1000, 0));
    Engine besq_rng = make_engine(18, i);
    scalar.push_back(simulate_besq(1.0, 1e-3, params, besq_rng, 0.4).values(1000, 0));
  }
  CHECK(std::abs(total / paths / (0.6 + params.mu) - 1.0) < 0.01);
  // one group is the scalar equation
  CHECK(ks_two_sample(one_group, scalar).p_value > 0.001);
}

TEST_CASE("discrete groups approach the diffusion") {
  const auto params = uniform_binary();
  std::vector<std::vector<double>> series;  // one per (coordinate, t), in increasing n
  for (int n : {10, 20, 40, 80}) {
    const auto rows = compare_discrete_vs_sde(n, 2, params, 19, {.paths = 20000, .dt = 1e-3, .workers = 1});
    CHECK(rows.size() == 6);
    series.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) series[i].push_back(rows[i].ks);
  }
  for (const auto &s : series) {
    CHECK(count_increases(s) <= 1);
    CHECK(s.back() < s.front());
  }
}

TEST_CASE("group increment statistics") {
  const auto params = uniform_binary();
  const auto stats = group_increment_statistics(100, 2, 2000, params, 20);
  CHECK(stats.steps > 0);
  CHECK(std::abs(stats.drift_residual_mean) < 3.0 * stats.drift_residual_se);
  CHECK(std::abs(stats.cross_variation_mean) < 3.0 * stats.cross_variation_se);
  CHECK_THROWS_AS(group_increment_statistics(100, 1, 10, params, 20), DomainError);
}

TEST_CASE("histogram") {
  const auto h = histogram({0.5, 1.5, 1.7, 9.9, 12.0, -1.0}, 5, 0.0, 10.0);
  CHECK(h.edges.size() == 6);
  CHECK(h.counts == std::vector<std::size_t>{3, 0, 0, 0, 1});
}
