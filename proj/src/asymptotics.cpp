#include "gibbstree/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gibbstree/errors.hpp"

namespace gibbstree {

std::vector<long double> laplace_iterates(int n, double x, const CriticalParams &params) {
  if (n < 1) throw DomainError("laplace iteration needs n >= 1");
  if (x > 0.0) throw DomainError("laplace transform is evaluated for x <= 0 only");
  const LaplaceFunctions<long double> fns(params);
  std::vector<long double> xs(static_cast<std::size_t>(n) + 1);
  xs[0] = static_cast<long double>(x) / n;
  for (int k = 1; k <= n; ++k) xs[static_cast<std::size_t>(k)] = fns.f(xs[static_cast<std::size_t>(k - 1)]);
  return xs;
}

double laplace_exact(int n, double x, const CriticalParams &params) {
  const auto xs = laplace_iterates(n, x, params);
  const LaplaceFunctions<long double> fns(params);
  CompensatedSum<long double> log_L;
  for (int k = 0; k < n; ++k) log_L += std::log(fns.z(xs[static_cast<std::size_t>(k)]));
  log_L += xs[static_cast<std::size_t>(n)];
  return static_cast<double>(std::exp(log_L.value()));
}

double laplace_expectation(int n, double x, const CriticalParams &params) {
  if (n < 1) throw DomainError("laplace transform needs n >= 1");
  if (x > 0.0) throw DomainError("laplace transform is evaluated for x <= 0 only");
  const YDistribution dist = exact_Y_distribution(n, params);
  const long double s = static_cast<long double>(x) / n;
  CompensatedSum<long double> acc;
  for (Eigen::Index k = 0; k < dist.probabilities.size(); ++k) {
    acc += static_cast<long double>(dist.probabilities(k)) * std::exp(s * static_cast<long double>(k));
  }
  return static_cast<double>(acc.value());
}

double laplace_comparison_constant(int n, double x, const CriticalParams &params) {
  if (x == 0.0) return 0.0;
  const auto xs = laplace_iterates(n, x, params);
  const long double mu = params.mu;
  long double worst = 0.0L;
  for (int k = 0; k <= n; ++k) {
    const long double y = 1.0L / (static_cast<long double>(n) / x - mu * k / 2.0L);
    worst = std::max(worst, std::abs(xs[static_cast<std::size_t>(k)] - y));
  }
  return static_cast<double>(worst * n * static_cast<long double>(n));
}

std::vector<long long> sample_level_sizes(int n, std::size_t count, const CriticalParams &params,
                                          std::uint64_t seed, unsigned workers) {
  const SizeChainSampler chain(params);
  std::vector<long long> out(count);
  parallel_for(count, workers, [&](std::size_t i) {
    Engine rng = make_engine(seed, i);
    long long y = 1;
    for (int h = 0; h < n; ++h) y = chain.next(y, rng);
    out[i] = y;
  });
  return out;
}

GammaLimitResult gamma_limit_test(int n, std::size_t samples, const CriticalParams &params,
                                  std::uint64_t seed, unsigned workers) {
  if (n < 1) throw DomainError("gamma limit test needs n >= 1");
  if (samples < 1000) throw DomainError("gamma limit test needs at least 1000 samples");
  const auto sizes = sample_level_sizes(n, samples, params, seed, workers);
  GammaLimitResult out;
  const double scale = 2.0 / (params.mu * n);
  out.scaled.reserve(samples);
  CompensatedSum<double> sum, sum_sq;
  for (long long y : sizes) {
    const double yd = static_cast<double>(y);
    out.scaled.push_back(scale * yd);
    sum += yd;
    sum_sq += yd * yd;
  }
  const double m = static_cast<double>(samples);
  out.raw_mean = sum.value() / m;
  const double var = std::max(0.0, (sum_sq.value() - m * out.raw_mean * out.raw_mean) / (m - 1.0));
  out.raw_mean_standard_error = std::sqrt(var / m);
  out.sample_mean = scale * out.raw_mean;
  out.ks = ks_test(out.scaled, gamma2_cdf);
  return out;
}

namespace {

double besq_step(double z, double dt, double mu, double sqrt_dt, double xi) {
  const double next = z + mu * dt + std::sqrt(mu * std::max(z, 0.0)) * sqrt_dt * xi;
  return std::max(next, 0.0);
}

long long step_count(double span, double dt) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (span < 0.0) throw DomainError("negative time span");
  return std::llround(span / dt);
}

}  // namespace

SdePath simulate_besq(double T_end, double dt, const CriticalParams &params, Engine &rng,
                      double z0) {
  if (!(T_end > 0.0)) throw DomainError("end time must be positive");
  const long long steps = step_count(T_end, dt);
  SdePath path{.t0 = 0.0, .dt = dt, .values = Eigen::MatrixXd(steps + 1, 1)};
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_dt = std::sqrt(dt);
  double z = std::max(z0, 0.0);
  path.values(0, 0) = z;
  for (long long j = 1; j <= steps; ++j) {
    z = besq_step(z, dt, params.mu, sqrt_dt, normal(rng));
    path.values(j, 0) = z;
  }
  return path;
}

std::vector<double> besq_terminal_values(std::size_t paths, double T_end, double dt,
                                         const CriticalParams &params, std::uint64_t seed,
                                         unsigned workers) {
  const long long steps = step_count(T_end, dt);
  const double sqrt_dt = std::sqrt(dt);
  std::vector<double> out(paths);
  parallel_for(paths, workers, [&](std::size_t i) {
    Engine rng = make_engine(seed, i);
    std::normal_distribution<double> normal(0.0, 1.0);
    double z = 0.0;
    for (long long j = 0; j < steps; ++j) z = besq_step(z, dt, params.mu, sqrt_dt, normal(rng));
    out[i] = z;
  });
  return out;
}

void groups_step(Eigen::Ref<Eigen::VectorXd> v, double dt, double mu, Engine &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double total = v.sum();
  const double r = static_cast<double>(v.size());
  const double sqrt_dt = std::sqrt(dt);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double xi = normal(rng);
    const double drift = total > 0.0 ? mu * v(i) / total : mu / r;
    const double diffusion = v(i) > 0.0 ? std::sqrt(mu * v(i)) : 0.0;
    v(i) = std::max(0.0, v(i) + drift * dt + diffusion * sqrt_dt * xi);
  }
}

SdePath simulate_groups(int r, const Eigen::VectorXd &v0, double T_end, double dt,
                        const CriticalParams &params, Engine &rng, double t0) {
  if (r < 1 || v0.size() != r) throw DomainError("initial vector must have r entries");
  if ((v0.array() < 0.0).any()) throw DomainError("initial group sizes must be nonnegative");
  if (!(v0.sum() > 0.0)) throw DomainError("initial group sizes are all zero");
  const long long steps = step_count(T_end - t0, dt);
  SdePath path{.t0 = t0, .dt = dt, .values = Eigen::MatrixXd(steps + 1, r)};
  Eigen::VectorXd v = v0;
  path.values.row(0) = v.transpose();
  for (long long j = 1; j <= steps; ++j) {
    groups_step(v, dt, params.mu, rng);
    path.values.row(j) = v.transpose();
  }
  return path;
}

std::vector<DiscreteVsSdeRow> compare_discrete_vs_sde(int n, int r, const CriticalParams &params,
                                                      std::uint64_t seed,
                                                      const DiscreteVsSdeOptions &options) {
  if (n < 2) throw DomainError("comparison needs n >= 2");
  if (r < 1) throw DomainError("need at least one group");
  const OffspringLaw law(params, default_sum_table_cap(params.max_degree()));
  const std::size_t paths = options.paths;
  const int half = n / 2;
  // [path][time index][coordinate]
  std::vector<Eigen::MatrixXd> discrete(paths, Eigen::MatrixXd::Zero(2, r));
  std::vector<Eigen::MatrixXd> sde(paths, Eigen::MatrixXd::Zero(2, r));

  parallel_for(paths, options.workers, [&](std::size_t i) {
    Engine rng = make_engine(seed, 2 * i);
    int level = 0;
    long long y = 1;
    const int earliest = r == 1 ? 0 : (n + 9) / 10;
    for (int attempt = 0; level < earliest || y < r; ++level) {
      if (level >= half) {
        // Redraw trees still below r vertices at n/2; the choice only looks at the past.
        if (++attempt > 1000) throw ResourceError("fewer than r vertices up to level n/2");
        level = -1;
        y = 1;
        continue;
      }
      y = sample_next_size(y, law, rng);
    }
    const GroupLabeling labeling = GroupLabeling::blocks(static_cast<int>(y), r);
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(r);
    for (int l : labeling.labels()) ++counts(l);
    const Eigen::VectorXd start = counts.cast<double>() / n;
    const double t_start = static_cast<double>(level) / n;

    for (int h = level; h < n; ++h) {
      if (h == half) discrete[i].row(0) = counts.cast<double>().transpose() / n;
      counts = sample_next_groups(counts, law, rng);
    }
    if (half == n) discrete[i].row(0) = counts.cast<double>().transpose() / n;
    discrete[i].row(1) = counts.cast<double>().transpose() / n;

    Engine sde_rng = make_engine(seed, 2 * i + 1);
    Eigen::VectorXd v = start;
    const long long first = std::max<long long>(0, std::llround((0.5 - t_start) / options.dt));
    for (long long j = 0; j < first; ++j) groups_step(v, options.dt, params.mu, sde_rng);
    sde[i].row(0) = v.transpose();
    const long long second = std::llround((1.0 - std::max(0.5, t_start)) / options.dt);
    for (long long j = 0; j < second; ++j) groups_step(v, options.dt, params.mu, sde_rng);
    sde[i].row(1) = v.transpose();
  });

  std::vector<DiscreteVsSdeRow> rows;
  const double times[2] = {0.5, 1.0};
  for (int ti = 0; ti < 2; ++ti) {
    for (int c = -1; c < r; ++c) {
      std::vector<double> a(paths), b(paths);
      for (std::size_t i = 0; i < paths; ++i) {
        a[i] = c < 0 ? discrete[i].row(ti).sum() : discrete[i](ti, c);
        b[i] = c < 0 ? sde[i].row(ti).sum() : sde[i](ti, c);
      }
      rows.push_back({n, r, c, times[ti], ks_two_sample(std::move(a), std::move(b)).statistic});
    }
  }
  return rows;
}

GroupIncrementStats group_increment_statistics(int n, int r, std::size_t trajectories,
                                               const CriticalParams &params, std::uint64_t seed,
                                               unsigned workers) {
  if (r < 2) throw DomainError("cross variation needs at least two groups");
  const OffspringLaw law(params);
  struct PerTrajectory {
    double residual = 0.0, cross = 0.0, centred = 0.0;
    std::size_t steps = 0;
  };
  std::vector<PerTrajectory> per(trajectories);
  const double mu = params.mu;

  parallel_for(trajectories, workers, [&](std::size_t i) {
    Engine rng = make_engine(seed, i);
    LevelEncoding level = LevelEncoding::from_parents({1});
    int h = 0;
    while (level.size() < r && h < n) {
      level = sample_next_level(level, law, rng);
      ++h;
    }
    if (level.size() < r) return;
    ProgenyTracker tracker(GroupLabeling::blocks(level.size(), r));
    PerTrajectory acc;
    for (; h < n; ++h) {
      const Eigen::VectorXi before = tracker.counts();
      level = sample_next_level(level, law, rng);
      const Eigen::VectorXi &after = tracker.advance(level);
      const double total = before.sum();
      const double d1 = after(0) - before(0);
      const double d2 = after(1) - before(1);
      const double b1 = mu * before(0) / total;
      const double b2 = mu * before(1) / total;
      acc.residual += d1 - b1;
      acc.cross += d1 * d2;
      acc.centred += (d1 - b1) * (d2 - b2);
      ++acc.steps;
    }
    per[i] = acc;
  });

  GroupIncrementStats out;
  CompensatedSum<double> res, cross, centred;
  for (const auto &p : per) {
    res += p.residual;
    cross += p.cross;
    centred += p.centred;
    out.steps += p.steps;
  }
  const double steps = static_cast<double>(out.steps);
  const double t = static_cast<double>(trajectories);
  out.drift_residual_mean = res.value() / steps;
  out.cross_variation_mean = cross.value() / steps;
  out.centred_cross_mean = centred.value() / steps;
  // Var(sum over trajectories) estimated from the spread of per-trajectory sums.
  auto se_of = [&](double PerTrajectory::*field, double total) {
    const double mean = total / t;
    CompensatedSum<double> ss;
    for (const auto &p : per) {
      const double d = p.*field - mean;
      ss += d * d;
    }
    return std::sqrt(t * ss.value() / (t - 1.0)) / steps;
  };
  out.drift_residual_se = se_of(&PerTrajectory::residual, res.value());
  out.cross_variation_se = se_of(&PerTrajectory::cross, cross.value());
  return out;
}

Histogram histogram(const std::vector<double> &samples, int bins, double lo, double hi) {
  if (bins < 1 || !(hi > lo)) throw DomainError("histogram needs bins >= 1 and hi > lo");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : samples) {
    if (x < lo || x >= hi) continue;
    const auto b = std::min<std::size_t>(static_cast<std::size_t>((x - lo) / (hi - lo) * bins),
                                         static_cast<std::size_t>(bins) - 1);
    ++h.counts[b];
  }
  return h;
}

}  // namespace gibbstree
