#ifndef GIBBSTREE_ASYMPTOTICS_HPP_
#define GIBBSTREE_ASYMPTOTICS_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gibbstree/ks.hpp"
#include "gibbstree/markov_tree.hpp"
#include "gibbstree/model.hpp"
#include "gibbstree/numeric.hpp"
#include "gibbstree/random.hpp"

namespace gibbstree {

/// Generating functions of p*:
///   v(s) = sum p*_i e^{si},  w(s) = v'(s),  f(s) = ln v(s),  z(s) = w(s)/v(s) = f'(s).
/// Evaluated through expm1/log1p so that f(s) keeps full relative accuracy for tiny s.
template <typename Scalar>
class LaplaceFunctions {
 public:
  explicit LaplaceFunctions(const CriticalParams &params)
      : p_(params.p_star.cast<Scalar>()) {}

  /// v(s) - 1.
  Scalar v_minus_one(Scalar s) const {
    CompensatedSum<Scalar> acc;
    for (Eigen::Index i = 1; i < p_.size(); ++i) acc += p_(i) * std::expm1(s * Scalar(i));
    return acc.value();
  }
  Scalar v(Scalar s) const { return Scalar(1) + v_minus_one(s); }
  Scalar w(Scalar s) const {
    CompensatedSum<Scalar> acc;
    for (Eigen::Index i = 1; i < p_.size(); ++i) acc += Scalar(i) * p_(i) * std::exp(s * Scalar(i));
    return acc.value();
  }
  Scalar f(Scalar s) const { return std::log1p(v_minus_one(s)); }
  Scalar z(Scalar s) const { return w(s) / v(s); }

 private:
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p_;
};

/// x_{n,k} = f^k(x/n), k = 0..n.
std::vector<long double> laplace_iterates(int n, double x, const CriticalParams &params);

/// L_n(x/n) = E exp((x/n) Y_n) = prod_{k<n} z(x_{n,k}) * exp(x_{n,n}). Throws
/// DomainError for x > 0 or n < 1.
double laplace_exact(int n, double x, const CriticalParams &params);

/// Same quantity from the exact law of Y_n.
double laplace_expectation(int n, double x, const CriticalParams &params);

/// (1 - mu x / 2)^{-2}, the transform of the rescaled Gamma limit.
inline double laplace_limit(double x, double mu) { return 1.0 / std::pow(1.0 - 0.5 * mu * x, 2); }

/// n^2 max_k |x_{n,k} - y_{n,k}| with y_{n,k} = 1 / (n/x - mu k / 2).
double laplace_comparison_constant(int n, double x, const CriticalParams &params);

/// Y_n for `count` independent limit trees; path i uses stream i of `seed`.
std::vector<long long> sample_level_sizes(int n, std::size_t count, const CriticalParams &params,
                                          std::uint64_t seed, unsigned workers = 1);

struct GammaLimitResult {
  KsResult ks;
  double sample_mean = 0.0;           // of (2 / (mu n)) Y_n
  double raw_mean = 0.0;              // of Y_n
  double raw_mean_standard_error = 0.0;
  std::vector<double> scaled;         // (2 / (mu n)) Y_n
};

/// KS test of (2/(mu n)) Y_n against 1 - e^{-t}(1 + t). Requires n >= 1, samples >= 1000.
GammaLimitResult gamma_limit_test(int n, std::size_t samples, const CriticalParams &params,
                                  std::uint64_t seed, unsigned workers = 1);

/// Grid path of an SDE: row j is the state at time t0 + j dt.
struct SdePath {
  double t0 = 0.0;
  double dt = 0.0;
  Eigen::MatrixXd values;
};

/// Euler-Maruyama for dZ = mu dt + sqrt(mu max(Z, 0)) dW, clipped at 0 after each step.
SdePath simulate_besq(double T_end, double dt, const CriticalParams &params, Engine &rng,
                      double z0 = 0.0);

/// Z(T_end) for `paths` independent paths; path i uses stream i of `seed`.
std::vector<double> besq_terminal_values(std::size_t paths, double T_end, double dt,
                                         const CriticalParams &params, std::uint64_t seed,
                                         unsigned workers = 1);

/// One Euler-Maruyama step of the group system
///   dV_i = mu V_i / sum_j V_j dt + sqrt(mu V_i) 1{V_i > 0} dW_i
/// with independent noises and clipping at 0. A fully extinct state gets drift mu / r per group.
void groups_step(Eigen::Ref<Eigen::VectorXd> v, double dt, double mu, Engine &rng);

/// Throws DomainError if v0.size() != r, some v_i < 0 or all v_i = 0.
SdePath simulate_groups(int r, const Eigen::VectorXd &v0, double T_end, double dt,
                        const CriticalParams &params, Engine &rng, double t0 = 0.0);

struct DiscreteVsSdeRow {
  int n = 0;
  int r = 0;
  int coordinate = 0;  // group index, or -1 for the sum over groups
  double t = 0.0;
  double ks = 0.0;
};

struct DiscreteVsSdeOptions {
  std::size_t paths = 20000;
  double dt = 1e-3;
  unsigned workers = 1;
};

/// Two-sample KS distances between V_{i,[nt]}/n of the discrete group-count
/// chain and V_i(t) of the SDE system at t in {0.5, 1}. Groups are fixed at the
/// first level n0 >= n/10 holding at least r vertices (n0 = 0 when r = 1); the
/// SDE path of each sample starts from that sample's V_{n0}/n at time n0/n.
/// Trees with fewer than r vertices at every level up to n/2 are redrawn.
std::vector<DiscreteVsSdeRow> compare_discrete_vs_sde(int n, int r, const CriticalParams &params,
                                                      std::uint64_t seed,
                                                      const DiscreteVsSdeOptions &options = {});

struct GroupIncrementStats {
  std::size_t steps = 0;
  double drift_residual_mean = 0.0;   // dV_1 - mu V_1 / sum V
  double drift_residual_se = 0.0;
  double cross_variation_mean = 0.0;  // dV_1 dV_2
  double cross_variation_se = 0.0;
  double centred_cross_mean = 0.0;    // (dV_1 - b_1)(dV_2 - b_2), reported only
};

/// Per-step increments of the first two group progenies along `trajectories`
/// limit trees of depth n, tracked level by level from the first level with at
/// least r >= 2 vertices. Standard errors treat each trajectory's sum as one
/// independent draw.
GroupIncrementStats group_increment_statistics(int n, int r, std::size_t trajectories,
                                               const CriticalParams &params, std::uint64_t seed,
                                               unsigned workers = 1);

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
};

Histogram histogram(const std::vector<double> &samples, int bins, double lo, double hi);

}  // namespace gibbstree

#endif  // GIBBSTREE_ASYMPTOTICS_HPP_
