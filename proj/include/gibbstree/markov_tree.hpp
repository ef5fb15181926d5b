#ifndef GIBBSTREE_MARKOV_TREE_HPP_
#define GIBBSTREE_MARKOV_TREE_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "gibbstree/level.hpp"
#include "gibbstree/model.hpp"
#include "gibbstree/random.hpp"

namespace gibbstree {

/// E(g, g') = sum over the |g| vertices of g of E_{children in g'}; vertices
/// with no children contribute E_0. Throws DomainError unless g |> g' and
/// every vertex of g has at most D children.
double level_energy(const LevelEncoding &g, const LevelEncoding &next, const EnergyModel &model);

/// Transition law of the level process of the limiting tree,
///   (|g'| / |g|) e^{-beta E(g, g')} rho^{|g'| - |g|} sigma^{|g|}   if g |> g',
/// and 0 otherwise (including an empty g' and bound violations).
double transition_log_prob(const LevelEncoding &g, const LevelEncoding &next,
                           const CriticalParams &params);
double transition_prob(const LevelEncoding &g, const LevelEncoding &next,
                       const CriticalParams &params);

/// Every canonical level g' with g |> g' and out-degrees <= D, for |g| = parent_count.
std::vector<LevelEncoding> enumerate_next_levels(int parent_count, int D);

/// Samplers for p* and for the size-biased law i p*_i.
class OffspringLaw {
 public:
  /// sum_table_cap > 0 tabulates the CDFs of sums of up to that many draws.
  explicit OffspringLaw(const CriticalParams &params, int sum_table_cap = 0);

  int draw(Engine &rng) const { return plain_(rng); }
  int draw_size_biased(Engine &rng) const { return biased_(rng); }
  /// Sum of `count` independent draws from p* (multinomial aggregation).
  long long draw_sum(long long count, Engine &rng) const;

  const Eigen::VectorXd &probabilities() const { return p_; }

 private:
  Eigen::VectorXd p_;
  DiscreteSampler plain_;
  DiscreteSampler biased_;
  std::vector<std::vector<double>> sum_cdf_;  // sum_cdf_[c][s] = P(S_c <= s)
};

/// Table size keeping the tabulated sum or size-chain CDFs near 4M entries.
int default_sum_table_cap(int D);

/// Next level under the Markov kernel: a uniformly chosen vertex of g draws its
/// offspring from the size-biased law, every other vertex from p*.
LevelEncoding sample_next_level(const LevelEncoding &g, const OffspringLaw &law, Engine &rng);
LevelEncoding sample_next_level(const LevelEncoding &g, const CriticalParams &params, Engine &rng);

/// Next level size given k current vertices (same law as |sample_next_level|).
long long sample_next_size(long long k, const OffspringLaw &law, Engine &rng);

/// Exact sampler of the level-size chain. Rows k <= cap of the transition law
/// are tabulated as CDFs (one uniform per step); larger k fall back to the
/// size-biased special vertex plus a multinomial sum of the other k - 1.
class SizeChainSampler {
 public:
  /// cap = 0 picks default_sum_table_cap(D).
  explicit SizeChainSampler(const CriticalParams &params, int cap = 0);

  long long next(long long k, Engine &rng) const;
  int cap() const { return static_cast<int>(rows_.size()) - 1; }

 private:
  OffspringLaw law_;
  std::vector<std::vector<double>> rows_;  // rows_[k][k'] = P(Y' <= k' | Y = k)
};

/// P(S_k = s), s = 0..kD, for S_k a sum of k independent p* draws.
Eigen::VectorXd offspring_sum_distribution(int k, const CriticalParams &params);

/// P(Y_{n+1} = k' | Y_n = k) = (k'/k) P(S_k = k').
double size_transition_prob(int k, int k_next, const CriticalParams &params);

struct YDistribution {
  Eigen::VectorXd probabilities;  // index = level size
  double dropped_mass = 0.0;      // tail mass removed by truncation
};

/// Law of Y_n from Y_0 = 1. Tail states are dropped while the total dropped
/// mass stays below tail_budget; throws ResourceError if the support would
/// exceed max_states.
YDistribution exact_Y_distribution(int n, const CriticalParams &params,
                                   double tail_budget = 1e-12, int max_states = 200000);

/// E[Y_{j+1}^q | Y_j = k] by exhaustive summation of the kernel over offspring vectors.
double conditional_moment_exhaustive(int k, int q, const CriticalParams &params);
/// The closed forms in B_2..B_5 for q = 1..4.
double conditional_moment_formula(int k, int q, const CriticalParams &params);

struct TreeTrajectory {
  std::vector<LevelEncoding> levels;  // levels 1..n
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Y_0..Y_n with Y_0 = 1.
  std::vector<long long> sizes() const;
};

TreeTrajectory sample_trajectory(int n_levels, const CriticalParams &params, std::uint64_t seed,
                                 std::uint64_t stream = 0);

/// One level per line, parent indices separated by single spaces.
void write_trajectory(std::ostream &out, const TreeTrajectory &trajectory);
TreeTrajectory read_trajectory(std::istream &in);

/// Partition of one level's vertices into r nonempty groups (labels 0..r-1).
class GroupLabeling {
 public:
  /// Throws DomainError if some label is out of range or some group is empty.
  GroupLabeling(std::vector<int> labels, int groups);
  /// r contiguous blocks of near-equal size; requires level_size >= r.
  static GroupLabeling blocks(int level_size, int groups);

  int groups() const { return groups_; }
  int level_size() const { return static_cast<int>(labels_.size()); }
  const std::vector<int> &labels() const { return labels_; }

 private:
  std::vector<int> labels_;
  int groups_;
};

/// Follows group membership level by level: every vertex inherits its parent's group.
class ProgenyTracker {
 public:
  explicit ProgenyTracker(const GroupLabeling &labeling);

  /// Throws DomainError if `next` does not attach to the current level.
  const Eigen::VectorXi &advance(const LevelEncoding &next);
  const Eigen::VectorXi &counts() const { return counts_; }
  int level_size() const { return static_cast<int>(labels_.size()); }

 private:
  std::vector<int> labels_;
  Eigen::VectorXi counts_;
};

/// (V_{1,n}, ..., V_{r,n}) for n = n0..end of the trajectory; row 0 is the
/// labelled level itself. Throws DomainError if the labeling does not match
/// the size of level n0.
std::vector<Eigen::VectorXi> track_progeny(const TreeTrajectory &trajectory, int n0,
                                           const GroupLabeling &labeling);

/// One step of the group-count chain: the special vertex lies in group i with
/// probability V_i / sum V; each group's progeny is the sum of its members' offspring.
Eigen::VectorXi sample_next_groups(const Eigen::VectorXi &counts, const OffspringLaw &law,
                                   Engine &rng);

}  // namespace gibbstree

#endif  // GIBBSTREE_MARKOV_TREE_HPP_
