#include "gibbstree/markov_tree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gibbstree/errors.hpp"
#include "gibbstree/neighborhood_tree.hpp"
#include "gibbstree/numeric.hpp"

namespace gibbstree {

double level_energy(const LevelEncoding &g, const LevelEncoding &next, const EnergyModel &model) {
  double total = 0.0;
  for (int c : next.offspring_counts(g.size())) total += model.energy(c);
  return total;
}

double transition_log_prob(const LevelEncoding &g, const LevelEncoding &next,
                           const CriticalParams &params) {
  if (g.empty() || next.empty() || !attaches_to(g.size(), next)) return neg_infinity<double>;
  const int D = params.max_degree();
  double energy = 0.0;
  for (int c : next.offspring_counts(g.size())) {
    if (c > D) return neg_infinity<double>;
    energy += params.model.energies()(c);
  }
  const double k = g.size();
  const double k_next = next.size();
  return std::log(k_next / k) - params.model.beta() * energy + (k_next - k) * params.log_rho +
         k * params.log_sigma;
}

double transition_prob(const LevelEncoding &g, const LevelEncoding &next,
                       const CriticalParams &params) {
  return std::exp(transition_log_prob(g, next, params));
}

std::vector<LevelEncoding> enumerate_next_levels(int parent_count, int D) {
  std::vector<LevelEncoding> out;
  for_each_offspring_vector(parent_count, D, 0, parent_count * D, [&](std::span<const int> c) {
    out.push_back(LevelEncoding::from_offspring(c));
  });
  return out;
}

namespace {

Eigen::VectorXd size_biased(const Eigen::VectorXd &p) {
  Eigen::VectorXd h(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) h(i) = static_cast<double>(i) * p(i);
  return h;
}

std::size_t uniform_index(std::size_t n, Engine &rng) {
  const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
  return std::min(i, n - 1);
}

}  // namespace

int default_sum_table_cap(int D) { return static_cast<int>(std::sqrt(8.0e6 / D)); }

OffspringLaw::OffspringLaw(const CriticalParams &params, int sum_table_cap)
    : p_(params.p_star), plain_(params.p_star), biased_(size_biased(params.p_star)) {
  if (sum_table_cap <= 0) return;
  const Eigen::Index D = p_.size() - 1;
  sum_cdf_.resize(static_cast<std::size_t>(sum_table_cap) + 1);
  Eigen::VectorXd conv = Eigen::VectorXd::Ones(1);
  for (int c = 1; c <= sum_table_cap; ++c) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(conv.size() + D);
    for (Eigen::Index s = 0; s < conv.size(); ++s) next.segment(s, D + 1) += conv(s) * p_;
    conv.swap(next);
    auto &row = sum_cdf_[static_cast<std::size_t>(c)];
    row.resize(static_cast<std::size_t>(conv.size()));
    double acc = 0.0;
    for (Eigen::Index s = 0; s < conv.size(); ++s) row[static_cast<std::size_t>(s)] = acc += conv(s);
    for (auto &v : row) v /= acc;
    row.back() = 1.0;
  }
}

long long OffspringLaw::draw_sum(long long count, Engine &rng) const {
  if (count <= 0) return 0;
  if (count < static_cast<long long>(sum_cdf_.size())) {
    const auto &row = sum_cdf_[static_cast<std::size_t>(count)];
    const auto it = std::upper_bound(row.begin(), row.end(), uniform01(rng));
    return std::min<long long>(it - row.begin(), static_cast<long long>(row.size()) - 1);
  }
  long long total = 0;
  if (count < 24) {
    for (long long i = 0; i < count; ++i) total += plain_(rng);
    return total;
  }
  // Sequential binomial split of a multinomial(count; p*) draw.
  const Eigen::Index D = p_.size() - 1;
  long long remaining = count;
  double mass_left = 1.0;
  for (Eigen::Index i = 0; i < D && remaining > 0; ++i) {
    const double q = mass_left > 0.0 ? std::clamp(p_(i) / mass_left, 0.0, 1.0) : 1.0;
    const long long n_i = std::binomial_distribution<long long>(remaining, q)(rng);
    total += static_cast<long long>(i) * n_i;
    remaining -= n_i;
    mass_left -= p_(i);
  }
  total += static_cast<long long>(D) * remaining;
  return total;
}

LevelEncoding sample_next_level(const LevelEncoding &g, const OffspringLaw &law, Engine &rng) {
  if (g.empty()) throw DomainError("cannot extend an empty level");
  const std::size_t k = static_cast<std::size_t>(g.size());
  const std::size_t special = uniform_index(k, rng);
  std::vector<int> counts(k);
  for (std::size_t j = 0; j < k; ++j) {
    counts[j] = j == special ? law.draw_size_biased(rng) : law.draw(rng);
  }
  return LevelEncoding::from_offspring(counts);
}

LevelEncoding sample_next_level(const LevelEncoding &g, const CriticalParams &params, Engine &rng) {
  return sample_next_level(g, OffspringLaw(params), rng);
}

long long sample_next_size(long long k, const OffspringLaw &law, Engine &rng) {
  if (k < 1) throw DomainError("level size must be positive");
  return law.draw_size_biased(rng) + law.draw_sum(k - 1, rng);
}

SizeChainSampler::SizeChainSampler(const CriticalParams &params, int cap) : law_(params) {
  const Eigen::VectorXd &p = params.p_star;
  const Eigen::Index D = p.size() - 1;
  if (cap <= 0) cap = default_sum_table_cap(static_cast<int>(D));
  rows_.resize(static_cast<std::size_t>(cap) + 1);
  Eigen::VectorXd conv = Eigen::VectorXd::Ones(1);
  for (int k = 1; k <= cap; ++k) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(conv.size() + D);
    for (Eigen::Index s = 0; s < conv.size(); ++s) next.segment(s, D + 1) += conv(s) * p;
    conv.swap(next);
    auto &row = rows_[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(conv.size()));
    double acc = 0.0;
    for (Eigen::Index s = 0; s < conv.size(); ++s) {
      acc += static_cast<double>(s) / k * conv(s);
      row[static_cast<std::size_t>(s)] = acc;
    }
    for (auto &c : row) c /= acc;
    row.back() = 1.0;
  }
}

long long SizeChainSampler::next(long long k, Engine &rng) const {
  if (k < 1) throw DomainError("level size must be positive");
  if (k > cap()) return sample_next_size(k, law_, rng);
  const auto &row = rows_[static_cast<std::size_t>(k)];
  const double u = uniform01(rng);
  const auto it = std::upper_bound(row.begin(), row.end(), u);
  return std::min<long long>(it - row.begin(), static_cast<long long>(row.size()) - 1);
}

Eigen::VectorXd offspring_sum_distribution(int k, const CriticalParams &params) {
  if (k < 0) throw DomainError("negative number of summands");
  const Eigen::VectorXd &p = params.p_star;
  const Eigen::Index D = p.size() - 1;
  Eigen::VectorXd dist = Eigen::VectorXd::Ones(1);
  for (int step = 0; step < k; ++step) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(dist.size() + D);
    for (Eigen::Index s = 0; s < dist.size(); ++s) next.segment(s, D + 1) += dist(s) * p;
    dist.swap(next);
  }
  return dist;
}

double size_transition_prob(int k, int k_next, const CriticalParams &params) {
  if (k < 1) throw DomainError("level size must be positive");
  if (k_next < 1 || k_next > k * params.max_degree()) return 0.0;
  return static_cast<double>(k_next) / k * offspring_sum_distribution(k, params)(k_next);
}

YDistribution exact_Y_distribution(int n, const CriticalParams &params, double tail_budget,
                                   int max_states) {
  if (n < 0) throw DomainError("negative number of levels");
  const Eigen::VectorXd &p = params.p_star;
  const Eigen::Index D = p.size() - 1;
  YDistribution out;
  out.probabilities = Eigen::VectorXd::Zero(2);
  out.probabilities(1) = 1.0;
  const double per_step = n > 0 ? tail_budget / n : 0.0;

  // powers[k] = law of a sum of k independent p* draws.
  std::vector<Eigen::VectorXd> powers{Eigen::VectorXd::Ones(1)};
  for (int step = 0; step < n; ++step) {
    const Eigen::Index K = out.probabilities.size() - 1;
    if (K * D + 1 > max_states) {
      throw ResourceError("Y_n support exceeds " + std::to_string(max_states) + " states");
    }
    while (static_cast<Eigen::Index>(powers.size()) <= K) {
      const Eigen::VectorXd &last = powers.back();
      Eigen::VectorXd next = Eigen::VectorXd::Zero(last.size() + D);
      for (Eigen::Index s = 0; s < last.size(); ++s) next.segment(s, D + 1) += last(s) * p;
      powers.push_back(std::move(next));
    }
    Eigen::VectorXd next = Eigen::VectorXd::Zero(K * D + 1);
    for (Eigen::Index k = 1; k <= K; ++k) {
      const double pk = out.probabilities(k);
      if (pk == 0.0) continue;
      const Eigen::VectorXd &conv = powers[static_cast<std::size_t>(k)];
      for (Eigen::Index s = 1; s < conv.size(); ++s) {
        next(s) += pk * static_cast<double>(s) / static_cast<double>(k) * conv(s);
      }
    }
    // Drop the upper tail while it fits in this step's share of the budget.
    Eigen::Index top = next.size() - 1;
    double tail = 0.0;
    while (top > 1 && tail + next(top) <= per_step) {
      tail += next(top);
      --top;
    }
    out.dropped_mass += tail;
    out.probabilities = next.head(top + 1);
  }
  return out;
}

double conditional_moment_exhaustive(int k, int q, const CriticalParams &params) {
  if (k < 1) throw DomainError("level size must be positive");
  const LevelEncoding g = LevelEncoding::from_parents(std::vector<int>(static_cast<std::size_t>(k), 1));
  const int D = params.max_degree();
  CompensatedSum<double> acc;
  for_each_offspring_vector(k, D, 1, k * D, [&](std::span<const int> counts) {
    const LevelEncoding next = LevelEncoding::from_offspring(counts);
    acc += transition_prob(g, next, params) * std::pow(static_cast<double>(next.size()), q);
  });
  return acc.value();
}

double conditional_moment_formula(int k, int q, const CriticalParams &params) {
  const double B2 = params.B(1), B3 = params.B(2), B4 = params.B(3), B5 = params.B(4);
  const double a = k - 1.0, b = k - 2.0, c = k - 3.0, d = k - 4.0;
  switch (q) {
    case 1:
      return params.mu + k;
    case 2:
      return B3 + 3 * a * B2 + a * b;
    case 3:
      return B4 + 4 * a * B3 + 6 * a * b * B2 + 3 * a * B2 * B2 + a * b * c;
    case 4:
      return B5 + 5 * a * B4 + 10 * a * b * B3 + 10 * a * B3 * B2 + 15 * a * b * B2 * B2 +
             10 * a * b * c * B2 + a * b * c * d;
    default:
      throw DomainError("closed forms exist for moments 1..4 only");
  }
}

std::vector<long long> TreeTrajectory::sizes() const {
  std::vector<long long> out{1};
  for (const auto &level : levels) out.push_back(level.size());
  return out;
}

TreeTrajectory sample_trajectory(int n_levels, const CriticalParams &params, std::uint64_t seed,
                                 std::uint64_t stream) {
  TreeTrajectory traj{.levels = {}, .seed = seed, .stream = stream};
  Engine rng = make_engine(seed, stream);
  const OffspringLaw law(params);
  LevelEncoding current = LevelEncoding::from_parents({1});
  traj.levels.reserve(static_cast<std::size_t>(std::max(n_levels, 0)));
  for (int h = 0; h < n_levels; ++h) {
    current = sample_next_level(current, law, rng);
    traj.levels.push_back(current);
  }
  return traj;
}

void write_trajectory(std::ostream &out, const TreeTrajectory &trajectory) {
  out << "# seed " << trajectory.seed << " stream " << trajectory.stream << '\n';
  for (const auto &level : trajectory.levels) out << level.to_string() << '\n';
}

TreeTrajectory read_trajectory(std::istream &in) {
  TreeTrajectory traj;
  std::string line;
  int prev = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream header(line.substr(1));
      std::string key;
      while (header >> key) {
        if (key == "seed") header >> traj.seed;
        if (key == "stream") header >> traj.stream;
      }
      continue;
    }
    LevelEncoding level = LevelEncoding::parse(line);
    if (level.empty() || !attaches_to(prev, level)) {
      throw DomainError("trajectory level does not attach to the previous level");
    }
    prev = level.size();
    traj.levels.push_back(std::move(level));
  }
  return traj;
}

GroupLabeling::GroupLabeling(std::vector<int> labels, int groups)
    : labels_(std::move(labels)), groups_(groups) {
  if (groups_ < 1) throw DomainError("need at least one group");
  std::vector<int> sizes(static_cast<std::size_t>(groups_), 0);
  for (int l : labels_) {
    if (l < 0 || l >= groups_) throw DomainError("group label out of range");
    ++sizes[static_cast<std::size_t>(l)];
  }
  for (int s : sizes) {
    if (s == 0) throw DomainError("every group must be nonempty");
  }
}

GroupLabeling GroupLabeling::blocks(int level_size, int groups) {
  if (groups < 1 || level_size < groups) {
    throw DomainError("cannot split " + std::to_string(level_size) + " vertices into " +
                      std::to_string(groups) + " nonempty groups");
  }
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(level_size));
  const int base = level_size / groups;
  const int extra = level_size % groups;
  for (int gidx = 0; gidx < groups; ++gidx) {
    labels.insert(labels.end(), static_cast<std::size_t>(base + (gidx < extra ? 1 : 0)), gidx);
  }
  return GroupLabeling(std::move(labels), groups);
}

ProgenyTracker::ProgenyTracker(const GroupLabeling &labeling)
    : labels_(labeling.labels()), counts_(Eigen::VectorXi::Zero(labeling.groups())) {
  for (int l : labels_) ++counts_(l);
}

const Eigen::VectorXi &ProgenyTracker::advance(const LevelEncoding &next) {
  if (!attaches_to(level_size(), next)) {
    throw DomainError("level does not attach to the tracked level");
  }
  std::vector<int> labels(static_cast<std::size_t>(next.size()));
  counts_.setZero();
  for (std::size_t j = 0; j < labels.size(); ++j) {
    labels[j] = labels_[static_cast<std::size_t>(next.parents()[j] - 1)];
    ++counts_(labels[j]);
  }
  labels_.swap(labels);
  return counts_;
}

std::vector<Eigen::VectorXi> track_progeny(const TreeTrajectory &trajectory, int n0,
                                           const GroupLabeling &labeling) {
  const auto sizes = trajectory.sizes();
  if (n0 < 0 || n0 >= static_cast<int>(sizes.size())) {
    throw DomainError("labelled level outside the trajectory");
  }
  if (labeling.level_size() != sizes[static_cast<std::size_t>(n0)]) {
    throw DomainError("labeling covers " + std::to_string(labeling.level_size()) +
                      " vertices but level " + std::to_string(n0) + " has " +
                      std::to_string(sizes[static_cast<std::size_t>(n0)]));
  }
  ProgenyTracker tracker(labeling);
  std::vector<Eigen::VectorXi> rows{tracker.counts()};
  for (std::size_t h = static_cast<std::size_t>(n0); h < trajectory.levels.size(); ++h) {
    rows.push_back(tracker.advance(trajectory.levels[h]));
  }
  return rows;
}

Eigen::VectorXi sample_next_groups(const Eigen::VectorXi &counts, const OffspringLaw &law,
                                   Engine &rng) {
  long long total = 0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (counts(i) < 0) throw DomainError("negative group count");
    total += counts(i);
  }
  if (total == 0) throw DomainError("all groups are extinct");
  long long pick = static_cast<long long>(uniform_index(static_cast<std::size_t>(total), rng));
  Eigen::VectorXi next(counts.size());
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    const bool special = pick >= 0 && pick < counts(i);
    pick -= counts(i);
    long long v = law.draw_sum(counts(i) - (special ? 1 : 0), rng);
    if (special) v += law.draw_size_biased(rng);
    next(i) = static_cast<int>(v);
  }
  return next;
}

}  // namespace gibbstree
