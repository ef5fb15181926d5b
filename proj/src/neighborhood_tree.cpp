#include "gibbstree/neighborhood_tree.hpp"

#include <algorithm>

#include "gibbstree/errors.hpp"

namespace gibbstree {

NeighborhoodTree NeighborhoodTree::from_levels(std::vector<LevelEncoding> levels) {
  if (levels.empty()) throw DomainError("a neighbourhood needs at least one level");
  int prev = 1;
  for (const auto &level : levels) {
    if (level.empty()) throw DomainError("neighbourhood levels must be nonempty");
    if (!attaches_to(prev, level)) throw DomainError("level does not attach to its parent level");
    prev = level.size();
  }
  return NeighborhoodTree(std::move(levels));
}

NeighborhoodTree NeighborhoodTree::from_tree(const PlaneTree &tree) {
  if (tree.order() < 2) throw DomainError("a single vertex has height 0");
  return NeighborhoodTree(tree_levels(tree));
}

NeighborhoodTree NeighborhoodTree::project(const PlaneTree &tree, int n) {
  if (n < 1) throw DomainError("neighbourhood radius must be at least 1");
  auto levels = tree_levels(tree);
  if (static_cast<int>(levels.size()) < n) {
    throw SupportError("tree of height " + std::to_string(levels.size()) +
                       " has no radius-" + std::to_string(n) + " neighbourhood in S_n");
  }
  levels.resize(static_cast<std::size_t>(n));
  return NeighborhoodTree(std::move(levels));
}

int NeighborhoodTree::interior_size() const {
  int m = 1;
  for (std::size_t h = 0; h + 1 < levels_.size(); ++h) m += levels_[h].size();
  return m;
}

std::vector<int> NeighborhoodTree::interior_degree_counts(int D) const {
  std::vector<int> chi(static_cast<std::size_t>(D) + 1, 0);
  int prev = 1;
  for (const auto &level : levels_) {
    for (int c : level.offspring_counts(prev)) {
      if (c > D) {
        throw DomainError("vertex with " + std::to_string(c) + " children exceeds bound " +
                          std::to_string(D));
      }
      ++chi[static_cast<std::size_t>(c)];
    }
    prev = level.size();
  }
  return chi;
}

NeighborhoodStats NeighborhoodTree::stats(const EnergyModel &model) const {
  const auto chi = interior_degree_counts(model.max_degree());
  NeighborhoodStats s{.k = boundary_size(), .m = interior_size(), .energy_bar = 0.0};
  for (std::size_t i = 0; i < chi.size(); ++i) {
    s.energy_bar += chi[i] * model.energies()(static_cast<Eigen::Index>(i));
  }
  return s;
}

namespace {

void offspring_rec(std::vector<int> &cur, std::size_t idx, int sum, int D, int min_sum,
                   int max_sum, const std::function<void(std::span<const int>)> &visit) {
  if (idx == cur.size()) {
    if (sum >= min_sum) visit(cur);
    return;
  }
  const int remaining_slots = static_cast<int>(cur.size() - idx - 1);
  // Prune vectors that cannot reach min_sum.
  const int lowest = std::max(0, min_sum - sum - remaining_slots * D);
  const int highest = std::min(D, max_sum - sum);
  for (int i = lowest; i <= highest; ++i) {
    cur[idx] = i;
    offspring_rec(cur, idx + 1, sum + i, D, min_sum, max_sum, visit);
  }
}

void extend_rec(std::vector<LevelEncoding> &levels, int n, int D, int vertices, int max_vertices,
                const std::function<void(const NeighborhoodTree &)> &visit) {
  if (static_cast<int>(levels.size()) == n) {
    visit(NeighborhoodTree::from_levels(levels));
    return;
  }
  const int parents = levels.empty() ? 1 : levels.back().size();
  const int levels_after = n - static_cast<int>(levels.size()) - 1;
  // Each later level needs at least one vertex.
  const int budget = max_vertices - vertices - levels_after;
  if (budget < 1) return;
  for_each_offspring_vector(parents, D, 1, budget, [&](std::span<const int> counts) {
    levels.push_back(LevelEncoding::from_offspring(counts));
    extend_rec(levels, n, D, vertices + levels.back().size(), max_vertices, visit);
    levels.pop_back();
  });
}

}  // namespace

void for_each_offspring_vector(int k, int D, int min_sum, int max_sum,
                               const std::function<void(std::span<const int>)> &visit) {
  if (k < 0 || D < 0) throw DomainError("negative level size or branching bound");
  std::vector<int> cur(static_cast<std::size_t>(k), 0);
  offspring_rec(cur, 0, 0, D, min_sum, max_sum, visit);
}

void for_each_neighborhood(int n, int D, int max_vertices,
                           const std::function<void(const NeighborhoodTree &)> &visit) {
  if (n < 1) throw DomainError("neighbourhood radius must be at least 1");
  std::vector<LevelEncoding> levels;
  extend_rec(levels, n, D, 1, max_vertices, visit);
}

std::vector<NeighborhoodTree> enumerate_neighborhoods(int n, int D, int max_vertices) {
  std::vector<NeighborhoodTree> out;
  for_each_neighborhood(n, D, max_vertices, [&](const NeighborhoodTree &t) { out.push_back(t); });
  return out;
}

}  // namespace gibbstree
