#ifndef GIBBSTREE_NEIGHBORHOOD_TREE_HPP_
#define GIBBSTREE_NEIGHBORHOOD_TREE_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gibbstree/level.hpp"
#include "gibbstree/model.hpp"
#include "gibbstree/plane_tree.hpp"

namespace gibbstree {

/// The statistics a radius-n neighbourhood enters the limit law through.
struct NeighborhoodStats {
  int k = 0;                 // vertices at height n
  int m = 0;                 // vertices at height < n
  double energy_bar = 0.0;   // sum of E_deg(v) over vertices with h(v) < n
};

/// A tree of height exactly n, stored as its levels 1..n (all nonempty).
class NeighborhoodTree {
 public:
  /// Throws DomainError if a level is empty or does not attach to the previous one.
  static NeighborhoodTree from_levels(std::vector<LevelEncoding> levels);
  /// Requires tree.height() >= 1 and returns the ball of radius height().
  static NeighborhoodTree from_tree(const PlaneTree &tree);
  /// Ball of radius n around the root; throws SupportError if the tree is shorter than n.
  static NeighborhoodTree project(const PlaneTree &tree, int n);
  static NeighborhoodTree parse(std::string_view parens) { return from_tree(PlaneTree::parse(parens)); }

  int height() const { return static_cast<int>(levels_.size()); }
  int boundary_size() const { return levels_.back().size(); }
  int interior_size() const;
  const std::vector<LevelEncoding> &levels() const { return levels_; }

  /// Out-degree histogram of the vertices strictly below height n.
  std::vector<int> interior_degree_counts(int D) const;
  /// Throws DomainError if an interior vertex exceeds the model's bound.
  NeighborhoodStats stats(const EnergyModel &model) const;

  PlaneTree tree() const { return tree_from_levels(levels_); }
  std::string to_string() const { return tree().to_string(); }

  friend bool operator==(const NeighborhoodTree &, const NeighborhoodTree &) = default;
  friend auto operator<=>(const NeighborhoodTree &, const NeighborhoodTree &) = default;

 private:
  explicit NeighborhoodTree(std::vector<LevelEncoding> levels) : levels_(std::move(levels)) {}
  std::vector<LevelEncoding> levels_;
};

/// Visits every offspring vector (i_1..i_k) in {0..D}^k with sum in
/// [min_sum, max_sum], in lexicographic order.
void for_each_offspring_vector(int k, int D, int min_sum, int max_sum,
                               const std::function<void(std::span<const int>)> &visit);

/// Visits every tree of S_n (height exactly n, out-degrees <= D) with at most
/// `max_vertices` vertices, by extending level encodings one level at a time.
void for_each_neighborhood(int n, int D, int max_vertices,
                           const std::function<void(const NeighborhoodTree &)> &visit);

std::vector<NeighborhoodTree> enumerate_neighborhoods(int n, int D, int max_vertices);

}  // namespace gibbstree

#endif  // GIBBSTREE_NEIGHBORHOOD_TREE_HPP_
