#ifndef GIBBSTREE_LEVEL_HPP_
#define GIBBSTREE_LEVEL_HPP_

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "gibbstree/plane_tree.hpp"

namespace gibbstree {

/// One level of a plane tree: entry l is the (1-based) index of the parent of
/// the l-th vertex of the level within the previous level. Canonical form is
/// nondecreasing, so the children of each parent form a contiguous block.
class LevelEncoding {
 public:
  LevelEncoding() = default;

  /// Throws DomainError unless entries are positive and nondecreasing.
  static LevelEncoding from_parents(std::vector<int> parents);
  /// Level in which parent j (1-based) has counts[j-1] children.
  static LevelEncoding from_offspring(std::span<const int> counts);
  /// Space-separated parent indices, as written in trajectory files.
  static LevelEncoding parse(const std::string &line);

  const std::vector<int> &parents() const { return parents_; }
  int size() const { return static_cast<int>(parents_.size()); }
  bool empty() const { return parents_.empty(); }
  int max_parent() const { return parents_.empty() ? 0 : parents_.back(); }

  /// Children per parent of a previous level holding `parent_count` vertices.
  /// Throws DomainError if the level references a parent beyond that count.
  std::vector<int> offspring_counts(int parent_count) const;

  std::string to_string() const;

  friend bool operator==(const LevelEncoding &, const LevelEncoding &) = default;
  friend auto operator<=>(const LevelEncoding &, const LevelEncoding &) = default;

 private:
  explicit LevelEncoding(std::vector<int> parents) : parents_(std::move(parents)) {}
  std::vector<int> parents_;
};

/// g |> g': every parent index used by `next` addresses one of `parent_count` vertices.
inline bool attaches_to(int parent_count, const LevelEncoding &next) {
  return next.max_parent() <= parent_count;
}

/// Levels 1..height of a finite tree (level 0 is the root).
std::vector<LevelEncoding> tree_levels(const PlaneTree &tree);
/// Inverse of tree_levels; levels[0] hangs off the root. An empty trailing
/// level is allowed and ignored. Throws DomainError on inconsistent levels.
PlaneTree tree_from_levels(std::span<const LevelEncoding> levels);

}  // namespace gibbstree

#endif  // GIBBSTREE_LEVEL_HPP_
