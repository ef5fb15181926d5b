#ifndef GIBBSTREE_PLANE_TREE_HPP_
#define GIBBSTREE_PLANE_TREE_HPP_

#include <compare>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gibbstree/model.hpp"

namespace gibbstree {

/// Ordered rooted tree stored as its preorder sequence of out-degrees
/// (Lukasiewicz word). Value type; equality is plane-tree equality.
class PlaneTree {
 public:
  /// Single vertex.
  PlaneTree() : degrees_{0} {}

  /// Throws DomainError unless `degrees` is a valid preorder degree word.
  static PlaneTree from_preorder(std::vector<int> degrees);
  /// Root whose ordered subtrees are `children`.
  static PlaneTree from_subtrees(std::span<const PlaneTree> children);
  /// Balanced parentheses, e.g. "(()())" is a root with two leaf children.
  static PlaneTree parse(std::string_view parens);

  std::string to_string() const;

  const std::vector<int> &preorder_degrees() const { return degrees_; }
  int order() const { return static_cast<int>(degrees_.size()); }
  int root_degree() const { return degrees_.front(); }
  int height() const;
  int max_out_degree() const;
  std::vector<PlaneTree> subtrees() const;
  /// chi_i = number of vertices with out-degree i, i = 0..D. Throws DomainError
  /// if some vertex has more than D children.
  std::vector<int> degree_counts(int D) const;

  friend bool operator==(const PlaneTree &, const PlaneTree &) = default;
  friend auto operator<=>(const PlaneTree &, const PlaneTree &) = default;

 private:
  explicit PlaneTree(std::vector<int> degrees) : degrees_(std::move(degrees)) {}
  std::vector<int> degrees_;
};

using TreeVisitor = std::function<void(const PlaneTree &)>;

inline constexpr int kDefaultEnumerationLimit = 16;

/// Visits every plane tree on N vertices with out-degrees <= D exactly once.
/// Canonical order: root degree ascending, then the composition of N - 1 into
/// subtree sizes in lexicographic order, then subtrees recursively in the same
/// order with the first subtree varying slowest. Throws ResourceError when
/// N > max_order.
void for_each_tree(int N, int D, const TreeVisitor &visit,
                   int max_order = kDefaultEnumerationLimit);

std::vector<PlaneTree> enumerate_trees(int N, int D, int max_order = kDefaultEnumerationLimit);

/// sum_v E_{deg(v)}; throws DomainError if a vertex exceeds the model's bound.
double tree_energy(const PlaneTree &tree, const EnergyModel &model);

}  // namespace gibbstree

#endif  // GIBBSTREE_PLANE_TREE_HPP_
