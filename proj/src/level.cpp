#include "gibbstree/level.hpp"

#include <sstream>

#include "gibbstree/errors.hpp"

namespace gibbstree {

LevelEncoding LevelEncoding::from_parents(std::vector<int> parents) {
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (parents[i] < 1) throw DomainError("parent indices are 1-based and positive");
    if (i > 0 && parents[i] < parents[i - 1]) {
      throw DomainError("parent indices must be nondecreasing");
    }
  }
  return LevelEncoding(std::move(parents));
}

LevelEncoding LevelEncoding::from_offspring(std::span<const int> counts) {
  std::vector<int> parents;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] < 0) throw DomainError("negative offspring count");
    parents.insert(parents.end(), static_cast<std::size_t>(counts[j]), static_cast<int>(j) + 1);
  }
  return LevelEncoding(std::move(parents));
}

LevelEncoding LevelEncoding::parse(const std::string &line) {
  std::istringstream in(line);
  std::vector<int> parents;
  int v = 0;
  while (in >> v) parents.push_back(v);
  if (!in.eof()) throw DomainError("malformed level line \"" + line + "\"");
  return from_parents(std::move(parents));
}

std::vector<int> LevelEncoding::offspring_counts(int parent_count) const {
  if (!attaches_to(parent_count, *this)) {
    throw DomainError("level references parent " + std::to_string(max_parent()) +
                      " but the previous level has " + std::to_string(parent_count) +
                      " vertices");
  }
  std::vector<int> counts(static_cast<std::size_t>(parent_count), 0);
  for (int p : parents_) ++counts[static_cast<std::size_t>(p - 1)];
  return counts;
}

std::string LevelEncoding::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < parents_.size(); ++i) {
    if (i) out.push_back(' ');
    out += std::to_string(parents_[i]);
  }
  return out;
}

std::vector<LevelEncoding> tree_levels(const PlaneTree &tree) {
  // Breadth-first over the preorder word: record each vertex's degree per level.
  const auto &deg = tree.preorder_degrees();
  std::vector<std::vector<int>> level_degrees;
  std::vector<int> depth_stack;  // remaining children for each open ancestor
  for (int d : deg) {
    const std::size_t depth = depth_stack.size();
    if (level_degrees.size() <= depth) level_degrees.resize(depth + 1);
    level_degrees[depth].push_back(d);
    depth_stack.push_back(d);
    while (!depth_stack.empty() && depth_stack.back() == 0) {
      depth_stack.pop_back();
      if (!depth_stack.empty()) --depth_stack.back();
    }
  }
  // Preorder visits each level left to right, so level_degrees[h] is in plane order.
  std::vector<LevelEncoding> levels;
  for (std::size_t h = 0; h + 1 < level_degrees.size(); ++h) {
    levels.push_back(LevelEncoding::from_offspring(level_degrees[h]));
  }
  return levels;
}

namespace {

void emit_preorder(const std::vector<std::vector<int>> &counts,
                   const std::vector<std::vector<int>> &first_child, std::size_t h, int v,
                   std::vector<int> &out) {
  const int d = h < counts.size() ? counts[h][static_cast<std::size_t>(v)] : 0;
  out.push_back(d);
  for (int c = 0; c < d; ++c) {
    emit_preorder(counts, first_child, h + 1, first_child[h][static_cast<std::size_t>(v)] + c, out);
  }
}

}  // namespace

PlaneTree tree_from_levels(std::span<const LevelEncoding> levels) {
  std::vector<std::vector<int>> counts;
  std::vector<std::vector<int>> first_child;
  int prev = 1;
  for (std::size_t h = 0; h < levels.size(); ++h) {
    if (levels[h].empty()) {
      if (h + 1 != levels.size()) throw DomainError("empty level before the last level");
      break;
    }
    auto c = levels[h].offspring_counts(prev);
    std::vector<int> offs(c.size());
    int acc = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      offs[j] = acc;
      acc += c[j];
    }
    counts.push_back(std::move(c));
    first_child.push_back(std::move(offs));
    prev = levels[h].size();
  }
  std::vector<int> pre;
  emit_preorder(counts, first_child, 0, 0, pre);
  return PlaneTree::from_preorder(std::move(pre));
}

}  // namespace gibbstree
