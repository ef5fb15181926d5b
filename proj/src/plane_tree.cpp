#include "gibbstree/plane_tree.hpp"

#include <algorithm>

#include "gibbstree/errors.hpp"

namespace gibbstree {

PlaneTree PlaneTree::from_preorder(std::vector<int> degrees) {
  if (degrees.empty()) throw DomainError("empty degree word");
  // A preorder word is valid iff the count of open child slots stays positive
  // until the last vertex, where it reaches zero.
  long long open = 1;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 0) throw DomainError("negative out-degree");
    if (open <= 0) throw DomainError("degree word closes before its end");
    open += degrees[i] - 1;
  }
  if (open != 0) throw DomainError("degree word does not describe a finite tree");
  return PlaneTree(std::move(degrees));
}

PlaneTree PlaneTree::from_subtrees(std::span<const PlaneTree> children) {
  std::vector<int> degrees{static_cast<int>(children.size())};
  for (const auto &child : children) {
    degrees.insert(degrees.end(), child.degrees_.begin(), child.degrees_.end());
  }
  return PlaneTree(std::move(degrees));
}

PlaneTree PlaneTree::parse(std::string_view parens) {
  std::vector<int> degrees;
  std::vector<std::size_t> stack;
  bool closed_root = false;
  for (char c : parens) {
    if (c == '(') {
      if (closed_root) throw DomainError("more than one root in \"" + std::string(parens) + "\"");
      if (!stack.empty()) ++degrees[stack.back()];
      stack.push_back(degrees.size());
      degrees.push_back(0);
    } else if (c == ')') {
      if (stack.empty()) throw DomainError("unbalanced parentheses");
      stack.pop_back();
      if (stack.empty()) closed_root = true;
    } else {
      throw DomainError(std::string("unexpected character '") + c + "' in tree string");
    }
  }
  if (!stack.empty() || degrees.empty()) throw DomainError("unbalanced parentheses");
  return PlaneTree(std::move(degrees));
}

std::string PlaneTree::to_string() const {
  std::string out;
  out.reserve(2 * degrees_.size());
  std::vector<int> pending;  // children still to emit, per open vertex
  for (int d : degrees_) {
    out.push_back('(');
    pending.push_back(d);
    while (!pending.empty() && pending.back() == 0) {
      out.push_back(')');
      pending.pop_back();
      if (!pending.empty()) --pending.back();
    }
  }
  return out;
}

int PlaneTree::height() const {
  int best = 0;
  std::vector<int> pending;
  for (int d : degrees_) {
    best = std::max(best, static_cast<int>(pending.size()));
    pending.push_back(d);
    while (!pending.empty() && pending.back() == 0) {
      pending.pop_back();
      if (!pending.empty()) --pending.back();
    }
  }
  return best;
}

int PlaneTree::max_out_degree() const { return *std::max_element(degrees_.begin(), degrees_.end()); }

std::vector<PlaneTree> PlaneTree::subtrees() const {
  std::vector<PlaneTree> out;
  std::size_t pos = 1;
  for (int c = 0; c < degrees_.front(); ++c) {
    const std::size_t start = pos;
    long long open = 1;
    while (open > 0) {
      open += degrees_[pos] - 1;
      ++pos;
    }
    out.push_back(PlaneTree(std::vector<int>(degrees_.begin() + static_cast<std::ptrdiff_t>(start),
                                             degrees_.begin() + static_cast<std::ptrdiff_t>(pos))));
  }
  return out;
}

std::vector<int> PlaneTree::degree_counts(int D) const {
  std::vector<int> chi(static_cast<std::size_t>(D) + 1, 0);
  for (int d : degrees_) {
    if (d > D) {
      throw DomainError("vertex with " + std::to_string(d) + " children exceeds bound " +
                        std::to_string(D));
    }
    ++chi[static_cast<std::size_t>(d)];
  }
  return chi;
}

namespace {

class TreeEmitter {
 public:
  TreeEmitter(int D, const TreeVisitor &visit) : D_(D), visit_(visit) {}

  void run(int N) {
    emit_tree(N, [this] { visit_(PlaneTree::from_preorder(buffer_)); });
  }

 private:
  using Next = std::function<void()>;

  void emit_tree(int size, const Next &next) {
    const std::size_t mark = buffer_.size();
    if (size == 1) {
      buffer_.push_back(0);
      next();
      buffer_.resize(mark);
      return;
    }
    for (int d = 1; d <= std::min(D_, size - 1); ++d) {
      buffer_.push_back(d);
      std::vector<int> sizes(static_cast<std::size_t>(d), 1);
      for_each_composition(size - 1, sizes, 0, [&] { emit_forest(sizes, 0, next); });
      buffer_.resize(mark);
    }
  }

  void emit_forest(const std::vector<int> &sizes, std::size_t idx, const Next &next) {
    if (idx == sizes.size()) {
      next();
      return;
    }
    emit_tree(sizes[idx], [&] { emit_forest(sizes, idx + 1, next); });
  }

  // Compositions of `total` into sizes.size() positive parts, lexicographic.
  static void for_each_composition(int total, std::vector<int> &sizes, std::size_t idx,
                                   const Next &next) {
    const int parts_left = static_cast<int>(sizes.size() - idx);
    if (parts_left == 1) {
      sizes[idx] = total;
      next();
      return;
    }
    for (int s = 1; s <= total - (parts_left - 1); ++s) {
      sizes[idx] = s;
      for_each_composition(total - s, sizes, idx + 1, next);
    }
  }

  int D_;
  const TreeVisitor &visit_;
  std::vector<int> buffer_;
};

}  // namespace

void for_each_tree(int N, int D, const TreeVisitor &visit, int max_order) {
  if (N < 1) throw DomainError("tree order must be at least 1");
  if (D < 1) throw DomainError("branching bound must be at least 1");
  if (N > max_order) {
    throw ResourceError("enumeration of order " + std::to_string(N) + " exceeds limit " +
                        std::to_string(max_order));
  }
  TreeEmitter(D, visit).run(N);
}

std::vector<PlaneTree> enumerate_trees(int N, int D, int max_order) {
  std::vector<PlaneTree> out;
  for_each_tree(N, D, [&](const PlaneTree &t) { out.push_back(t); }, max_order);
  return out;
}

double tree_energy(const PlaneTree &tree, const EnergyModel &model) {
  const std::vector<int> chi = tree.degree_counts(model.max_degree());
  double total = 0.0;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    total += chi[i] * model.energies()(static_cast<Eigen::Index>(i));
  }
  return total;
}

}  // namespace gibbstree
