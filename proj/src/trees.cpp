#include "urnflow/trees.hpp"

#include <stdexcept>

namespace urnflow::tree {

std::int32_t DecoratedBinaryTree::find_leaf(std::int32_t label) const {
  for (std::int32_t i = 0; i < node_count(); ++i)
    if (is_leaf(i) && nodes[i].label == label) return i;
  throw std::invalid_argument("DecoratedBinaryTree: no leaf with label " +
                              std::to_string(label));
}

DecoratedBinaryTree single_leaf(std::int32_t label) {
  DecoratedBinaryTree t;
  t.nodes.push_back({-1, -1, -1, label});
  t.root = 0;
  return t;
}

void grow_step(DecoratedBinaryTree& t, std::int32_t chosen, bool new_leaf_left,
               std::int32_t label) {
  std::int32_t parent = t.nodes[chosen].parent;
  std::int32_t internal = t.node_count();
  t.nodes.push_back({parent, -1, -1, 0});
  std::int32_t leaf = t.node_count();
  t.nodes.push_back({internal, -1, -1, label});

  if (new_leaf_left) {
    t.nodes[internal].left = leaf;
    t.nodes[internal].right = chosen;
  } else {
    t.nodes[internal].left = chosen;
    t.nodes[internal].right = leaf;
  }
  t.nodes[chosen].parent = internal;

  if (parent < 0) {
    t.root = internal;
  } else if (t.nodes[parent].left == chosen) {
    t.nodes[parent].left = internal;
  } else {
    t.nodes[parent].right = internal;
  }
}

DecoratedBinaryTree grow(std::int32_t n_leaves, RngStream& rng) {
  if (n_leaves < 1) throw std::domain_error("tree::grow: need at least one leaf");
  DecoratedBinaryTree t = single_leaf(1);
  for (std::int32_t m = 1; m < n_leaves; ++m) {
    std::int32_t chosen =
        static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(t.node_count())));
    bool left = rng.uniform() < 0.5;
    grow_step(t, chosen, left, m + 1);
  }
  return t;
}

std::pair<DecoratedBinaryTree, DecoratedBinaryTree> grow_pair(
    std::int32_t steps, RngStream& rng) {
  DecoratedBinaryTree first = single_leaf(1);
  DecoratedBinaryTree second = single_leaf(0);
  std::int32_t label = 2;
  for (std::int32_t s = 0; s < steps; ++s, ++label) {
    std::uint64_t total = static_cast<std::uint64_t>(first.node_count()) +
                          static_cast<std::uint64_t>(second.node_count());
    std::int64_t pick = static_cast<std::int64_t>(rng.below(total));
    bool left = rng.uniform() < 0.5;
    if (pick < first.node_count())
      grow_step(first, static_cast<std::int32_t>(pick), left, label);
    else
      grow_step(second, static_cast<std::int32_t>(pick - first.node_count()),
                left, label);
  }
  return {first, second};
}

std::vector<DecoratedBinaryTree> enumerate_decorated(std::int32_t n_leaves) {
  if (n_leaves < 1 || n_leaves > 7)
    throw std::domain_error("tree::enumerate_decorated: supported for 1..7 leaves");
  std::vector<DecoratedBinaryTree> current{single_leaf(1)};
  for (std::int32_t m = 1; m < n_leaves; ++m) {
    std::vector<DecoratedBinaryTree> next;
    next.reserve(current.size() * static_cast<std::size_t>(2 * (2 * m - 1)));
    for (const auto& t : current) {
      for (std::int32_t node = 0; node < t.node_count(); ++node) {
        for (int side = 0; side < 2; ++side) {
          DecoratedBinaryTree copy = t;
          grow_step(copy, node, side == 0, m + 1);
          next.push_back(std::move(copy));
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

BigRat construction_probability(std::int32_t n_leaves) {
  BigRat p(1);
  for (std::int32_t m = 1; m < n_leaves; ++m) p /= BigRat(2 * (2 * m - 1));
  return p;
}

BigRat catalan(std::int32_t n) {
  if (n < 0) throw std::domain_error("catalan: n >= 0 required");
  BigRat c(1);
  for (std::int32_t i = 0; i < n; ++i)
    c = c * BigRat(2 * (2 * i + 1)) / BigRat(i + 2);
  return c;
}

namespace {

std::vector<char> spanning_mask(const DecoratedBinaryTree& t,
                                const std::vector<std::int32_t>& leaf_labels) {
  std::vector<char> mark(t.nodes.size(), 0);
  for (std::int32_t label : leaf_labels) {
    std::int32_t v = t.find_leaf(label);
    while (v >= 0 && !mark[static_cast<std::size_t>(v)]) {
      mark[static_cast<std::size_t>(v)] = 1;
      v = t.nodes[v].parent;
    }
  }
  return mark;
}

}  // namespace

std::int32_t spanning_size(const DecoratedBinaryTree& t,
                           const std::vector<std::int32_t>& leaf_labels) {
  auto mark = spanning_mask(t, leaf_labels);
  std::int32_t count = 0;
  for (char m : mark) count += m;
  return count;
}

std::int32_t left_edge_count(const DecoratedBinaryTree& t,
                             const std::vector<std::int32_t>& leaf_labels) {
  auto mark = spanning_mask(t, leaf_labels);
  std::int32_t count = 0;
  for (std::int32_t v = 0; v < t.node_count(); ++v) {
    if (!mark[static_cast<std::size_t>(v)] || v == t.root) continue;
    if (t.nodes[t.nodes[v].parent].left == v) ++count;
  }
  return count;
}

std::vector<std::pair<std::int32_t, std::int32_t>> pair_leaves(
    const DecoratedBinaryTree& t) {
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  for (std::int32_t i = 0; i < t.node_count(); ++i) {
    if (!t.is_leaf(i)) continue;
    std::int32_t v = i;
    while (v != t.root && t.nodes[t.nodes[v].parent].right == v)
      v = t.nodes[v].parent;
    // The root counts as a left child of the ground node.
    pairs.emplace_back(i, v == t.root ? -1 : t.nodes[v].parent);
  }
  return pairs;
}

std::int32_t PlaneTree::find_label(std::int32_t label) const {
  for (std::int32_t i = 0; i < node_count(); ++i)
    if (nodes[i].label == label) return i;
  throw std::invalid_argument("PlaneTree: no node with label " +
                              std::to_string(label));
}

namespace {

void build_plane(const DecoratedBinaryTree& t, std::int32_t bin_node,
                 PlaneTree& p, std::int32_t plane_cur) {
  if (t.is_leaf(bin_node)) {
    p.nodes[plane_cur].label = t.nodes[bin_node].label;
    return;
  }
  std::int32_t child = p.node_count();
  p.nodes.push_back({plane_cur, {}, 0});
  p.nodes[plane_cur].children.push_back(child);
  build_plane(t, t.nodes[bin_node].left, p, child);
  build_plane(t, t.nodes[bin_node].right, p, plane_cur);
}

std::int32_t build_binary(const PlaneTree& p, std::int32_t plane_node,
                          DecoratedBinaryTree& t) {
  // A plane node with children c_1..c_m and label z unfolds into a right
  // spine of m internal nodes whose left subtrees are the children in order,
  // terminated by the leaf carrying z.
  std::int32_t acc = t.node_count();
  t.nodes.push_back({-1, -1, -1, p.nodes[plane_node].label});
  const auto& kids = p.nodes[plane_node].children;
  for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
    std::int32_t left = build_binary(p, *it, t);
    std::int32_t internal = t.node_count();
    t.nodes.push_back({-1, left, acc, 0});
    t.nodes[left].parent = internal;
    t.nodes[acc].parent = internal;
    acc = internal;
  }
  return acc;
}

}  // namespace

PlaneTree binary_to_plane(const DecoratedBinaryTree& t) {
  PlaneTree p;
  p.nodes.push_back({-1, {}, 0});
  p.root = 0;
  build_plane(t, t.root, p, 0);
  return p;
}

DecoratedBinaryTree plane_to_binary(const PlaneTree& p) {
  DecoratedBinaryTree t;
  t.root = -1;
  std::int32_t r = build_binary(p, p.root, t);
  t.root = r;
  return t;
}

std::int32_t plane_spanning_size(const PlaneTree& p,
                                 const std::vector<std::int32_t>& labels) {
  std::vector<char> mark(p.nodes.size(), 0);
  mark[static_cast<std::size_t>(p.root)] = 1;
  for (std::int32_t label : labels) {
    std::int32_t v = p.find_label(label);
    while (v >= 0 && !mark[static_cast<std::size_t>(v)]) {
      mark[static_cast<std::size_t>(v)] = 1;
      v = p.nodes[v].parent;
    }
  }
  std::int32_t count = 0;
  for (char m : mark) count += m;
  return count;
}

namespace {

void format_binary(const DecoratedBinaryTree& t, std::int32_t v, bool shapes,
                   std::string& out) {
  if (t.is_leaf(v)) {
    out += shapes ? "*" : std::to_string(t.nodes[v].label);
    return;
  }
  out += '(';
  format_binary(t, t.nodes[v].left, shapes, out);
  out += ' ';
  format_binary(t, t.nodes[v].right, shapes, out);
  out += ')';
}

void format_plane(const PlaneTree& p, std::int32_t v, std::string& out) {
  out += std::to_string(p.nodes[v].label);
  if (p.nodes[v].children.empty()) return;
  out += '[';
  bool first = true;
  for (std::int32_t c : p.nodes[v].children) {
    if (!first) out += ' ';
    first = false;
    format_plane(p, c, out);
  }
  out += ']';
}

}  // namespace

std::string to_string(const DecoratedBinaryTree& t) {
  std::string out;
  format_binary(t, t.root, false, out);
  return out;
}

std::string shape_string(const DecoratedBinaryTree& t) {
  std::string out;
  format_binary(t, t.root, true, out);
  return out;
}

std::string to_string(const PlaneTree& p) {
  std::string out;
  format_plane(p, p.root, out);
  return out;
}

}  // namespace urnflow::tree
