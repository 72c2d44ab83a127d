#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urnflow/rational.hpp"
#include "urnflow/rng.hpp"

namespace urnflow::tree {

// Rooted plane binary tree with labeled leaves, stored as an index arena so
// the grow step (insert an internal node above a chosen node) is O(1).
// Leaves carry labels >= 1; label 0 marks the tag leaf used when a pair of
// trees is grown jointly.
struct DecoratedBinaryTree {
  struct Node {
    std::int32_t parent = -1;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t label = 0;
  };
  std::vector<Node> nodes;
  std::int32_t root = -1;

  bool is_leaf(std::int32_t i) const { return nodes[i].left < 0; }
  std::int32_t node_count() const { return static_cast<std::int32_t>(nodes.size()); }
  std::int32_t leaf_count() const { return (node_count() + 1) / 2; }
  std::int32_t find_leaf(std::int32_t label) const;
};

DecoratedBinaryTree single_leaf(std::int32_t label = 1);

// One grow step: the chosen node (with its subtree) is pushed down under a
// fresh internal node and a new labeled leaf becomes its sibling.
void grow_step(DecoratedBinaryTree& t, std::int32_t chosen, bool new_leaf_left,
               std::int32_t label);

// Uniform decorated binary tree with n leaves: repeatedly pick one of the
// 2m-1 existing nodes and a side, both uniformly.
DecoratedBinaryTree grow(std::int32_t n_leaves, RngStream& rng);

// Joint growth of a pair: each step picks uniformly among all nodes of both
// trees. The second tree starts from the tag leaf (label 0).
std::pair<DecoratedBinaryTree, DecoratedBinaryTree> grow_pair(
    std::int32_t steps, RngStream& rng);

// Every decorated tree arises from exactly one choice sequence, so applying
// all (node, side) choices at each size enumerates each tree once.
std::vector<DecoratedBinaryTree> enumerate_decorated(std::int32_t n_leaves);

// Probability of any single construction path for n leaves:
// prod_{m=1}^{n-1} 1 / (2 (2m - 1)).
BigRat construction_probability(std::int32_t n_leaves);

BigRat catalan(std::int32_t n);

// Nodes in the union of root-to-leaf paths over the given leaf labels.
std::int32_t spanning_size(const DecoratedBinaryTree& t,
                           const std::vector<std::int32_t>& leaf_labels);

// Edges of that spanning tree going from a node to its left child.
std::int32_t left_edge_count(const DecoratedBinaryTree& t,
                             const std::vector<std::int32_t>& leaf_labels);

// Planted-tree pairing: each leaf walks up and is assigned the parent of the
// first left-child on its path; the right-most leaf is assigned the ground
// node (-1). A perfect matching between the n leaves and the n-1 internal
// nodes plus ground.
std::vector<std::pair<std::int32_t, std::int32_t>> pair_leaves(
    const DecoratedBinaryTree& t);

// Ordered tree with labels on every node.
struct PlaneTree {
  struct Node {
    std::int32_t parent = -1;
    std::vector<std::int32_t> children;
    std::int32_t label = 0;
  };
  std::vector<Node> nodes;
  std::int32_t root = -1;

  std::int32_t node_count() const { return static_cast<std::int32_t>(nodes.size()); }
  std::int32_t find_label(std::int32_t label) const;
};

// Depth-first bijection: a first-visited left edge opens a new plane child,
// a first-visited right edge moves back up, leaf labels transfer to the
// current plane node.
PlaneTree binary_to_plane(const DecoratedBinaryTree& t);
DecoratedBinaryTree plane_to_binary(const PlaneTree& p);

// Spanning size in the plane tree of the root plus the nodes carrying the
// given labels.
std::int32_t plane_spanning_size(const PlaneTree& p,
                                 const std::vector<std::int32_t>& labels);

// Leaf = its label, internal = (L R).
std::string to_string(const DecoratedBinaryTree& t);
// Shape only: every label replaced by '*'.
std::string shape_string(const DecoratedBinaryTree& t);
// Nested bracket list: label[children ...].
std::string to_string(const PlaneTree& p);

}  // namespace urnflow::tree
