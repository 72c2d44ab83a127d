#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urnflow/trees.hpp"

namespace urnflow::walk {

enum class PathClass { walk, bridge, excursion, meander };

// +/-1 step sequence. Classification is always recomputed from the steps,
// never trusted from a tag.
struct LatticePath {
  std::vector<std::int8_t> steps;

  std::int64_t length() const { return static_cast<std::int64_t>(steps.size()); }
  std::vector<std::int64_t> heights() const;  // S(0) = 0 .. S(n)
  std::int64_t height_at(std::int64_t i) const;
  std::int64_t final_height() const;
  bool is(PathClass c) const;

  bool operator==(const LatticePath& other) const { return steps == other.steps; }
};

struct PathStats {
  std::int64_t origin_visits = 0;  // counts time 0
  std::int64_t final_height = 0;
};
PathStats path_stats(const LatticePath& p);

// Tree with n leaves -> excursion of length 2n: a pinned first +1 and last
// -1 surround the depth-first edge walk where a first-visited left edge
// steps up and a right edge steps down. The clockwise variant visits right
// children first and pins -1 ... +1, producing the mirrored (negative)
// excursion used for subtrees hanging right of a spine.
LatticePath tree_to_excursion(const tree::DecoratedBinaryTree& t,
                              bool clockwise = false);

// Inverse of the counterclockwise map, up to leaf labels; leaves are
// relabeled 1..n in left-to-right order.
tree::DecoratedBinaryTree excursion_to_tree(const LatticePath& p);

// Tree with m+1 leaves -> bridge of length 2m. The spine is the internal
// path from the given leaf up to the root; each spine node contributes the
// excursion of its hanging subtree, positive when the subtree hangs left.
LatticePath tree_to_bridge(const tree::DecoratedBinaryTree& t,
                           std::int32_t spine_label = 1);

// Bridge of length 2n -> meander of length 2n+1: one positive step, then
// the absolute value of the bridge with the last step of every negative
// excursion flipped.
LatticePath bridge_to_meander(const LatticePath& bridge);
LatticePath meander_to_bridge(const LatticePath& meander);

// Pair of trees (total nodes 2n+2) -> walk of length 2n+1: bridge part from
// the first tree, meander part from the second, meander sign from the tag.
LatticePath trees_to_walk(const tree::DecoratedBinaryTree& t1,
                          const tree::DecoratedBinaryTree& t2, int sign);

// All paths of the class with the given length (enumeration oracle).
std::vector<LatticePath> enumerate_paths(PathClass c, int length);

PathClass path_class_from_name(const std::string& name);
std::string to_string(const LatticePath& p);           // U/D letters
LatticePath path_from_string(const std::string& s);

}  // namespace urnflow::walk
