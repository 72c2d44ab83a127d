#include "urnflow/walks.hpp"

#include <algorithm>
#include <stdexcept>

namespace urnflow::walk {

std::vector<std::int64_t> LatticePath::heights() const {
  std::vector<std::int64_t> h(steps.size() + 1, 0);
  for (std::size_t i = 0; i < steps.size(); ++i) h[i + 1] = h[i] + steps[i];
  return h;
}

std::int64_t LatticePath::height_at(std::int64_t i) const {
  if (i < 0 || i > length())
    throw std::out_of_range("LatticePath::height_at: index out of range");
  std::int64_t h = 0;
  for (std::int64_t t = 0; t < i; ++t) h += steps[static_cast<std::size_t>(t)];
  return h;
}

std::int64_t LatticePath::final_height() const { return height_at(length()); }

bool LatticePath::is(PathClass c) const {
  auto h = heights();
  switch (c) {
    case PathClass::walk:
      return true;
    case PathClass::bridge:
      return h.back() == 0;
    case PathClass::excursion:
      if (h.back() != 0) return false;
      for (std::size_t i = 1; i + 1 < h.size(); ++i)
        if (h[i] <= 0) return false;
      return true;
    case PathClass::meander:
      for (std::size_t i = 1; i < h.size(); ++i)
        if (h[i] <= 0) return false;
      return true;
  }
  return false;
}

PathStats path_stats(const LatticePath& p) {
  PathStats s;
  auto h = p.heights();
  for (std::int64_t v : h)
    if (v == 0) ++s.origin_visits;
  s.final_height = h.back();
  return s;
}

namespace {

void edge_walk(const tree::DecoratedBinaryTree& t, std::int32_t v,
               bool clockwise, std::vector<std::int8_t>& out) {
  if (t.is_leaf(v)) return;
  // Left edges step up, right edges step down, in first-visit order.
  if (!clockwise) {
    out.push_back(+1);
    edge_walk(t, t.nodes[v].left, clockwise, out);
    out.push_back(-1);
    edge_walk(t, t.nodes[v].right, clockwise, out);
  } else {
    out.push_back(-1);
    edge_walk(t, t.nodes[v].right, clockwise, out);
    out.push_back(+1);
    edge_walk(t, t.nodes[v].left, clockwise, out);
  }
}

}  // namespace

LatticePath tree_to_excursion(const tree::DecoratedBinaryTree& t, bool clockwise) {
  LatticePath p;
  p.steps.push_back(clockwise ? -1 : +1);
  edge_walk(t, t.root, clockwise, p.steps);
  p.steps.push_back(clockwise ? +1 : -1);
  return p;
}

namespace {

std::int32_t parse_excursion(const std::vector<std::int8_t>& steps,
                             std::size_t& pos, std::size_t end,
                             tree::DecoratedBinaryTree& t, std::int32_t& label) {
  if (pos >= end || steps[pos] < 0) {
    std::int32_t leaf = t.node_count();
    t.nodes.push_back({-1, -1, -1, label++});
    return leaf;
  }
  ++pos;  // consume the left edge
  std::int32_t left = parse_excursion(steps, pos, end, t, label);
  if (pos >= end || steps[pos] > 0)
    throw std::invalid_argument("excursion_to_tree: malformed step sequence");
  ++pos;  // consume the right edge
  std::int32_t right = parse_excursion(steps, pos, end, t, label);
  std::int32_t internal = t.node_count();
  t.nodes.push_back({-1, left, right, 0});
  t.nodes[left].parent = internal;
  t.nodes[right].parent = internal;
  return internal;
}

}  // namespace

tree::DecoratedBinaryTree excursion_to_tree(const LatticePath& p) {
  if (!p.is(PathClass::excursion) || p.length() < 2)
    throw std::invalid_argument("excursion_to_tree: not an excursion");
  tree::DecoratedBinaryTree t;
  std::size_t pos = 1;  // skip the pinned first step
  std::int32_t label = 1;
  t.root = parse_excursion(p.steps, pos, p.steps.size() - 1, t, label);
  if (pos != p.steps.size() - 1)
    throw std::invalid_argument("excursion_to_tree: malformed step sequence");
  return t;
}

namespace {

tree::DecoratedBinaryTree extract_subtree(const tree::DecoratedBinaryTree& t,
                                          std::int32_t sub_root) {
  tree::DecoratedBinaryTree out;
  // Recursive copy, preserving labels.
  struct Copier {
    const tree::DecoratedBinaryTree& src;
    tree::DecoratedBinaryTree& dst;
    std::int32_t copy(std::int32_t v) {
      std::int32_t idx = dst.node_count();
      dst.nodes.push_back({-1, -1, -1, src.nodes[v].label});
      if (!src.is_leaf(v)) {
        std::int32_t l = copy(src.nodes[v].left);
        std::int32_t r = copy(src.nodes[v].right);
        dst.nodes[idx].left = l;
        dst.nodes[idx].right = r;
        dst.nodes[l].parent = idx;
        dst.nodes[r].parent = idx;
      }
      return idx;
    }
  } copier{t, out};
  out.root = copier.copy(sub_root);
  return out;
}

}  // namespace

LatticePath tree_to_bridge(const tree::DecoratedBinaryTree& t,
                           std::int32_t spine_label) {
  LatticePath bridge;
  if (t.node_count() == 1) return bridge;  // no spine, empty bridge

  std::int32_t leaf = t.find_leaf(spine_label);
  std::vector<std::int32_t> spine;  // internal nodes, leaf side first
  for (std::int32_t v = t.nodes[leaf].parent; v >= 0; v = t.nodes[v].parent)
    spine.push_back(v);
  std::reverse(spine.begin(), spine.end());  // root first

  std::int32_t on_path = leaf;
  // Walk the spine from the root down; each node hangs exactly one subtree
  // off the path.
  for (std::size_t i = 0; i < spine.size(); ++i) {
    std::int32_t s = spine[i];
    std::int32_t down = i + 1 < spine.size() ? spine[i + 1] : on_path;
    std::int32_t hanging = t.nodes[s].left == down ? t.nodes[s].right : t.nodes[s].left;
    bool hangs_left = t.nodes[s].left == hanging;
    auto sub = extract_subtree(t, hanging);
    LatticePath exc = tree_to_excursion(sub, /*clockwise=*/!hangs_left);
    bridge.steps.insert(bridge.steps.end(), exc.steps.begin(), exc.steps.end());
  }
  return bridge;
}

LatticePath bridge_to_meander(const LatticePath& bridge) {
  if (!bridge.is(PathClass::bridge))
    throw std::invalid_argument("bridge_to_meander: not a bridge");
  LatticePath m;
  m.steps.push_back(+1);
  auto h = bridge.heights();
  std::size_t i = 0;
  while (i < bridge.steps.size()) {
    // Maximal excursion [i, j) between consecutive zeros.
    std::size_t j = i + 1;
    while (h[j] != 0) ++j;
    if (bridge.steps[i] > 0) {
      for (std::size_t k = i; k < j; ++k) m.steps.push_back(bridge.steps[k]);
    } else {
      // Absolute value, with the final step flipped upward.
      for (std::size_t k = i; k + 1 < j; ++k)
        m.steps.push_back(static_cast<std::int8_t>(-bridge.steps[k]));
      m.steps.push_back(+1);
    }
    i = j;
  }
  return m;
}

LatticePath meander_to_bridge(const LatticePath& meander) {
  if (meander.length() < 1 || !meander.is(PathClass::meander))
    throw std::invalid_argument("meander_to_bridge: not a meander");
  LatticePath b;
  auto h = meander.heights();
  std::size_t n = meander.steps.size();
  std::size_t i = 1;      // the pinned first step is dropped
  std::int64_t level = 1; // current base level
  while (i < n) {
    // Does the path return to the base level?
    std::size_t ret = 0;
    for (std::size_t j = i + 1; j <= n; ++j) {
      if (h[j] == level) {
        ret = j;
        break;
      }
    }
    if (ret != 0) {
      for (std::size_t k = i; k < ret; ++k) b.steps.push_back(meander.steps[k]);
      i = ret;
    } else {
      // Negative-excursion image: ends one step after the last visit to
      // level + 1.
      std::size_t tau = 0;
      for (std::size_t j = i; j <= n; ++j)
        if (h[j] == level + 1) tau = j;
      if (tau == 0 || tau >= n || meander.steps[tau] != 1)
        throw std::invalid_argument("meander_to_bridge: malformed meander");
      for (std::size_t k = i; k < tau; ++k)
        b.steps.push_back(static_cast<std::int8_t>(-meander.steps[k]));
      b.steps.push_back(+1);
      i = tau + 1;
      level += 2;
    }
  }
  if (!b.is(PathClass::bridge))
    throw std::invalid_argument("meander_to_bridge: result is not a bridge");
  return b;
}

LatticePath trees_to_walk(const tree::DecoratedBinaryTree& t1,
                          const tree::DecoratedBinaryTree& t2, int sign) {
  LatticePath out = tree_to_bridge(t1, 1);
  LatticePath meander = bridge_to_meander(tree_to_bridge(t2, 0));
  for (std::int8_t s : meander.steps)
    out.steps.push_back(sign < 0 ? static_cast<std::int8_t>(-s) : s);
  return out;
}

std::vector<LatticePath> enumerate_paths(PathClass c, int length) {
  if (length < 0 || length > 22)
    throw std::domain_error("walk::enumerate_paths: length capped at 22");
  std::vector<LatticePath> out;
  std::uint64_t total = std::uint64_t{1} << length;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    LatticePath p;
    p.steps.resize(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i)
      p.steps[static_cast<std::size_t>(i)] = ((bits >> i) & 1u) ? 1 : -1;
    if (p.is(c)) out.push_back(std::move(p));
  }
  return out;
}

PathClass path_class_from_name(const std::string& name) {
  if (name == "walk") return PathClass::walk;
  if (name == "bridge") return PathClass::bridge;
  if (name == "excursion") return PathClass::excursion;
  if (name == "meander") return PathClass::meander;
  throw std::invalid_argument("unknown path class: " + name);
}

std::string to_string(const LatticePath& p) {
  std::string s;
  s.reserve(p.steps.size());
  for (std::int8_t step : p.steps) s += step > 0 ? 'U' : 'D';
  return s;
}

LatticePath path_from_string(const std::string& s) {
  LatticePath p;
  p.steps.reserve(s.size());
  for (char c : s) {
    if (c == 'U' || c == 'u')
      p.steps.push_back(+1);
    else if (c == 'D' || c == 'd')
      p.steps.push_back(-1);
    else
      throw std::invalid_argument("path_from_string: expected U/D letters");
  }
  return p;
}

}  // namespace urnflow::walk
