#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "perm.hpp"

namespace chordaut {

/// Identifier of an interned hyperedge or projection node.
using NodeId = int;
/// Interned color token; equal tokens mean equal colors.
using ColorId = int;

/// Global append-only table of nested structures over integer atoms.
/// Structurally equal nodes always receive the same id.
class NodeTable {
 public:
  struct Node {
    int atom = -1;                             // vertex for atoms, -1 otherwise
    int order = 0;
    std::vector<std::pair<NodeId, int>> kids;  // sorted by id, multiplicity >= 1
  };

  static NodeTable& instance() {
    static NodeTable t;
    return t;
  }

  NodeId atom(int v) {
    std::unique_lock lock(mu_);
    auto [it, fresh] = atoms_.emplace(v, static_cast<NodeId>(nodes_.size()));
    if (fresh) nodes_.push_back(Node{v, 0, {}});
    return it->second;
  }

  /// Multiset node; equal children are merged by adding multiplicities.
  NodeId nested(std::vector<std::pair<NodeId, int>> kids) {
    std::sort(kids.begin(), kids.end());
    std::vector<std::pair<NodeId, int>> merged;
    for (auto& [c, m] : kids) {
      if (m <= 0) throw std::invalid_argument("NodeTable: multiplicity must be positive");
      if (!merged.empty() && merged.back().first == c) merged.back().second += m;
      else merged.emplace_back(c, m);
    }
    std::unique_lock lock(mu_);
    auto [it, fresh] = nested_.emplace(merged, static_cast<NodeId>(nodes_.size()));
    if (fresh) {
      int ord = 1;
      for (auto& [c, m] : merged) ord = std::max(ord, nodes_[c].order + 1);
      nodes_.push_back(Node{-1, ord, std::move(merged)});
    }
    return it->second;
  }

  /// Set node: duplicates collapse.
  NodeId set(std::vector<NodeId> kids) {
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    std::vector<std::pair<NodeId, int>> ks;
    for (NodeId c : kids) ks.emplace_back(c, 1);
    return nested(std::move(ks));
  }

  /// Nodes live in a deque, so references stay valid while the table grows.
  const Node& get(NodeId id) const {
    std::shared_lock lock(mu_);
    return nodes_.at(id);
  }

 private:
  NodeTable() = default;
  mutable std::shared_mutex mu_;
  std::deque<Node> nodes_;
  std::map<int, NodeId> atoms_;
  std::map<std::vector<std::pair<NodeId, int>>, NodeId> nested_;
};

/// Global table of color tokens built from strings.
class ColorTable {
 public:
  static ColorTable& instance() {
    static ColorTable t;
    return t;
  }
  ColorId token(const std::string& s) {
    std::unique_lock lock(mu_);
    auto [it, fresh] = ids_.emplace(s, static_cast<ColorId>(names_.size()));
    if (fresh) names_.push_back(s);
    return it->second;
  }
  std::string name(ColorId c) const {
    std::shared_lock lock(mu_);
    return names_.at(c);
  }

 private:
  ColorTable() = default;
  mutable std::shared_mutex mu_;
  std::map<std::string, ColorId> ids_;
  std::vector<std::string> names_;
};

inline NodeId atom(int v) { return NodeTable::instance().atom(v); }
inline NodeId edge_set(std::vector<NodeId> kids) { return NodeTable::instance().set(std::move(kids)); }
inline NodeId vertex_set_edge(const std::vector<int>& vs) {
  std::vector<NodeId> kids;
  for (int v : vs) kids.push_back(atom(v));
  return edge_set(std::move(kids));
}
inline const NodeTable::Node& node(NodeId id) { return NodeTable::instance().get(id); }
inline int node_order(NodeId id) { return node(id).order; }
inline bool is_atom(NodeId id) { return node(id).atom >= 0; }

inline ColorId color(const std::string& s) { return ColorTable::instance().token(s); }

/// Token for a tuple of tokens, tagged to keep tuple kinds apart.
inline ColorId color_tuple(const std::string& tag, const std::vector<ColorId>& parts) {
  std::string s = tag + "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
  return color(s + ")");
}
inline ColorId color_multiset(const std::string& tag, std::vector<ColorId> parts) {
  std::sort(parts.begin(), parts.end());
  return color_tuple(tag + "{}", parts);
}
inline ColorId color_set(const std::string& tag, std::vector<ColorId> parts) {
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  return color_tuple(tag + "set", parts);
}

/// Nested-brace text with children in a canonical (textual) order.
inline std::string to_string(NodeId id) {
  const auto& nd = node(id);
  if (nd.atom >= 0) return std::to_string(nd.atom);
  std::vector<std::string> parts;
  for (auto& [c, m] : nd.kids)
    for (int i = 0; i < m; ++i) parts.push_back(to_string(c));
  std::sort(parts.begin(), parts.end());
  std::string out = "{";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out + "}";
}

/// Atoms occurring anywhere below id.
inline std::vector<int> atoms_of(NodeId id) {
  const auto& nd = node(id);
  if (nd.atom >= 0) return {nd.atom};
  std::vector<int> out;
  for (auto& [c, m] : nd.kids) {
    auto sub = atoms_of(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Multiset projection onto the vertex set marked in `in_u`. Atoms outside are
/// dropped; nested members stay even when their projection is empty.
class Projector {
 public:
  explicit Projector(std::vector<bool> in_u) : in_u_(std::move(in_u)) {}
  NodeId operator()(NodeId id) {
    auto it = memo_.find(id);
    if (it != memo_.end()) return it->second;
    const auto& nd = node(id);
    NodeId out;
    if (nd.atom >= 0) {
      out = nd.atom < static_cast<int>(in_u_.size()) && in_u_[nd.atom] ? id : -1;
    } else {
      std::vector<std::pair<NodeId, int>> kids;
      for (auto& [c, m] : nd.kids) {
        NodeId p = (*this)(c);
        if (p >= 0) kids.emplace_back(p, m);
      }
      out = NodeTable::instance().nested(std::move(kids));
    }
    memo_.emplace(id, out);
    return out;
  }

 private:
  std::vector<bool> in_u_;
  std::unordered_map<NodeId, NodeId> memo_;
};

inline NodeId project(NodeId e, const std::vector<int>& u, int n) {
  std::vector<bool> in(n, false);
  for (int v : u) in[v] = true;
  return Projector(std::move(in))(e);
}

/// Image of a node under a vertex permutation.
class Applier {
 public:
  explicit Applier(const Permutation& g) : g_(g) {}
  NodeId operator()(NodeId id) {
    auto it = memo_.find(id);
    if (it != memo_.end()) return it->second;
    const auto& nd = node(id);
    NodeId out;
    if (nd.atom >= 0) {
      out = atom(g_[nd.atom]);
    } else {
      std::vector<std::pair<NodeId, int>> kids;
      for (auto& [c, m] : nd.kids) kids.emplace_back((*this)(c), m);
      out = NodeTable::instance().nested(std::move(kids));
    }
    memo_.emplace(id, out);
    return out;
  }

 private:
  const Permutation& g_;
  std::unordered_map<NodeId, NodeId> memo_;
};

/// Colored hypergraph of some order over vertices 0..n-1. Edges are distinct
/// interned nodes kept sorted by id.
struct Hypergraph {
  int n = 0;
  std::vector<ColorId> vertex_color;
  std::vector<std::pair<NodeId, ColorId>> edges;

  Hypergraph() = default;
  Hypergraph(int n_, std::vector<ColorId> vc, std::vector<std::pair<NodeId, ColorId>> es)
      : n(n_), vertex_color(std::move(vc)), edges(std::move(es)) {
    if (static_cast<int>(vertex_color.size()) != n) throw std::invalid_argument("Hypergraph: vertex color size");
    normalize();
  }

  /// Sorts edges and rejects duplicates with conflicting colors.
  void normalize() {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (std::size_t i = 1; i < edges.size(); ++i)
      if (edges[i].first == edges[i - 1].first) throw std::invalid_argument("Hypergraph: edge listed with two colors");
  }

  int order() const {
    int k = 0;
    for (auto& [e, c] : edges) k = std::max(k, node_order(e));
    return k;
  }

  bool operator==(const Hypergraph& o) const { return n == o.n && vertex_color == o.vertex_color && edges == o.edges; }

  /// Vertex color classes in ascending color order.
  std::vector<std::vector<int>> classes() const {
    std::map<ColorId, std::vector<int>> by;
    for (int v = 0; v < n; ++v) by[vertex_color[v]].push_back(v);
    std::vector<std::vector<int>> out;
    for (auto& [c, vs] : by) out.push_back(vs);
    return out;
  }

  std::size_t max_class_size() const {
    std::size_t b = 0;
    for (auto& c : classes()) b = std::max(b, c.size());
    return b;
  }

  Hypergraph apply(const Permutation& g) const {
    Applier ap(g);
    std::vector<ColorId> vc(n);
    for (int v = 0; v < n; ++v) vc[g[v]] = vertex_color[v];
    std::vector<std::pair<NodeId, ColorId>> es;
    for (auto& [e, c] : edges) es.emplace_back(ap(e), c);
    return Hypergraph(n, vc, es);
  }

  /// Whether g maps *this onto other, colors included.
  bool is_isomorphism(const Permutation& g, const Hypergraph& other) const {
    return g.size() == n && apply(g) == other;
  }

  std::string debug_string() const {
    std::vector<std::string> parts;
    for (auto& [e, c] : edges) parts.push_back(to_string(e) + ":" + ColorTable::instance().name(c));
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (auto& p : parts) out += p + "\n";
    return out;
  }
};

/// Order-(k-1) hypergraph of the members of the order-k edges, together with
/// the lower-order edges. Atom members become singletons; colors are tag sets.
inline Hypergraph skeleton(const Hypergraph& h) {
  const int k = h.order();
  if (k < 2) throw std::invalid_argument("skeleton: order must be at least 2");
  static const ColorId atom_tag = color("skel-atom");
  static const ColorId member_tag = color("skel-member");
  std::map<NodeId, std::vector<ColorId>> tags;
  for (auto& [e, c] : h.edges) {
    const auto& nd = node(e);
    if (nd.order == k) {
      for (auto& [m, mult] : nd.kids) {
        if (is_atom(m)) tags[edge_set({m})].push_back(atom_tag);
        else tags[m].push_back(member_tag);
      }
    } else {
      tags[e].push_back(color_tuple("skel-low", {c}));
    }
  }
  std::vector<std::pair<NodeId, ColorId>> es;
  for (auto& [e, ts] : tags) es.emplace_back(e, color_set("skel", ts));
  return Hypergraph(h.n, h.vertex_color, es);
}

/// H1 ↑ H2 where vertex i of H2 stands for the i-th edge of H1.
inline Hypergraph compose(const Hypergraph& h1, const Hypergraph& h2) {
  if (h2.n != static_cast<int>(h1.edges.size())) throw std::invalid_argument("compose: vertices of H2 must be the edges of H1");
  std::map<NodeId, NodeId> sub;
  for (int i = 0; i < h2.n; ++i) sub[atom(i)] = h1.edges[i].first;
  std::unordered_map<NodeId, NodeId> memo;
  auto lift = [&](auto&& self, NodeId id) -> NodeId {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const auto& nd = node(id);
    NodeId out;
    if (nd.atom >= 0) {
      out = sub.at(id);
    } else {
      std::vector<std::pair<NodeId, int>> kids;
      for (auto& [c, m] : nd.kids) kids.emplace_back(self(self, c), m);
      out = NodeTable::instance().nested(std::move(kids));
    }
    memo.emplace(id, out);
    return out;
  };
  std::map<NodeId, ColorId> c1;
  for (auto& [e, c] : h1.edges) c1[e] = c;
  std::map<NodeId, ColorId> c2;
  for (auto& [e, c] : h2.edges) c2[lift(lift, e)] = c;
  std::vector<std::pair<NodeId, ColorId>> es;
  for (auto& [e, c] : c1) {
    auto it = c2.find(e);
    es.emplace_back(e, it == c2.end() ? c : color_tuple("cmp0", {c, it->second}));
  }
  for (auto& [e, c] : c2)
    if (!c1.count(e)) es.emplace_back(e, color_tuple("cmp1", {c}));
  return Hypergraph(h1.n, h1.vertex_color, es);
}

/// Projector onto the union of the first i classes.
inline Projector prefix_projector(const std::vector<std::vector<int>>& classes, int i, int n) {
  std::vector<bool> in(n, false);
  for (int j = 0; j < i; ++j)
    for (int v : classes[j]) in[v] = true;
  return Projector(std::move(in));
}

/// Partition of edge indices by projection onto the first i classes. Blocks are
/// listed in order of their first edge.
inline std::vector<std::vector<int>> blocks(const Hypergraph& h, const std::vector<std::vector<int>>& classes, int i) {
  if (i < 0 || i > static_cast<int>(classes.size())) throw std::out_of_range("blocks: level out of range");
  auto pr = prefix_projector(classes, i, h.n);
  std::map<NodeId, int> index;
  std::vector<std::vector<int>> out;
  for (int e = 0; e < static_cast<int>(h.edges.size()); ++e) {
    NodeId key = pr(h.edges[e].first);
    auto [it, fresh] = index.emplace(key, static_cast<int>(out.size()));
    if (fresh) out.emplace_back();
    out[it->second].push_back(e);
  }
  return out;
}

/// A[i]: the block's edges projected onto classes i..m (1-based i), each
/// distinct projection colored by the multiset of original colors.
inline Hypergraph block_hypergraph(const Hypergraph& h, const std::vector<int>& block,
                                   const std::vector<std::vector<int>>& classes, int i) {
  std::vector<bool> in(h.n, false);
  for (int j = std::max(0, i - 1); j < static_cast<int>(classes.size()); ++j)
    for (int v : classes[j]) in[v] = true;
  Projector pr(std::move(in));
  std::map<NodeId, std::vector<ColorId>> cols;
  for (int e : block) cols[pr(h.edges[e].first)].push_back(h.edges[e].second);
  std::vector<std::pair<NodeId, ColorId>> es;
  for (auto& [e, cs] : cols) es.emplace_back(e, color_multiset("blk", cs));
  return Hypergraph(h.n, h.vertex_color, es);
}

}  // namespace chordaut
