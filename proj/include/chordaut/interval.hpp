#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "hypergraph.hpp"
#include "perm.hpp"
#include "recognition.hpp"

namespace chordaut {

/// Rooted colored tree whose vertex leaves are the vertices of an interval
/// graph. Internal nodes come from the PQ decomposition of the maximal
/// cliques; a Q node is split into two mirrored halves so that reversal is
/// the only symmetry it admits.
struct CanonicalTree {
  struct Node {
    ColorId color = -1;
    std::vector<int> children;
    int parent = -1;
    Vertex leaf = -1;  // graph vertex for vertex leaves
    ColorId code = -1;
  };
  std::vector<Node> nodes;
  int root = -1;
  std::vector<int> leaf_of;          // graph vertex -> node
  std::vector<VertexSet> leaves;     // L(x)

  int add(int parent, const std::string& color) {
    nodes.push_back(Node{chordaut::color(color), {}, parent, -1, -1});
    int id = static_cast<int>(nodes.size()) - 1;
    if (parent >= 0) nodes[parent].children.push_back(id);
    return id;
  }

  ColorId root_code() const { return nodes[root].code; }

  /// Children of x stably sorted by code.
  std::vector<int> sorted_children(int x) const {
    auto ch = nodes[x].children;
    std::stable_sort(ch.begin(), ch.end(), [&](int a, int b) { return nodes[a].code < nodes[b].code; });
    return ch;
  }

  void finalize() {
    leaves.assign(nodes.size(), {});
    std::vector<int> order;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      order.push_back(x);
      for (int c : nodes[x].children) stack.push_back(c);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto& nd = nodes[*it];
      std::vector<ColorId> kids;
      VertexSet l;
      if (nd.leaf >= 0) l.push_back(nd.leaf);
      for (int c : nd.children) {
        kids.push_back(nodes[c].code);
        l.insert(l.end(), leaves[c].begin(), leaves[c].end());
      }
      nd.code = color_tuple("tn", {nd.color, color_multiset("kids", kids)});
      leaves[*it] = sorted_set(std::move(l));
    }
  }
};

namespace detail {

inline std::string range_color(const char* tag, int s, int t) {
  return std::string(tag) + " " + std::to_string(s) + " " + std::to_string(t);
}

/// Extends out with the canonical isomorphism from subtree a of t to subtree b of tp.
inline void tree_iso_map(const CanonicalTree& t, int a, const CanonicalTree& tp, int b, std::vector<int>& out) {
  out[a] = b;
  auto ca = t.sorted_children(a);
  auto cb = tp.sorted_children(b);
  for (std::size_t i = 0; i < ca.size(); ++i) tree_iso_map(t, ca[i], tp, cb[i], out);
}

}  // namespace detail

/// Canonical tree of an interval graph whose vertex v carries color colors[v].
inline CanonicalTree canonical_tree(const Graph& z, const std::vector<int>& colors) {
  if (static_cast<int>(colors.size()) != z.n()) throw std::invalid_argument("canonical_tree: coloring size mismatch");
  if (!is_interval(z)) throw GraphError("canonical_tree: graph is not interval");
  CanonicalTree t;
  t.leaf_of.assign(z.n(), -1);
  if (z.n() == 0) {
    t.root = t.add(-1, "E");
    t.finalize();
    return t;
  }
  auto cliques = maximal_cliques(z);
  auto of = clique_incidence(z.n(), cliques);
  auto pq = *consecutive_structure(static_cast<int>(cliques.size()), of);

  std::vector<int> tnode(pq.nodes.size(), -1);
  std::vector<std::pair<int, int>> halves(pq.nodes.size(), {-1, -1});
  auto build = [&](auto&& self, int px, int parent) -> void {
    const auto& nd = pq.nodes[px];
    using K = PQStructure::Kind;
    int x = t.add(parent, nd.kind == K::Leaf ? "K" : nd.kind == K::P ? "P" : "Q");
    tnode[px] = x;
    if (nd.kind == K::P) {
      for (int c : nd.children) self(self, c, x);
    } else if (nd.kind == K::Q) {
      int hl = t.add(x, "H"), hr = t.add(x, "H");
      halves[px] = {hl, hr};
      const int r = static_cast<int>(nd.children.size());
      for (int p = 1; p <= r; ++p) {
        int w;
        if (2 * p - 1 == r) w = t.add(x, "M");
        else if (2 * p <= r) w = t.add(hl, "W " + std::to_string(p));
        else w = t.add(hr, "W " + std::to_string(r + 1 - p));
        self(self, nd.children[p - 1], w);
      }
    }
  };
  build(build, pq.root, -1);
  t.root = tnode[pq.root];

  // Vertices sharing an attachment point and descriptor hang under one node.
  std::map<std::pair<int, std::string>, int> holders;
  auto holder = [&](int at, const std::string& desc) {
    auto [it, fresh] = holders.emplace(std::pair{at, desc}, -1);
    if (fresh) it->second = t.add(at, desc);
    return it->second;
  };
  for (Vertex v = 0; v < z.n(); ++v) {
    int at;
    if (auto it = pq.node_of.find(of[v]); it != pq.node_of.end()) {
      at = holder(tnode[it->second], "S");
    } else {
      auto rg = pq.range_of(of[v]);
      if (!rg) throw std::logic_error("canonical_tree: clique set of a vertex is not a range");
      auto [qx, s, e] = *rg;
      const int r = static_cast<int>(pq.nodes[qx].children.size());
      std::pair<int, int> fwd{s, e}, bwd{r + 1 - e, r + 1 - s};
      if (fwd < bwd) at = holder(halves[qx].first, detail::range_color("R", fwd.first, fwd.second));
      else if (bwd < fwd) at = holder(halves[qx].second, detail::range_color("R", bwd.first, bwd.second));
      else at = holder(tnode[qx], detail::range_color("RS", s, e));
    }
    int leaf = t.add(at, "v " + std::to_string(colors[v]));
    t.nodes[leaf].leaf = v;
    t.leaf_of[v] = leaf;
  }
  t.finalize();
  return t;
}

inline CanonicalTree canonical_tree(const Graph& z, const Coloring& pi) { return canonical_tree(z, pi.colors()); }

/// Leaf map of a color-preserving isomorphism between the trees, if any.
inline std::optional<std::vector<Vertex>> tree_isomorphism(const CanonicalTree& t, const CanonicalTree& tp) {
  if (t.root_code() != tp.root_code()) return std::nullopt;
  std::vector<int> map(t.nodes.size(), -1);
  detail::tree_iso_map(t, t.root, tp, tp.root, map);
  std::vector<Vertex> out(t.leaf_of.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = tp.nodes[map[t.leaf_of[v]]].leaf;
  return out;
}

/// Generators of the automorphism group of the tree, as node permutations.
inline std::vector<std::vector<int>> tree_automorphism_generators(const CanonicalTree& t) {
  const int nn = static_cast<int>(t.nodes.size());
  std::vector<std::vector<int>> gens;
  auto visit = [&](auto&& self, int x) -> void {
    auto ch = t.sorted_children(x);
    for (std::size_t i = 0; i < ch.size();) {
      std::size_t j = i;
      while (j < ch.size() && t.nodes[ch[j]].code == t.nodes[ch[i]].code) ++j;
      self(self, ch[i]);
      const int m = static_cast<int>(j - i);
      if (m >= 2) {
        std::vector<int> swap(nn), cyc(nn);
        for (int y = 0; y < nn; ++y) swap[y] = cyc[y] = y;
        detail::tree_iso_map(t, ch[i], t, ch[i + 1], swap);
        detail::tree_iso_map(t, ch[i + 1], t, ch[i], swap);
        gens.push_back(std::move(swap));
        if (m >= 3) {
          for (int k = 0; k < m; ++k) detail::tree_iso_map(t, ch[i + k], t, ch[i + (k + 1) % m], cyc);
          gens.push_back(std::move(cyc));
        }
      }
      i = j;
    }
  };
  visit(visit, t.root);
  return gens;
}

/// Automorphism group of a vertex-colored interval graph.
inline PermGroup aut_colored_interval(const Graph& z, const std::vector<int>& colors) {
  auto t = canonical_tree(z, colors);
  std::vector<Permutation> gens;
  for (const auto& np : tree_automorphism_generators(t)) {
    std::vector<int> img(z.n());
    for (Vertex v = 0; v < z.n(); ++v) img[v] = t.nodes[np[t.leaf_of[v]]].leaf;
    if (std::equal(img.begin(), img.end(), t.leaf_of.begin(), [&](int a, int l) { return a == t.nodes[l].leaf; })) continue;
    for (Vertex v = 0; v < z.n(); ++v)
      if (colors[img[v]] != colors[v]) throw std::logic_error("aut_colored_interval: generator breaks colors");
    if (!is_isomorphism(z, z, img)) throw std::logic_error("aut_colored_interval: generator is not an automorphism");
    gens.emplace_back(std::move(img));
  }
  return PermGroup(z.n(), gens);
}

inline PermGroup aut_colored_interval(const Graph& z, const Coloring& pi) { return aut_colored_interval(z, pi.colors()); }

/// Colored isomorphism between interval graphs, if one exists.
inline std::optional<Permutation> iso_colored_interval(const Graph& z, const std::vector<int>& cz, const Graph& zp,
                                                       const std::vector<int>& czp) {
  if (z.n() != zp.n()) return std::nullopt;
  auto m = tree_isomorphism(canonical_tree(z, cz), canonical_tree(zp, czp));
  if (!m) return std::nullopt;
  return Permutation(*m);
}

/// H_Y for a component Y of X minus a vertex set: a hypergraph on the boundary
/// of Y whose isomorphisms are the boundary restrictions of closure isomorphisms.
struct BoundaryHypergraph {
  struct Edge {
    VertexSet vertices;      // global ids, a subset of the boundary
    ColorId color = -1;
    std::vector<int> chain;  // tree nodes with this leaf set, bottom to top
  };
  VertexSet component;
  VertexSet boundary;
  InducedView closure;
  std::vector<int> closure_colors;  // global color ids, by closure-local vertex
  CanonicalTree tree;
  std::vector<bool> kept;           // nodes of the pruned tree
  std::vector<ColorId> pruned_color;
  std::vector<Edge> edges;          // sorted by vertex set

  /// Isomorphism type of the colored closure.
  ColorId closure_type() const { return tree.root_code(); }

  int edge_index(const VertexSet& vs) const {
    auto it = std::lower_bound(edges.begin(), edges.end(), vs, [](const Edge& e, const VertexSet& k) { return e.vertices < k; });
    return it != edges.end() && it->vertices == vs ? static_cast<int>(it - edges.begin()) : -1;
  }

  /// Edge list over global vertex ids, comparable across components.
  std::vector<std::pair<VertexSet, ColorId>> signature() const {
    std::vector<std::pair<VertexSet, ColorId>> out;
    for (const auto& e : edges) out.emplace_back(e.vertices, e.color);
    return out;
  }

  /// The hypergraph on boundary positions 0..|∂Y|-1.
  Hypergraph local(const std::vector<int>& global_colors) const {
    std::vector<ColorId> vc;
    for (Vertex b : boundary) vc.push_back(color("c " + std::to_string(global_colors[b])));
    std::vector<std::pair<NodeId, ColorId>> es;
    for (const auto& e : edges) {
      std::vector<int> loc;
      for (Vertex v : e.vertices) loc.push_back(static_cast<int>(std::lower_bound(boundary.begin(), boundary.end(), v) - boundary.begin()));
      es.emplace_back(vertex_set_edge(loc), e.color);
    }
    return Hypergraph(static_cast<int>(boundary.size()), vc, es);
  }
};

/// Builds H_Y for the vertex set y of a component of X minus some set of vertices.
inline BoundaryHypergraph boundary_hypergraph(const Graph& x, const std::vector<int>& colors, const VertexSet& y) {
  BoundaryHypergraph hy;
  hy.component = sorted_set(y);
  auto [bd, view] = boundary_and_closure(x, hy.component);
  hy.boundary = bd;
  hy.closure = std::move(view);
  for (Vertex p : hy.closure.to_parent) hy.closure_colors.push_back(colors[p]);
  if (!is_interval(hy.closure.graph)) throw GraphError("boundary_hypergraph: closure is not interval");
  hy.tree = canonical_tree(hy.closure.graph, hy.closure_colors);
  const auto& t = hy.tree;
  const int nn = static_cast<int>(t.nodes.size());

  std::vector<bool> is_boundary(hy.closure.graph.n(), false);
  for (Vertex b : hy.boundary) is_boundary[hy.closure.local(b)] = true;
  // Leaf sets in the pruned tree, as global boundary vertices.
  std::vector<VertexSet> l1(nn);
  hy.kept.assign(nn, false);
  for (int z = 0; z < nn; ++z) {
    for (Vertex v : t.leaves[z])
      if (is_boundary[v]) l1[z].push_back(hy.closure.parent(v));
    l1[z] = sorted_set(l1[z]);
    hy.kept[z] = !l1[z].empty();
  }
  // Removed subtrees survive in their kept parent's color.
  hy.pruned_color.assign(nn, -1);
  for (int z = 0; z < nn; ++z) {
    if (!hy.kept[z]) continue;
    std::vector<ColorId> removed;
    for (int c : t.nodes[z].children)
      if (!hy.kept[c]) removed.push_back(t.nodes[c].code);
    hy.pruned_color[z] = color_tuple("t1", {t.nodes[z].color, color_multiset("rm", removed)});
  }
  std::vector<int> depth(nn, 0);
  for (int z = 0; z < nn; ++z)
    for (int p = t.nodes[z].parent; p >= 0; p = t.nodes[p].parent) ++depth[z];
  std::map<VertexSet, std::vector<int>> by_set;
  for (int z = 0; z < nn; ++z)
    if (hy.kept[z]) by_set[l1[z]].push_back(z);
  for (auto& [vs, chain] : by_set) {
    std::sort(chain.begin(), chain.end(), [&](int a, int b) { return depth[a] > depth[b]; });
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      if (t.nodes[chain[i]].parent != chain[i + 1]) throw std::logic_error("boundary_hypergraph: equal leaf sets off a path");
    std::vector<ColorId> cs;
    for (int z : chain) cs.push_back(hy.pruned_color[z]);
    hy.edges.push_back({vs, color_tuple("hy", cs), chain});
  }
  return hy;
}

/// Extends a boundary isomorphism H_Y -> H_Y' to the closures. gbar[i] is the
/// image of the i-th boundary vertex of Y. The result maps each closure-local
/// vertex of Y to a global vertex of the closure of Y'.
inline std::vector<Vertex> lift_boundary_iso(const BoundaryHypergraph& hy, const BoundaryHypergraph& hyp,
                                             const std::vector<Vertex>& gbar) {
  if (gbar.size() != hy.boundary.size() || hy.edges.size() != hyp.edges.size() || hy.closure_type() != hyp.closure_type())
    throw std::invalid_argument("lift_boundary_iso: not a hypergraph isomorphism");
  std::map<Vertex, Vertex> gb;
  for (std::size_t i = 0; i < gbar.size(); ++i) gb[hy.boundary[i]] = gbar[i];
  const auto& t = hy.tree;
  const auto& tp = hyp.tree;
  std::vector<int> map(t.nodes.size(), -1);
  for (const auto& e : hy.edges) {
    VertexSet img;
    for (Vertex v : e.vertices) img.push_back(gb.at(v));
    int j = hyp.edge_index(sorted_set(img));
    if (j < 0 || hyp.edges[j].color != e.color) throw std::invalid_argument("lift_boundary_iso: not a hypergraph isomorphism");
    for (std::size_t k = 0; k < e.chain.size(); ++k) map[e.chain[k]] = hyp.edges[j].chain[k];
  }
  // Pruned subtrees are matched by code under each kept node.
  for (int z = 0; z < static_cast<int>(t.nodes.size()); ++z) {
    if (!hy.kept[z]) continue;
    std::vector<int> rem, remp;
    for (int c : t.sorted_children(z))
      if (!hy.kept[c]) rem.push_back(c);
    for (int c : tp.sorted_children(map[z]))
      if (!hyp.kept[c]) remp.push_back(c);
    if (rem.size() != remp.size()) throw std::logic_error("lift_boundary_iso: pruned parts differ");
    for (std::size_t i = 0; i < rem.size(); ++i) detail::tree_iso_map(t, rem[i], tp, remp[i], map);
  }
  const int n = hy.closure.graph.n();
  std::vector<Vertex> out(n);
  std::vector<int> local(n);
  for (Vertex v = 0; v < n; ++v) {
    Vertex w = tp.nodes[map[t.leaf_of[v]]].leaf;
    local[v] = w;
    out[v] = hyp.closure.parent(w);
    if (hy.closure_colors[v] != hyp.closure_colors[w]) throw std::logic_error("lift_boundary_iso: colors not preserved");
  }
  if (!is_isomorphism(hy.closure.graph, hyp.closure.graph, local)) throw std::logic_error("lift_boundary_iso: lift is not an isomorphism");
  for (std::size_t i = 0; i < gbar.size(); ++i)
    if (out[hy.closure.local(hy.boundary[i])] != gbar[i]) throw std::logic_error("lift_boundary_iso: lift disagrees on the boundary");
  return out;
}

}  // namespace chordaut
