#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chordaut {

using Vertex = int;
using VertexSet = std::vector<Vertex>;  // sorted, duplicate-free

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a structural property the algorithms rely on fails on an input.
class StructuralViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(n), matrix_(static_cast<std::size_t>(n) * n, 0) {}

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    Graph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    g.finalize();
    return g;
  }

  int n() const { return static_cast<int>(adj_.size()); }
  const VertexSet& neighbors(Vertex v) const { return adj_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
  bool adjacent(Vertex u, Vertex v) const {
    return matrix_[static_cast<std::size_t>(u) * n() + v] != 0;
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& a : adj_) m += a.size();
    return m / 2;
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n(); ++u)
      for (int v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool operator==(const Graph& o) const { return adj_ == o.adj_; }

  /// Graph with vertex v renamed to perm[v].
  Graph relabeled(const std::vector<int>& perm) const {
    std::vector<std::pair<int, int>> es;
    for (auto [u, v] : edges()) es.emplace_back(perm[u], perm[v]);
    return from_edges(n(), es);
  }

 private:
  void add_edge(int u, int v) {
    if (u < 0 || v < 0 || u >= n() || v >= n())
      throw GraphError("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    if (adjacent(u, v)) return;
    matrix_[static_cast<std::size_t>(u) * n() + v] = 1;
    matrix_[static_cast<std::size_t>(v) * n() + u] = 1;
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  void finalize() {
    for (auto& a : adj_) std::sort(a.begin(), a.end());
  }

  std::vector<VertexSet> adj_;
  std::vector<std::uint8_t> matrix_;
};

/// Ordered partition of 0..n-1 into color classes. Color ids are dense and
/// their numeric order is the color order.
class Coloring {
 public:
  Coloring() = default;

  /// Densifies arbitrary labels, keeping their relative order.
  template <typename Label>
  static Coloring from_labels(const std::vector<Label>& labels) {
    std::vector<Label> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Coloring c;
    c.class_of_.resize(labels.size());
    c.classes_.resize(sorted.size());
    for (std::size_t v = 0; v < labels.size(); ++v) {
      int id = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), labels[v]) - sorted.begin());
      c.class_of_[v] = id;
      c.classes_[id].push_back(static_cast<int>(v));
    }
    return c;
  }

  static Coloring uniform(int n) { return from_labels(std::vector<int>(n, 0)); }
  static Coloring discrete(int n) {
    std::vector<int> l(n);
    std::iota(l.begin(), l.end(), 0);
    return from_labels(l);
  }

  int n() const { return static_cast<int>(class_of_.size()); }
  int size() const { return static_cast<int>(classes_.size()); }
  int color(Vertex v) const { return class_of_[v]; }
  const std::vector<int>& colors() const { return class_of_; }
  const VertexSet& cls(int c) const { return classes_[c]; }
  const std::vector<VertexSet>& classes() const { return classes_; }
  std::size_t max_class_size() const {
    std::size_t m = 0;
    for (const auto& c : classes_) m = std::max(m, c.size());
    return m;
  }

  /// Same partition, ignoring color ids.
  bool same_partition(const Coloring& o) const {
    if (n() != o.n() || size() != o.size()) return false;
    std::map<int, int> fwd;
    for (int v = 0; v < n(); ++v) {
      auto [it, fresh] = fwd.emplace(class_of_[v], o.class_of_[v]);
      if (!fresh && it->second != o.class_of_[v]) return false;
    }
    return true;
  }

  /// Every class of *this lies inside one class of coarser.
  bool refines(const Coloring& coarser) const {
    std::vector<int> seen(size(), -1);
    for (int v = 0; v < n(); ++v) {
      int& s = seen[class_of_[v]];
      if (s == -1) s = coarser.color(v);
      else if (s != coarser.color(v)) return false;
    }
    return true;
  }

  bool operator==(const Coloring& o) const { return class_of_ == o.class_of_; }

 private:
  std::vector<int> class_of_;
  std::vector<VertexSet> classes_;
};

/// A subgraph of a parent graph together with the index maps both ways.
struct InducedView {
  Graph graph;
  std::vector<Vertex> to_parent;  // local -> parent
  std::vector<Vertex> to_local;   // parent -> local, -1 when absent

  Vertex local(Vertex parent_v) const { return to_local[parent_v]; }
  Vertex parent(Vertex local_v) const { return to_parent[local_v]; }
};

inline VertexSet sorted_set(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(const VertexSet& s, Vertex v) { return std::binary_search(s.begin(), s.end(), v); }

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// X_{Δ,Γ}: vertex set Δ ∪ Γ, keeping the edges with one end in Δ and the other in Γ.
inline InducedView bipartite_between(const Graph& g, const VertexSet& delta, const VertexSet& gamma) {
  InducedView view;
  view.to_parent = set_union(delta, gamma);
  view.to_local.assign(g.n(), -1);
  for (std::size_t i = 0; i < view.to_parent.size(); ++i) view.to_local[view.to_parent[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> es;
  for (std::size_t i = 0; i < view.to_parent.size(); ++i) {
    Vertex u = view.to_parent[i];
    for (Vertex v : g.neighbors(u)) {
      if (v <= u || view.to_local[v] < 0) continue;
      bool keep = (contains(delta, u) && contains(gamma, v)) || (contains(gamma, u) && contains(delta, v));
      if (keep) es.emplace_back(static_cast<int>(i), view.to_local[v]);
    }
  }
  view.graph = Graph::from_edges(static_cast<int>(view.to_parent.size()), es);
  return view;
}

inline InducedView induced(const Graph& g, const VertexSet& vs) { return bipartite_between(g, vs, vs); }

/// ∂Δ (vertices outside Δ with a neighbour in Δ) and the subgraph induced on Δ ∪ ∂Δ.
inline std::pair<VertexSet, InducedView> boundary_and_closure(const Graph& g, const VertexSet& delta) {
  VertexSet boundary;
  for (Vertex u : delta)
    for (Vertex v : g.neighbors(u))
      if (!contains(delta, v)) boundary.push_back(v);
  boundary = sorted_set(std::move(boundary));
  return {boundary, induced(g, set_union(delta, boundary))};
}

/// Connected components, each sorted, listed by minimum vertex.
inline std::vector<VertexSet> components(const Graph& g) {
  std::vector<int> comp(g.n(), -1);
  std::vector<VertexSet> out;
  for (int s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    VertexSet cur{s};
    comp[s] = static_cast<int>(out.size());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (Vertex w : g.neighbors(cur[i]))
        if (comp[w] < 0) {
          comp[w] = comp[s];
          cur.push_back(w);
        }
    std::sort(cur.begin(), cur.end());
    out.push_back(std::move(cur));
  }
  return out;
}

/// Components of the subgraph induced on vs, in parent vertex ids.
inline std::vector<VertexSet> components_of(const Graph& g, const VertexSet& vs) {
  InducedView view = induced(g, vs);
  std::vector<VertexSet> out;
  for (auto& c : components(view.graph)) {
    VertexSet p;
    for (Vertex v : c) p.push_back(view.parent(v));
    out.push_back(sorted_set(std::move(p)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_complete(const Graph& g, const VertexSet& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (!g.adjacent(vs[i], vs[j])) return false;
  return true;
}

inline bool is_independent(const Graph& g, const VertexSet& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (g.adjacent(vs[i], vs[j])) return false;
  return true;
}

/// Every vertex other than a and b is adjacent to both or to neither.
inline bool are_twins(const Graph& g, Vertex a, Vertex b) {
  for (Vertex w = 0; w < g.n(); ++w) {
    if (w == a || w == b) continue;
    if (g.adjacent(a, w) != g.adjacent(b, w)) return false;
  }
  return true;
}

/// Maximal sets of pairwise twins. With a coloring, only equally colored
/// vertices are merged. The relation is verified to be transitive on the
/// produced classes, and each class must induce a complete or empty graph.
inline Coloring twin_classes(const Graph& g, const Coloring* pi = nullptr) {
  const int n = g.n();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if ((!pi || pi->color(a) == pi->color(b)) && are_twins(g, a, b)) parent[find(a)] = find(b);
  std::vector<int> root(n);
  for (int v = 0; v < n; ++v) root[v] = find(v);
  // Label classes by their minimum vertex so ids follow vertex order.
  std::vector<int> min_of(n, n);
  for (int v = 0; v < n; ++v) min_of[root[v]] = std::min(min_of[root[v]], v);
  std::vector<int> labels(n);
  for (int v = 0; v < n; ++v) labels[v] = min_of[root[v]];
  Coloring classes = Coloring::from_labels(labels);
  for (const auto& c : classes.classes()) {
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j)
        if (!are_twins(g, c[i], c[j]))
          throw StructuralViolation("twin relation is not transitive on class containing " + std::to_string(c[0]));
    if (!is_complete(g, c) && !is_independent(g, c))
      throw StructuralViolation("twin class neither complete nor empty");
  }
  return classes;
}

/// Whether img (a bijection given by its image array) maps g onto h edge for edge.
inline bool is_isomorphism(const Graph& g, const Graph& h, const std::vector<int>& img) {
  if (g.n() != h.n() || static_cast<int>(img.size()) != g.n() || g.edge_count() != h.edge_count()) return false;
  std::vector<bool> hit(g.n(), false);
  for (int x : img) {
    if (x < 0 || x >= g.n() || hit[x]) return false;
    hit[x] = true;
  }
  for (auto [u, v] : g.edges())
    if (!h.adjacent(img[u], img[v])) return false;
  return true;
}

/// Automorphism check that also requires every vertex to keep its color.
inline bool is_automorphism(const Graph& g, const Coloring* pi, const std::vector<int>& img) {
  if (!is_isomorphism(g, g, img)) return false;
  if (pi)
    for (int v = 0; v < g.n(); ++v)
      if (pi->color(v) != pi->color(img[v])) return false;
  return true;
}

/// Host tree plus one connected vertex set (bag) of the tree per graph vertex.
struct TreeRepresentation {
  Graph tree;
  std::optional<Vertex> root;
  std::vector<VertexSet> bags;

  int leaf_bound() const {
    if (tree.n() <= 1) return 1;
    int leaves = 0;
    for (int t = 0; t < tree.n(); ++t) leaves += tree.degree(t) == 1;
    return leaves;
  }

  void validate() const {
    if (tree.n() == 0) throw GraphError("host tree is empty");
    if (tree.edge_count() != static_cast<std::size_t>(tree.n() - 1) || components(tree).size() != 1)
      throw GraphError("host graph is not a tree");
    for (std::size_t v = 0; v < bags.size(); ++v) {
      const auto& bag = bags[v];
      if (bag.empty()) throw GraphError("empty bag for vertex " + std::to_string(v));
      for (Vertex t : bag)
        if (t < 0 || t >= tree.n()) throw GraphError("bag node out of range");
      if (components_of(tree, sorted_set(bag)).size() != 1)
        throw GraphError("bag of vertex " + std::to_string(v) + " does not induce a subtree");
    }
  }
};

/// Intersection graph of the bags.
inline Graph realize(const TreeRepresentation& rep) {
  rep.validate();
  std::vector<VertexSet> bags;
  for (const auto& b : rep.bags) bags.push_back(sorted_set(b));
  std::vector<std::pair<int, int>> es;
  for (std::size_t u = 0; u < bags.size(); ++u)
    for (std::size_t v = u + 1; v < bags.size(); ++v)
      if (!set_intersection(bags[u], bags[v]).empty()) es.emplace_back(static_cast<int>(u), static_cast<int>(v));
  return Graph::from_edges(static_cast<int>(bags.size()), es);
}

}  // namespace chordaut
