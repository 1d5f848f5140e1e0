#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "graph.hpp"
#include "hypergraph.hpp"
#include "hyperiso.hpp"
#include "interval.hpp"
#include "perm.hpp"
#include "recognition.hpp"
#include "wl.hpp"

namespace chordaut {

/// Raised when the critical set cannot be refined further; the threshold is
/// below the leafage and must be raised.
class NonCriticalDeadlock : public std::runtime_error {
 public:
  explicit NonCriticalDeadlock(int threshold)
      : std::runtime_error("critical set deadlock at threshold " + std::to_string(threshold)), threshold(threshold) {}
  int threshold;
};

struct CriticalState {
  Coloring pi;
  VertexSet omega_star;
  int threshold = 0;
  int iterations = 0;  // refinements performed by the loop
};

/// Union of the classes whose induced subgraph has at most L components.
inline VertexSet critical_candidates(const Graph& x, const Coloring& pi, int threshold) {
  VertexSet out;
  for (const auto& delta : pi.classes())
    if (static_cast<int>(components_of(x, delta).size()) <= threshold) out.insert(out.end(), delta.begin(), delta.end());
  return sorted_set(std::move(out));
}

/// Components of X minus the set, each sorted.
inline std::vector<VertexSet> outside_components(const Graph& x, const VertexSet& omega_star) {
  VertexSet rest;
  for (Vertex v = 0; v < x.n(); ++v)
    if (!contains(omega_star, v)) rest.push_back(v);
  return components_of(x, rest);
}

/// Components outside the set whose closure is not interval.
inline std::vector<VertexSet> noninterval_components(const Graph& x, const VertexSet& omega_star) {
  std::vector<VertexSet> s;
  for (auto& y : outside_components(x, omega_star))
    if (!is_interval(boundary_and_closure(x, y).second.graph)) s.push_back(std::move(y));
  return s;
}

inline bool is_critical(const Graph& x, const VertexSet& omega_star) { return noninterval_components(x, omega_star).empty(); }

/// Splits one class by the complete traces it leaves on the non-interval
/// components. Returns nothing when every candidate class is covered whole.
inline std::optional<Coloring> refine_noncritical(const Graph& x, const Coloring& pi, const VertexSet& omega_star) {
  auto s = noninterval_components(x, omega_star);
  if (s.empty()) throw std::invalid_argument("refine_noncritical: the set is already critical");
  auto complete_trace = [&](int gamma, const VertexSet& z) {
    auto tr = set_intersection(pi.cls(gamma), z);
    return !tr.empty() && is_complete(x, tr);
  };
  std::set<int> candidates;
  for (const auto& y : s)
    for (Vertex v : y)
      if (complete_trace(pi.color(v), y)) candidates.insert(pi.color(v));
  for (int gamma : candidates) {
    VertexSet gamma0;
    for (const auto& z : s)
      if (complete_trace(gamma, z)) gamma0 = set_union(gamma0, set_intersection(pi.cls(gamma), z));
    if (gamma0.size() == pi.cls(gamma).size()) continue;
    std::vector<std::pair<int, int>> labels(x.n());
    for (Vertex v = 0; v < x.n(); ++v) labels[v] = {pi.color(v), contains(gamma0, v) ? 1 : 0};
    return Coloring::from_labels(labels);
  }
  return std::nullopt;
}

/// Refines pi0 until the candidate set is critical.
inline CriticalState critical_loop(const Graph& x, const Coloring& pi0, int threshold) {
  if (threshold < 1) throw std::invalid_argument("critical_loop: threshold must be positive");
  CriticalState st;
  st.threshold = threshold;
  st.pi = wl_refine(x, pi0).first;
  st.omega_star = critical_candidates(x, st.pi, threshold);
  while (!is_critical(x, st.omega_star)) {
    auto finer = refine_noncritical(x, st.pi, st.omega_star);
    if (!finer) throw NonCriticalDeadlock(threshold);
    Coloring next = wl_refine(x, *finer).first;
    if (next.size() <= st.pi.size()) throw std::logic_error("critical_loop: refinement did not grow the coloring");
    st.pi = std::move(next);
    st.omega_star = critical_candidates(x, st.pi, threshold);
    ++st.iterations;
  }
  return st;
}

/// The hypergraph on the classes of the relations e_{Δ,Γ} for Δ inside the
/// critical set.
struct HStar {
  struct VertexInfo {
    int delta;      // class of pi inside the critical set
    int gamma;      // any class of pi
    VertexSet members;
  };
  std::vector<VertexInfo> vertices;
  Hypergraph hypergraph;
  VertexSet omega_star;
  std::map<Vertex, NodeId> f;        // α -> ov α
  std::map<NodeId, Vertex> f_inverse;

  std::size_t max_class_size() const { return hypergraph.max_class_size(); }

  /// Index of f(α) among the sorted edges of the hypergraph.
  int edge_index(Vertex alpha) const {
    NodeId e = f.at(alpha);
    auto it = std::lower_bound(hypergraph.edges.begin(), hypergraph.edges.end(), std::pair{e, -1});
    return static_cast<int>(it - hypergraph.edges.begin());
  }
};

/// Classes of Δ under twins in X_{Δ,Γ}, verified to be an equivalence.
inline std::vector<VertexSet> bipartite_twin_classes(const Graph& x, const VertexSet& delta, const VertexSet& gamma) {
  auto trace = [&](Vertex d, Vertex other) {
    VertexSet out;
    for (Vertex w : x.neighbors(d))
      if (w != other && (delta == gamma ? contains(delta, w) : contains(gamma, w))) out.push_back(w);
    return out;
  };
  // For Δ ≠ Γ only Γ-neighbours count; for Δ = Γ this is twins in X_Δ.
  auto twins = [&](Vertex a, Vertex b) { return trace(a, b) == trace(b, a); };
  std::vector<int> parent(delta.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < delta.size(); ++i)
    for (std::size_t j = i + 1; j < delta.size(); ++j)
      if (twins(delta[i], delta[j])) parent[find(static_cast<int>(j))] = find(static_cast<int>(i));
  std::map<int, VertexSet> by_root;
  for (std::size_t i = 0; i < delta.size(); ++i) by_root[find(static_cast<int>(i))].push_back(delta[i]);
  std::vector<VertexSet> out;
  for (auto& [r, c] : by_root) {
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j)
        if (!twins(c[i], c[j])) throw StructuralViolation("bipartite twin relation is not transitive");
    out.push_back(std::move(c));
  }
  return out;
}

inline HStar build_hstar(const Graph& x, const Coloring& pi, const VertexSet& omega_star) {
  HStar hs;
  hs.omega_star = omega_star;
  // lambda[(α, Γ)] = vertex of H* holding α for the pair (class of α, Γ).
  std::map<std::pair<Vertex, int>, int> lambda;
  std::vector<ColorId> vcolors;
  std::set<int> star_classes;
  for (Vertex a : omega_star) star_classes.insert(pi.color(a));
  for (int d : star_classes) {
    for (int g = 0; g < pi.size(); ++g) {
      ColorId c = color("V " + std::to_string(d) + " " + std::to_string(g));
      for (auto& cls : bipartite_twin_classes(x, pi.cls(d), pi.cls(g))) {
        int id = static_cast<int>(hs.vertices.size());
        for (Vertex a : cls) lambda[{a, g}] = id;
        hs.vertices.push_back({d, g, std::move(cls)});
        vcolors.push_back(c);
      }
    }
  }
  std::map<NodeId, std::set<ColorId>> tags;
  static const ColorId vertex_tag = color("v"), adjacency_tag = color("a");
  for (Vertex a : omega_star) {
    std::vector<int> ov;
    for (int g = 0; g < pi.size(); ++g) ov.push_back(lambda.at({a, g}));
    NodeId e = vertex_set_edge(sorted_set(ov));
    hs.f[a] = e;
    if (!hs.f_inverse.emplace(e, a).second) throw StructuralViolation("build_hstar: twins within a class");
    tags[e].insert(vertex_tag);
    for (Vertex b : x.neighbors(a)) {
      if (!contains(omega_star, b)) continue;
      NodeId ab = vertex_set_edge(sorted_set({lambda.at({a, pi.color(b)}), lambda.at({b, pi.color(a)})}));
      tags[ab].insert(adjacency_tag);
    }
  }
  std::vector<std::pair<NodeId, ColorId>> es;
  for (auto& [e, ts] : tags) es.emplace_back(e, color_set("hstar", {ts.begin(), ts.end()}));
  hs.hypergraph = Hypergraph(static_cast<int>(hs.vertices.size()), vcolors, es);
  return hs;
}

/// Transports an automorphism of H* to the critical set through f.
inline std::optional<Permutation> hstar_action(const HStar& hs, const Permutation& h, int n) {
  Applier ap(h);
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  for (auto& [a, e] : hs.f) {
    auto it = hs.f_inverse.find(ap(e));
    if (it == hs.f_inverse.end()) return std::nullopt;
    img[a] = it->second;
  }
  return Permutation(std::move(img));
}

/// G*: the action of Aut(H*) on the image of f, as permutations of the vertices of X.
inline PermGroup gstar(const HStar& hs, int n) {
  std::vector<Permutation> gens;
  PermGroup hyper = aut_hypergraph(hs.hypergraph);
  for (const auto& h : hyper.generators()) {
    auto p = hstar_action(hs, h, n);
    if (!p) throw std::logic_error("gstar: automorphism does not preserve the image of f");
    gens.push_back(*p);
  }
  return PermGroup(n, gens);
}

/// Order-2 hypergraph on the critical set built from the boundary
/// hypergraphs of the components outside it.
struct HDiamond {
  struct Component {
    BoundaryHypergraph hy;
    int sim_class = -1;  // index of the class of components with equal H_Y
    int sim_size = 0;    // n_Y
    ColorId token = -1;  // (closure type, n_Y)
  };
  VertexSet omega_star;
  std::vector<int> local;  // vertex of X -> index in omega_star, or -1
  std::vector<Component> components;
  Hypergraph hypergraph;   // on omega_star positions
  // Edges over global vertex ids, for the composition with H*.
  std::vector<std::pair<VertexSet, ColorId>> first_edges;
  std::vector<std::pair<std::vector<VertexSet>, ColorId>> second_edges;
};

inline HDiamond build_hdiamond(const Graph& x, const Coloring& pi, const VertexSet& omega_star) {
  HDiamond hd;
  hd.omega_star = omega_star;
  hd.local.assign(x.n(), -1);
  for (std::size_t i = 0; i < omega_star.size(); ++i) hd.local[omega_star[i]] = static_cast<int>(i);
  std::map<std::vector<std::pair<VertexSet, ColorId>>, int> sim;
  for (auto& y : outside_components(x, omega_star)) {
    HDiamond::Component c{boundary_hypergraph(x, pi.colors(), y)};
    auto [it, fresh] = sim.emplace(c.hy.signature(), static_cast<int>(sim.size()));
    c.sim_class = it->second;
    hd.components.push_back(std::move(c));
  }
  std::vector<int> sizes(sim.size(), 0);
  for (const auto& c : hd.components) ++sizes[c.sim_class];
  for (auto& c : hd.components) {
    c.sim_size = sizes[c.sim_class];
    c.token = color_tuple("cl", {c.hy.closure_type(), color(std::to_string(c.sim_size))});
  }
  // Components with empty boundary are whole components of X and stay out.
  std::map<VertexSet, std::vector<ColorId>> e1;
  std::map<std::vector<VertexSet>, std::vector<ColorId>> e2;
  for (const auto& c : hd.components) {
    if (c.hy.boundary.empty()) continue;
    std::vector<VertexSet> all;
    for (const auto& e : c.hy.edges) {
      e1[e.vertices].push_back(color_tuple("e1", {e.color, c.token}));
      all.push_back(e.vertices);
    }
    e2[all].push_back(c.token);
  }
  auto to_local = [&](const VertexSet& vs) {
    std::vector<int> out;
    for (Vertex v : vs) out.push_back(hd.local[v]);
    return out;
  };
  std::vector<std::pair<NodeId, ColorId>> es;
  for (auto& [vs, cs] : e1) {
    ColorId c = color_multiset("E1", cs);
    hd.first_edges.emplace_back(vs, c);
    es.emplace_back(vertex_set_edge(to_local(vs)), c);
  }
  for (auto& [sets, cs] : e2) {
    ColorId c = color_multiset("E2", cs);
    hd.second_edges.emplace_back(sets, c);
    std::vector<NodeId> kids;
    for (const auto& vs : sets) kids.push_back(vertex_set_edge(to_local(vs)));
    es.emplace_back(edge_set(kids), c);
  }
  std::vector<ColorId> vc;
  for (Vertex a : omega_star) vc.push_back(color("c " + std::to_string(pi.color(a))));
  hd.hypergraph = Hypergraph(static_cast<int>(omega_star.size()), vc, es);
  return hd;
}

/// Pointwise stabilizer of the critical set: automorphisms of the colored
/// interval graph outside it, extended by the identity.
inline PermGroup kernel_gdiamond(const Graph& x, const Coloring& pi, const VertexSet& omega_star) {
  VertexSet rest;
  for (Vertex v = 0; v < x.n(); ++v)
    if (!contains(omega_star, v)) rest.push_back(v);
  if (rest.empty()) return PermGroup(x.n());
  auto view = induced(x, rest);
  std::vector<std::pair<int, VertexSet>> labels;
  for (Vertex v : rest) {
    VertexSet att;
    for (Vertex w : x.neighbors(v))
      if (contains(omega_star, w)) att.push_back(w);
    labels.emplace_back(pi.color(v), std::move(att));
  }
  auto local = aut_colored_interval(view.graph, Coloring::from_labels(labels));
  std::vector<Permutation> gens;
  for (const auto& g : local.generators()) {
    std::vector<int> img(x.n());
    std::iota(img.begin(), img.end(), 0);
    for (std::size_t i = 0; i < rest.size(); ++i) img[rest[i]] = view.parent(g[static_cast<int>(i)]);
    gens.emplace_back(std::move(img));
  }
  return PermGroup(x.n(), gens);
}

namespace detail {

/// Kuhn's augmenting-path matching; returns the partner of each left node or nothing.
inline std::optional<std::vector<int>> perfect_matching(const std::vector<std::vector<int>>& adj, int right) {
  std::vector<int> match_r(right, -1);
  for (int l = 0; l < static_cast<int>(adj.size()); ++l) {
    std::vector<bool> seen(right, false);
    auto augment = [&](auto&& self, int u) -> bool {
      for (int r : adj[u]) {
        if (seen[r]) continue;
        seen[r] = true;
        if (match_r[r] < 0 || self(self, match_r[r])) {
          match_r[r] = u;
          return true;
        }
      }
      return false;
    };
    if (!augment(augment, l)) return std::nullopt;
  }
  std::vector<int> match_l(adj.size(), -1);
  for (int r = 0; r < right; ++r)
    if (match_r[r] >= 0) match_l[match_r[r]] = r;
  return match_l;
}

}  // namespace detail

/// Extends a permutation of the critical set (given on all of X, moving only
/// critical vertices) to an automorphism of X with the critical edges removed.
inline Permutation lift_boundary_aut(const Graph& x, const Coloring& pi, const HDiamond& hd, const Permutation& gbar) {
  const int n = x.n();
  std::vector<int> img(n, -1);
  for (Vertex a : hd.omega_star) {
    if (!contains(hd.omega_star, gbar[a]) || pi.color(gbar[a]) != pi.color(a))
      throw std::invalid_argument("lift_boundary_aut: not a color-preserving permutation of the critical set");
    img[a] = gbar[a];
  }
  const auto& comps = hd.components;
  const int c = static_cast<int>(comps.size());
  auto mapped_signature = [&](const BoundaryHypergraph& hy) {
    std::vector<std::pair<VertexSet, ColorId>> sig;
    for (const auto& e : hy.edges) {
      VertexSet vs;
      for (Vertex v : e.vertices) vs.push_back(gbar[v]);
      sig.emplace_back(sorted_set(std::move(vs)), e.color);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
  };
  std::vector<std::vector<int>> adj(c);
  for (int i = 0; i < c; ++i) {
    const auto& hy = comps[i].hy;
    if (hy.boundary.empty()) {
      adj[i].push_back(i);
      continue;
    }
    auto sig = mapped_signature(hy);
    for (int j = 0; j < c; ++j)
      if (comps[j].hy.closure_type() == hy.closure_type() && comps[j].hy.signature() == sig) adj[i].push_back(j);
  }
  auto match = detail::perfect_matching(adj, c);
  if (!match) throw std::invalid_argument("lift_boundary_aut: permutation is not an automorphism of the boundary hypergraph");
  for (int i = 0; i < c; ++i) {
    const auto& hy = comps[i].hy;
    const auto& hyp = comps[(*match)[i]].hy;
    std::vector<Vertex> gb;
    for (Vertex b : hy.boundary) gb.push_back(gbar[b]);
    auto lifted = lift_boundary_iso(hy, hyp, gb);
    for (Vertex v : hy.component) img[v] = lifted[hy.closure.local(v)];
  }
  Permutation g(img);
  // Check against X with the edges inside the critical set removed.
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : x.neighbors(u)) {
      if (hd.local[u] >= 0 && hd.local[v] >= 0) continue;
      if (!x.adjacent(g[u], g[v])) throw std::logic_error("lift_boundary_aut: lift breaks an edge");
    }
  return g;
}

/// H* ↑ (H⋄)^f: vertex α of H⋄ becomes the edge f(α) of H*.
inline Hypergraph composite_hypergraph(const HStar& hs, const HDiamond& hd) {
  const int m = static_cast<int>(hs.hypergraph.edges.size());
  std::map<Vertex, int> pos;
  for (Vertex a : hs.omega_star) pos[a] = hs.edge_index(a);
  auto image = [&](const VertexSet& vs) {
    std::vector<int> out;
    for (Vertex v : vs) out.push_back(pos.at(v));
    return vertex_set_edge(out);
  };
  std::vector<std::pair<NodeId, ColorId>> es;
  for (const auto& [vs, c] : hd.first_edges) es.emplace_back(image(vs), c);
  for (const auto& [sets, c] : hd.second_edges) {
    std::vector<NodeId> kids;
    for (const auto& vs : sets) kids.push_back(image(vs));
    es.emplace_back(edge_set(kids), c);
  }
  // Vertices outside the image of f get their own color.
  std::vector<ColorId> vc(m, color("pad"));
  for (auto& [a, i] : pos) vc[i] = color("imf");
  return compose(hs.hypergraph, Hypergraph(m, vc, es));
}

struct MainResult {
  PermGroup group;
  CriticalState state;
  bool interval_shortcut = false;
  std::size_t hstar_max_class = 0;
};

/// Aut(X, pi0) for a chordal graph with no two twins of the same color.
inline MainResult main_aut_twinless(const Graph& x, const Coloring& pi0, int threshold) {
  MainResult res;
  res.state = critical_loop(x, pi0, threshold);
  const auto& pi = res.state.pi;
  const auto& omega = res.state.omega_star;
  if (omega.empty()) {
    res.interval_shortcut = true;
    res.group = aut_colored_interval(x, pi);
    return res;
  }
  HStar hs = build_hstar(x, pi, omega);
  res.hstar_max_class = hs.max_class_size();
  HDiamond hd = build_hdiamond(x, pi, omega);
  Hypergraph comp = composite_hypergraph(hs, hd);
  std::vector<Permutation> gens = kernel_gdiamond(x, pi, omega).generators();
  PermGroup hyper = aut_hypergraph(comp);
  for (const auto& h : hyper.generators()) {
    auto gbar = hstar_action(hs, h, x.n());
    if (!gbar) throw std::logic_error("main_aut_twinless: automorphism leaves the image of f");
    if (gbar->is_identity()) continue;
    Permutation g = lift_boundary_aut(x, pi, hd, *gbar);
    if (!is_automorphism(x, &pi0, g.images())) throw std::logic_error("main_aut_twinless: lifted generator is not an automorphism");
    gens.push_back(std::move(g));
  }
  res.group = PermGroup(x.n(), gens);
  return res;
}

/// Repeated quotient by same-colored twins. Each quotient vertex stands for a
/// module of X listed so that equally colored modules correspond in order.
struct TwinReduction {
  Graph quotient;
  Coloring colors;
  std::vector<VertexSet> listing;       // quotient vertex -> ordered module in X
  std::vector<Permutation> kernel;      // generators of the module symmetries
  int levels = 0;

  /// Lifts an automorphism of the quotient to X.
  Permutation lift(const Permutation& h, int n) const {
    std::vector<int> img(n, -1);
    for (std::size_t r = 0; r < listing.size(); ++r) {
      const auto& src = listing[r];
      const auto& dst = listing[h[static_cast<int>(r)]];
      for (std::size_t i = 0; i < src.size(); ++i) img[src[i]] = dst[i];
    }
    return Permutation(img);
  }
};

inline TwinReduction twin_reduction(const Graph& x, const Coloring& pi0) {
  const int n = x.n();
  TwinReduction tr;
  tr.quotient = x;
  tr.colors = pi0;
  for (Vertex v = 0; v < n; ++v) tr.listing.push_back({v});
  auto module_map = [](const VertexSet& a, const VertexSet& b, std::vector<int>& img) {
    for (std::size_t i = 0; i < a.size(); ++i) img[a[i]] = b[i];
  };
  for (;;) {
    Coloring tc = twin_classes(tr.quotient, &tr.colors);
    if (tc.size() == tr.quotient.n()) break;
    ++tr.levels;
    std::vector<std::tuple<int, int, int>> labels;
    std::vector<VertexSet> listing;
    VertexSet reps;
    for (const auto& cls : tc.classes()) {
      int kind = cls.size() == 1 ? 0 : (tr.quotient.adjacent(cls[0], cls[1]) ? 1 : 2);
      labels.emplace_back(tr.colors.color(cls[0]), static_cast<int>(cls.size()), kind);
      VertexSet mod;
      for (Vertex c : cls) mod.insert(mod.end(), tr.listing[c].begin(), tr.listing[c].end());
      listing.push_back(std::move(mod));
      reps.push_back(cls[0]);
      if (cls.size() < 2) continue;
      std::vector<int> swap(n), cycle(n);
      std::iota(swap.begin(), swap.end(), 0);
      std::iota(cycle.begin(), cycle.end(), 0);
      module_map(tr.listing[cls[0]], tr.listing[cls[1]], swap);
      module_map(tr.listing[cls[1]], tr.listing[cls[0]], swap);
      tr.kernel.emplace_back(swap);
      if (cls.size() >= 3) {
        for (std::size_t i = 0; i < cls.size(); ++i)
          module_map(tr.listing[cls[i]], tr.listing[cls[(i + 1) % cls.size()]], cycle);
        tr.kernel.emplace_back(cycle);
      }
    }
    // Twin classes are numbered by minimum vertex, so reps are increasing.
    auto view = induced(tr.quotient, reps);
    tr.quotient = view.graph;
    tr.colors = Coloring::from_labels(labels);
    tr.listing = std::move(listing);
  }
  return tr;
}

struct AutResult {
  PermGroup group;
  int leafage_bound = 0;          // threshold that succeeded
  int critical_iterations = 0;
  int deadlocks = 0;              // thresholds abandoned on deadlock
  int twin_levels = 0;
  bool interval_shortcut = false;
  std::size_t hstar_max_class = 0;
};

/// Aut(X, pi0) for a chordal graph. Without a threshold, tries L = 2, 4, 8, ...
/// and moves on whenever the critical loop deadlocks.
inline AutResult aut_report(const Graph& x, const std::optional<Coloring>& pi0 = std::nullopt,
                            std::optional<int> threshold = std::nullopt) {
  if (!is_chordal(x)) throw GraphError("aut: graph is not chordal");
  Coloring pi = pi0 ? *pi0 : Coloring::uniform(x.n());
  if (pi.n() != x.n()) throw std::invalid_argument("aut: coloring size mismatch");
  AutResult res;
  if (x.n() == 0) {
    res.group = PermGroup(0);
    return res;
  }
  TwinReduction tr = twin_reduction(x, pi);
  res.twin_levels = tr.levels;
  int level = threshold.value_or(2);
  if (level < 1) throw std::invalid_argument("aut: leafage bound must be positive");
  std::optional<MainResult> main;
  while (!main) {
    try {
      main = main_aut_twinless(tr.quotient, tr.colors, level);
    } catch (const NonCriticalDeadlock&) {
      ++res.deadlocks;
      // Deadlock is impossible once the threshold reaches the leafage, which
      // is at most the number of vertices.
      if (level >= tr.quotient.n()) throw;
      level = std::min(2 * level, tr.quotient.n());
    }
  }
  res.leafage_bound = level;
  res.critical_iterations = main->state.iterations;
  res.interval_shortcut = main->interval_shortcut;
  res.hstar_max_class = main->hstar_max_class;
  std::vector<Permutation> gens = tr.kernel;
  for (const auto& h : main->group.generators()) gens.push_back(tr.lift(h, x.n()));
  for (const auto& g : gens)
    if (!is_automorphism(x, &pi, g.images())) throw std::logic_error("aut: generator is not an automorphism");
  res.group = PermGroup(x.n(), gens);
  return res;
}

inline PermGroup aut(const Graph& x, const std::optional<Coloring>& pi0 = std::nullopt, std::optional<int> threshold = std::nullopt) {
  return aut_report(x, pi0, threshold).group;
}

/// Some isomorphism X -> Y, matching connected components greedily through
/// the automorphism group of their disjoint union.
inline std::optional<Permutation> iso(const Graph& x, const Graph& y, std::optional<int> threshold = std::nullopt) {
  if (!is_chordal(x) || !is_chordal(y)) throw GraphError("iso: graph is not chordal");
  if (x.n() != y.n() || x.edge_count() != y.edge_count()) return std::nullopt;
  auto cx = components(x), cy = components(y);
  if (cx.size() != cy.size()) return std::nullopt;
  // Isomorphism between two connected pieces via a swapping automorphism.
  auto connected_iso = [&](const VertexSet& a, const VertexSet& b) -> std::optional<std::vector<Vertex>> {
    if (a.size() != b.size()) return std::nullopt;
    auto va = induced(x, a), vb = induced(y, b);
    if (va.graph.edge_count() != vb.graph.edge_count()) return std::nullopt;
    const int k = static_cast<int>(a.size());
    std::vector<std::pair<Vertex, Vertex>> es;
    for (auto [u, v] : va.graph.edges()) es.emplace_back(u, v);
    for (auto [u, v] : vb.graph.edges()) es.emplace_back(u + k, v + k);
    Graph u = Graph::from_edges(2 * k, es);
    PermGroup g = aut(u, std::nullopt, threshold);
    for (const auto& s : g.generators())
      if (s[0] >= k) {
        std::vector<Vertex> m(k);
        for (int i = 0; i < k; ++i) m[i] = s[i] - k;
        if (is_isomorphism(va.graph, vb.graph, m)) return m;
      }
    // No generator swaps directly; walk the orbit of vertex 0.
    std::vector<std::optional<Permutation>> reach(2 * k);
    reach[0] = Permutation(2 * k);
    std::vector<int> queue{0};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int p = queue[qi];
      for (const auto& s : g.generators()) {
        if (reach[s[p]]) continue;
        reach[s[p]] = *reach[p] * s;
        queue.push_back(s[p]);
      }
    }
    auto hit = std::find_if(queue.begin(), queue.end(), [k](int p) { return p >= k; });
    if (hit == queue.end()) return std::nullopt;
    const Permutation& w = *reach[*hit];
    std::vector<Vertex> m(k);
    for (int i = 0; i < k; ++i) m[i] = w[i] - k;
    if (!is_isomorphism(va.graph, vb.graph, m)) throw std::logic_error("iso: swapping element is not an isomorphism");
    return m;
  };
  std::vector<int> img(x.n(), -1);
  std::vector<bool> used(cy.size(), false);
  for (const auto& a : cx) {
    bool found = false;
    for (std::size_t j = 0; j < cy.size() && !found; ++j) {
      if (used[j]) continue;
      if (auto m = connected_iso(a, cy[j])) {
        for (std::size_t i = 0; i < a.size(); ++i) img[a[i]] = cy[j][(*m)[i]];
        used[j] = found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  if (!is_isomorphism(x, y, img)) throw std::logic_error("iso: certificate failed");
  return Permutation(img);
}

}  // namespace chordaut
