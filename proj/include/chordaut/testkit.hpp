#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chordal.hpp"
#include "graph.hpp"
#include "hypergraph.hpp"
#include "interval.hpp"
#include "io.hpp"
#include "perm.hpp"
#include "recognition.hpp"
#include "wl.hpp"

namespace chordaut::testkit {

struct GeneratorConfig {
  int n = 8;
  int leaf_bound = 3;
  std::uint64_t seed = 1;
  bool twinless = false;
  bool colored = false;
  int num_colors = 2;
  bool connected = false;
};

struct Instance {
  TreeRepresentation rep;
  Graph graph;
  Coloring coloring;
};

namespace detail {

/// Random tree on t nodes whose leaf count never exceeds max_leaves.
inline Graph random_tree(std::mt19937_64& rng, int t, int max_leaves) {
  if (max_leaves <= 1) t = 1;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> deg(t, 0);
  int leaves = t > 0 ? 1 : 0;  // a single node counts as one leaf
  for (int v = 1; v < t; ++v) {
    std::vector<int> options;
    for (int u = 0; u < v; ++u) {
      // Attaching to a leaf (or to the lone root) keeps the leaf count.
      bool keeps = deg[u] <= 1;
      int after = keeps ? (v == 1 ? 2 : leaves) : leaves + 1;
      if (after <= max_leaves) options.push_back(u);
    }
    if (options.empty()) break;
    int u = options[std::uniform_int_distribution<int>(0, static_cast<int>(options.size()) - 1)(rng)];
    leaves = (v == 1) ? 2 : (deg[u] <= 1 ? leaves : leaves + 1);
    ++deg[u];
    ++deg[v];
    edges.emplace_back(u, v);
    if (static_cast<int>(edges.size()) != v) break;
  }
  int used = static_cast<int>(edges.size()) + 1;
  return Graph::from_edges(std::min(t, used), edges);
}

/// Connected node set grown from a random root in random breadth-first order.
inline VertexSet random_subtree(std::mt19937_64& rng, const Graph& tree, int max_size) {
  int root = std::uniform_int_distribution<int>(0, tree.n() - 1)(rng);
  int size = std::uniform_int_distribution<int>(1, std::max(1, max_size))(rng);
  std::vector<int> out{root};
  std::vector<bool> seen(tree.n(), false);
  seen[root] = true;
  std::vector<int> frontier{root};
  while (static_cast<int>(out.size()) < size && !frontier.empty()) {
    int k = std::uniform_int_distribution<int>(0, static_cast<int>(frontier.size()) - 1)(rng);
    int x = frontier[k];
    std::vector<int> fresh;
    for (int y : tree.neighbors(x))
      if (!seen[y]) fresh.push_back(y);
    if (fresh.empty()) {
      frontier.erase(frontier.begin() + k);
      continue;
    }
    int y = fresh[std::uniform_int_distribution<int>(0, static_cast<int>(fresh.size()) - 1)(rng)];
    seen[y] = true;
    out.push_back(y);
    frontier.push_back(y);
  }
  return sorted_set(std::move(out));
}

}  // namespace detail

/// Random chordal graph from a random host tree with at most leaf_bound
/// leaves. Bags are subtrees of random size capped near a third of the tree,
/// which keeps overlaps frequent.
inline Instance gen_chordal(const GeneratorConfig& cfg) {
  if (cfg.leaf_bound < 1 || cfg.n < 1) throw std::invalid_argument("gen_chordal: invalid config");
  std::mt19937_64 rng(cfg.seed);
  for (int attempt = 0;; ++attempt) {
    int t = std::uniform_int_distribution<int>(1, std::max(1, cfg.n + 2))(rng);
    Graph tree = detail::random_tree(rng, t, cfg.leaf_bound);
    int cap = std::max(1, (tree.n() + 2) / 3 + 1);
    TreeRepresentation rep;
    rep.tree = tree;
    for (int v = 0; v < cfg.n; ++v) rep.bags.push_back(detail::random_subtree(rng, tree, cap));
    Graph g = realize(rep);
    std::vector<int> labels(g.n(), 0);
    if (cfg.colored)
      for (auto& l : labels) l = std::uniform_int_distribution<int>(0, std::max(1, cfg.num_colors) - 1)(rng);
    Coloring pi = Coloring::from_labels(labels);
    if (cfg.twinless) {
      // Keep one vertex per class of equally colored twins until none remain.
      while (true) {
        Coloring tw = twin_classes(g, &pi);
        if (tw.size() == g.n()) break;
        VertexSet keep;
        for (const auto& c : tw.classes()) keep.push_back(c.front());
        keep = sorted_set(keep);
        TreeRepresentation r2;
        r2.tree = rep.tree;
        std::vector<int> l2;
        for (Vertex v : keep) {
          r2.bags.push_back(rep.bags[v]);
          l2.push_back(pi.color(v));
        }
        rep = std::move(r2);
        g = realize(rep);
        pi = Coloring::from_labels(l2);
      }
    }
    if (cfg.connected && components(g).size() != 1 && attempt < 1000) continue;
    return {std::move(rep), std::move(g), std::move(pi)};
  }
}

namespace detail {

/// Backtracking extension of a partial vertex map g -> h. Candidates must keep
/// colors and degrees and be consistent with every mapped vertex.
class Matcher {
 public:
  Matcher(const Graph& g, const Coloring* pg, const Graph& h, const Coloring* ph)
      : g_(g), h_(h), pg_(pg), ph_(ph), img_(g.n(), -1), used_(h.n(), false) {}

  bool fix(int v, int w) {
    if (!consistent(v, w)) return false;
    img_[v] = w;
    used_[w] = true;
    return true;
  }

  std::optional<std::vector<int>> search() {
    if (g_.n() != h_.n()) return std::nullopt;
    if (extend(0)) return img_;
    return std::nullopt;
  }

 private:
  bool consistent(int v, int w) const {
    if (used_[w] || g_.degree(v) != h_.degree(w)) return false;
    if (pg_ && ph_ && pg_->color(v) != ph_->color(w)) return false;
    for (int u = 0; u < g_.n(); ++u)
      if (img_[u] >= 0 && g_.adjacent(u, v) != h_.adjacent(img_[u], w)) return false;
    return true;
  }

  bool extend(int v) {
    while (v < g_.n() && img_[v] >= 0) ++v;
    if (v == g_.n()) return true;
    for (int w = 0; w < h_.n(); ++w) {
      if (!consistent(v, w)) continue;
      img_[v] = w;
      used_[w] = true;
      if (extend(v + 1)) return true;
      img_[v] = -1;
      used_[w] = false;
    }
    return false;
  }

  const Graph& g_;
  const Graph& h_;
  const Coloring* pg_;
  const Coloring* ph_;
  std::vector<int> img_;
  std::vector<bool> used_;
};

}  // namespace detail

inline constexpr int kBruteLimit = 12;

/// Automorphism group by search: at every depth, each candidate image outside
/// the current stabilizer orbit is tested for a witnessing automorphism.
inline PermGroup brute_aut(const Graph& g, const Coloring& pi) {
  const int n = g.n();
  if (n > kBruteLimit) throw std::invalid_argument("brute_aut: graph too large");
  std::vector<Permutation> gens;
  for (int depth = n - 1; depth >= 0; --depth) {
    // Stabilizer of points 0..depth-1 found so far.
    std::vector<Permutation> stab;
    for (const auto& s : gens) {
      bool fixes = true;
      for (int p = 0; p < depth && fixes; ++p) fixes = s[p] == p;
      if (fixes) stab.push_back(s);
    }
    PermGroup cur(n, stab);
    auto orb = cur.orbit(depth);
    for (int target = 0; target < n; ++target) {
      if (std::binary_search(orb.begin(), orb.end(), target)) continue;
      detail::Matcher m(g, &pi, g, &pi);
      bool ok = true;
      for (int p = 0; p < depth && ok; ++p) ok = m.fix(p, p);
      if (!ok || !m.fix(depth, target)) continue;
      if (auto img = m.search()) {
        gens.emplace_back(*img);
        stab.emplace_back(*img);
        orb = PermGroup(n, stab).orbit(depth);
      }
    }
  }
  return PermGroup(n, gens);
}

inline std::optional<Permutation> brute_iso(const Graph& g, const Graph& h) {
  if (g.n() > kBruteLimit) throw std::invalid_argument("brute_iso: graph too large");
  if (g.n() != h.n() || g.edge_count() != h.edge_count()) return std::nullopt;
  auto img = detail::Matcher(g, nullptr, h, nullptr).search();
  if (!img) return std::nullopt;
  return Permutation(*img);
}

/// Colored isomorphism by search, for oracles over colored graphs.
inline std::optional<Permutation> brute_iso_colored(const Graph& g, const Coloring& pg, const Graph& h, const Coloring& ph) {
  if (g.n() > kBruteLimit) throw std::invalid_argument("brute_iso_colored: graph too large");
  if (g.n() != h.n() || g.edge_count() != h.edge_count()) return std::nullopt;
  auto img = detail::Matcher(g, &pg, h, &ph).search();
  if (!img) return std::nullopt;
  return Permutation(*img);
}

/// Every color-preserving isomorphism H -> H', by exhaustive enumeration.
inline std::vector<Permutation> brute_hyper_iso(const Hypergraph& h, const Hypergraph& hp, double limit = 1e6) {
  if (h.n != hp.n) return {};
  auto classes = h.classes();
  auto classes_p = hp.classes();
  if (classes.size() != classes_p.size()) return {};
  double count = 1;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c].size() != classes_p[c].size() || h.vertex_color[classes[c][0]] != hp.vertex_color[classes_p[c][0]]) return {};
    for (std::size_t k = 2; k <= classes[c].size(); ++k) count *= static_cast<double>(k);
  }
  if (count > limit) throw std::invalid_argument("brute_hyper_iso: too many bijections");
  std::vector<std::vector<int>> imgs = classes_p;
  std::vector<Permutation> out;
  while (true) {
    std::vector<int> full(h.n);
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (std::size_t k = 0; k < classes[c].size(); ++k) full[classes[c][k]] = imgs[c][k];
    Permutation g(full);
    if (h.is_isomorphism(g, hp)) out.push_back(g);
    std::size_t c = 0;
    while (c < imgs.size() && !std::next_permutation(imgs[c].begin(), imgs[c].end())) ++c;
    if (c == imgs.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Random colored hypergraph of order exactly k (when k >= 1) on n vertices
/// with vertex classes of size at most b.
inline Hypergraph random_hypergraph(std::mt19937_64& rng, int n, int k, int b, int edges, int edge_colors = 2) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::vector<ColorId> vc(n);
  for (int v = 0, cls = 0; v < n; ++cls) {
    int sz = std::min(pick(1, b), n - v);
    for (int j = 0; j < sz; ++j) vc[v++] = color("v" + std::to_string(cls % 3) + "." + std::to_string(cls));
  }
  std::shuffle(vc.begin(), vc.end(), rng);
  std::vector<std::vector<NodeId>> pools(k + 1);
  for (int v = 0; v < n; ++v) pools[0].push_back(atom(v));
  for (int j = 1; j <= k; ++j) {
    int count = std::max(2, edges);
    for (int t = 0; t < count; ++t) {
      int sz = pick(1, std::min<int>(3, static_cast<int>(pools[j - 1].size())));
      std::vector<NodeId> kids;
      // At least one member of order j-1 keeps the order exact.
      kids.push_back(pools[j - 1][pick(0, static_cast<int>(pools[j - 1].size()) - 1)]);
      for (int s = 1; s < sz; ++s) {
        int lvl = pick(0, j - 1);
        kids.push_back(pools[lvl][pick(0, static_cast<int>(pools[lvl].size()) - 1)]);
      }
      pools[j].push_back(edge_set(kids));
    }
  }
  std::map<NodeId, ColorId> es;
  std::vector<NodeId> cand;
  for (int j = 1; j <= k; ++j) cand.insert(cand.end(), pools[j].begin(), pools[j].end());
  if (k >= 1) es[pools[k][0]] = color("e0");
  for (int t = 0; t < edges && !cand.empty(); ++t)
    es[cand[pick(0, static_cast<int>(cand.size()) - 1)]] = color("e" + std::to_string(pick(0, edge_colors - 1)));
  return Hypergraph(n, vc, {es.begin(), es.end()});
}

/// Interval test by asteroidal triples, independent of the clique-based recognizer.
inline bool is_interval_by_asteroidal_triples(const Graph& g) {
  if (!is_chordal(g)) return false;
  const int n = g.n();
  // comp[a][x]: component of x in g minus the closed neighbourhood of a, -1 if removed.
  std::vector<std::vector<int>> comp(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a) {
    int next = 0;
    for (int s = 0; s < n; ++s) {
      if (s == a || g.adjacent(a, s) || comp[a][s] >= 0) continue;
      std::vector<int> st{s};
      comp[a][s] = next;
      while (!st.empty()) {
        int x = st.back();
        st.pop_back();
        for (int y : g.neighbors(x))
          if (y != a && !g.adjacent(a, y) && comp[a][y] < 0) {
            comp[a][y] = next;
            st.push_back(y);
          }
      }
      ++next;
    }
  }
  auto same = [&](int a, int x, int y) { return comp[a][x] >= 0 && comp[a][x] == comp[a][y]; };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        if (same(a, b, c) && same(b, a, c) && same(c, a, b)) return false;
  return true;
}

/// Relabeled copy: vertex v of g becomes p[v].
inline Graph relabel(const Graph& g, const Permutation& p) { return g.relabeled(p.images()); }

inline Coloring relabel(const Coloring& pi, const Permutation& p) {
  std::vector<int> labels(pi.n());
  for (int v = 0; v < pi.n(); ++v) labels[p[v]] = pi.color(v);
  return Coloring::from_labels(labels);
}

inline Permutation random_permutation(std::mt19937_64& rng, int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation(img);
}

/// Writes <dir>/<name>.edges and, unless monochromatic, <dir>/<name>.colors.
inline void save_instance(const std::filesystem::path& dir, const std::string& name, const Graph& g, const Coloring& pi) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / (name + ".edges")) << write_edge_list(g);
  if (pi.size() > 1) std::ofstream(dir / (name + ".colors")) << write_coloring(pi);
}

struct CorpusEntry {
  std::string name;
  Graph graph;
  Coloring coloring;
};

/// Loads every *.edges file of a directory, sorted by name.
inline std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".edges") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusEntry> out;
  for (const auto& f : files) {
    Graph g = parse_graph(read_file(f.string()));
    auto cpath = f;
    cpath.replace_extension(".colors");
    Coloring pi = std::filesystem::exists(cpath) ? parse_coloring(read_file(cpath.string()), g.n()) : Coloring::uniform(g.n());
    out.push_back({f.stem().string(), std::move(g), std::move(pi)});
  }
  return out;
}

/// Violations of the structure that a stable coloring of a chordal graph
/// must have: classes split into equal cliques, the sparser of two classes
/// determines the components of their union, and two complete classes are
/// joined completely or not at all. Empty when all checks pass.
inline std::vector<std::string> wl_structure_violations(const Graph& g, const Coloring& pi) {
  std::vector<std::string> out;
  if (!check_stable(g, pi)) out.push_back("coloring is not stable");
  const auto& cls = pi.classes();
  std::vector<std::vector<VertexSet>> con(cls.size());
  for (std::size_t d = 0; d < cls.size(); ++d) {
    con[d] = components_of(g, cls[d]);
    for (const auto& c : con[d])
      if (!is_complete(g, c) || c.size() != con[d][0].size())
        out.push_back("class " + std::to_string(d) + " is not a union of equal cliques");
  }
  for (std::size_t d = 0; d < cls.size(); ++d)
    for (std::size_t e = 0; e < cls.size(); ++e) {
      if (d == e) continue;
      if (con[d].size() <= con[e].size()) {
        auto joint = components_of(g, set_union(cls[d], cls[e]));
        std::vector<VertexSet> traces;
        for (const auto& y : joint)
          if (auto t = set_intersection(y, cls[d]); !t.empty()) traces.push_back(std::move(t));
        std::sort(traces.begin(), traces.end());
        auto expect = con[d];
        std::sort(expect.begin(), expect.end());
        if (traces != expect)
          out.push_back("classes " + std::to_string(d) + "," + std::to_string(e) + ": union components do not match");
      }
      if (d < e && con[d].size() == 1 && con[e].size() == 1) {
        std::size_t m = 0;
        for (Vertex u : cls[d])
          for (Vertex v : cls[e]) m += g.adjacent(u, v);
        if (m != 0 && m != cls[d].size() * cls[e].size())
          out.push_back("classes " + std::to_string(d) + "," + std::to_string(e) + ": neither complete bipartite nor empty");
      }
    }
  return out;
}

/// Every color-preserving isomorphism g -> h, sorted. Colors are compared by
/// their ids, so both colorings must use one numbering.
inline std::vector<Permutation> brute_all_iso(const Graph& g, const Coloring& pg, const Graph& h, const Coloring& ph) {
  auto m = brute_iso_colored(g, pg, h, ph);
  if (!m) return {};
  std::vector<Permutation> out;
  for (const auto& a : brute_aut(g, pg).elements()) out.push_back(a * *m);
  std::sort(out.begin(), out.end());
  return out;
}

/// Compares iso(H_Y, H_Y') with the boundary restrictions of the colored
/// closure isomorphisms, both as maps between boundary positions.
inline bool boundary_identity_holds(const BoundaryHypergraph& hy, const BoundaryHypergraph& hyp, const std::vector<int>& colors) {
  std::set<std::vector<int>> from_hyper, from_closures;
  if (hy.boundary.size() == hyp.boundary.size())
    for (const auto& p : brute_hyper_iso(hy.local(colors), hyp.local(colors))) from_hyper.insert(p.images());
  auto a = hy.closure_colors, b = hyp.closure_colors;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) {
    auto pa = Coloring::from_labels(hy.closure_colors), pb = Coloring::from_labels(hyp.closure_colors);
    for (const auto& phi : brute_all_iso(hy.closure.graph, pa, hyp.closure.graph, pb)) {
      std::vector<int> pos;
      for (Vertex v : hy.boundary) {
        Vertex img = hyp.closure.parent(phi[hy.closure.local(v)]);
        auto it = std::lower_bound(hyp.boundary.begin(), hyp.boundary.end(), img);
        if (it == hyp.boundary.end() || *it != img) return false;
        pos.push_back(static_cast<int>(it - hyp.boundary.begin()));
      }
      from_closures.insert(pos);
    }
  }
  return from_hyper == from_closures;
}

/// Enumerated identities around the critical set of a small twinless graph.
struct MicroIdentities {
  bool applicable = false;     // false when the critical set is empty
  bool restriction_equals_intersection = false;  // Aut(X)^Ω* = Aut(H⋄) ∩ G*
  bool aut_in_gstar = false;                      // Aut(X)^Ω* ⊆ G*
  bool gstar_in_induced_aut = false;              // G* ⊆ Aut(X[Ω*], π)
  bool hdiamond_is_boundary_aut = false;          // Aut(H⋄) = Aut(X')^Ω*
};

inline MicroIdentities micro_identities(const Graph& x, const Coloring& pi0, int threshold) {
  MicroIdentities r;
  auto st = critical_loop(x, pi0, threshold);
  const auto& omega = st.omega_star;
  if (omega.empty()) return r;
  r.applicable = true;
  const int n = x.n();
  auto restrict = [&](const Permutation& g) {
    std::vector<int> img;
    for (Vertex a : omega) img.push_back(static_cast<int>(std::lower_bound(omega.begin(), omega.end(), g[a]) - omega.begin()));
    return img;
  };
  std::set<std::vector<int>> ra, rg, rh, rx;
  for (const auto& g : brute_aut(x, pi0).elements()) ra.insert(restrict(g));
  HStar hs = build_hstar(x, st.pi, omega);
  for (const auto& g : gstar(hs, n).elements()) rg.insert(restrict(g));
  HDiamond hd = build_hdiamond(x, st.pi, omega);
  for (const auto& g : brute_hyper_iso(hd.hypergraph, hd.hypergraph)) rh.insert(g.images());
  // X' drops the edges inside the critical set.
  std::vector<std::pair<int, int>> es;
  for (auto [u, v] : x.edges())
    if (!(contains(omega, u) && contains(omega, v))) es.emplace_back(u, v);
  for (const auto& g : brute_aut(Graph::from_edges(n, es), st.pi).elements()) rx.insert(restrict(g));
  std::set<std::vector<int>> meet;
  std::set_intersection(rh.begin(), rh.end(), rg.begin(), rg.end(), std::inserter(meet, meet.end()));
  r.restriction_equals_intersection = ra == meet;
  r.aut_in_gstar = std::includes(rg.begin(), rg.end(), ra.begin(), ra.end());
  auto view = induced(x, omega);
  std::vector<int> local_colors;
  for (Vertex a : omega) local_colors.push_back(st.pi.color(a));
  auto local_pi = Coloring::from_labels(local_colors);
  r.gstar_in_induced_aut = std::all_of(rg.begin(), rg.end(), [&](const auto& img) { return is_automorphism(view.graph, &local_pi, img); });
  r.hdiamond_is_boundary_aut = rh == rx;
  return r;
}

}  // namespace chordaut::testkit
