#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "graph.hpp"

namespace chordaut {

/// Colors of ordered vertex pairs. Diagonal ids and off-diagonal ids never coincide.
struct PairColoring {
  int n = 0;
  std::vector<int> color_of;  // row-major n*n
  int rounds = 0;
  int num_colors = 0;

  int at(Vertex u, Vertex v) const { return color_of[static_cast<std::size_t>(u) * n + v]; }
};

namespace detail {

/// Replaces each entry by the rank of its key among the distinct keys.
template <typename Key>
inline int densify(const std::vector<Key>& keys, std::vector<int>& out) {
  std::map<Key, int> ids;
  for (const auto& k : keys) ids.emplace(k, 0);
  int next = 0;
  for (auto& [k, id] : ids) id = next++;
  out.resize(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) out[i] = ids[keys[i]];
  return next;
}

}  // namespace detail

/// Two-dimensional Weisfeiler-Leman refinement. Colors are named by sorted
/// signatures, so ids do not depend on the vertex numbering.
inline std::pair<Coloring, PairColoring> wl_refine(const Graph& g, const Coloring& pi) {
  const int n = g.n();
  if (pi.n() != n) throw std::invalid_argument("wl_refine: coloring size mismatch");
  PairColoring pc;
  pc.n = n;
  {
    std::vector<std::pair<int, int>> seed(static_cast<std::size_t>(n) * n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        seed[static_cast<std::size_t>(u) * n + v] = u == v ? std::pair{0, pi.color(u)} : std::pair{g.adjacent(u, v) ? 2 : 1, 0};
    pc.num_colors = detail::densify(seed, pc.color_of);
  }
  using Signature = std::pair<int, std::vector<std::uint64_t>>;
  std::vector<std::uint64_t> scratch(n);
  while (true) {
    std::map<Signature, int> ids;
    std::vector<const Signature*> sig_of(static_cast<std::size_t>(n) * n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        for (int w = 0; w < n; ++w)
          scratch[w] = (static_cast<std::uint64_t>(pc.at(u, w)) << 32) | static_cast<std::uint32_t>(pc.at(w, v));
        std::sort(scratch.begin(), scratch.end());
        auto it = ids.emplace(Signature{pc.at(u, v), scratch}, 0).first;
        sig_of[static_cast<std::size_t>(u) * n + v] = &it->first;
      }
    if (static_cast<int>(ids.size()) == pc.num_colors) break;
    int next = 0;
    for (auto& [sig, id] : ids) id = next++;
    for (std::size_t i = 0; i < sig_of.size(); ++i) pc.color_of[i] = ids.find(*sig_of[i])->second;
    pc.num_colors = next;
    ++pc.rounds;
  }
  std::vector<int> diag(n);
  for (int v = 0; v < n; ++v) diag[v] = pc.at(v, v);
  return {Coloring::from_labels(diag), std::move(pc)};
}

/// Equitable count condition plus being a fixpoint of the pair refinement.
inline bool check_stable(const Graph& g, const Coloring& pi) {
  for (const auto& delta : pi.classes()) {
    std::vector<int> first(pi.size(), 0);
    for (Vertex w : g.neighbors(delta.front())) ++first[pi.color(w)];
    for (Vertex d : delta) {
      std::vector<int> cnt(pi.size(), 0);
      for (Vertex w : g.neighbors(d)) ++cnt[pi.color(w)];
      if (cnt != first) return false;
    }
  }
  return wl_refine(g, pi).first.same_partition(pi);
}

/// Coloring induced on delta (sorted), renumbered locally with order kept.
/// delta must be a union of classes, or a connected component of g.
inline Coloring restrict_stable(const Coloring& pi, const VertexSet& delta, const Graph* g = nullptr) {
  VertexSet d = sorted_set(delta);
  bool union_of_classes = true;
  for (Vertex v : d)
    for (Vertex w : pi.cls(pi.color(v)))
      if (!contains(d, w)) union_of_classes = false;
  if (!union_of_classes) {
    bool component = false;
    if (g)
      for (const auto& c : components(*g))
        if (c == d) component = true;
    if (!component) throw std::invalid_argument("restrict_stable: set is neither a union of classes nor a component");
  }
  std::vector<int> labels;
  for (Vertex v : d) labels.push_back(pi.color(v));
  return Coloring::from_labels(labels);
}

}  // namespace chordaut
