#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace chordaut {

/// Lexicographic breadth-first search by partition refinement.
inline std::vector<Vertex> lex_bfs(const Graph& g) {
  std::vector<std::vector<Vertex>> blocks;
  if (g.n() > 0) {
    blocks.emplace_back(g.n());
    for (int v = 0; v < g.n(); ++v) blocks[0][v] = v;
  }
  std::vector<Vertex> order;
  order.reserve(g.n());
  while (!blocks.empty()) {
    Vertex v = blocks.front().front();
    blocks.front().erase(blocks.front().begin());
    if (blocks.front().empty()) blocks.erase(blocks.begin());
    order.push_back(v);
    std::vector<std::vector<Vertex>> next;
    for (auto& b : blocks) {
      std::vector<Vertex> in, out;
      for (Vertex w : b) (g.adjacent(v, w) ? in : out).push_back(w);
      if (!in.empty()) next.push_back(std::move(in));
      if (!out.empty()) next.push_back(std::move(out));
    }
    blocks = std::move(next);
  }
  return order;
}

/// Checks that every vertex's later neighbours form a clique.
inline bool is_perfect_elimination_ordering(const Graph& g, const std::vector<Vertex>& order) {
  std::vector<int> pos(g.n());
  for (int i = 0; i < g.n(); ++i) pos[order[i]] = i;
  for (Vertex v : order) {
    Vertex first = -1;
    for (Vertex w : g.neighbors(v))
      if (pos[w] > pos[v] && (first < 0 || pos[w] < pos[first])) first = w;
    if (first < 0) continue;
    for (Vertex w : g.neighbors(v))
      if (pos[w] > pos[v] && w != first && !g.adjacent(first, w)) return false;
  }
  return true;
}

/// A perfect elimination ordering, or nothing if g is not chordal.
inline std::optional<std::vector<Vertex>> perfect_elimination_ordering(const Graph& g) {
  auto order = lex_bfs(g);
  std::reverse(order.begin(), order.end());
  if (!is_perfect_elimination_ordering(g, order)) return std::nullopt;
  return order;
}

inline bool is_chordal(const Graph& g) { return perfect_elimination_ordering(g).has_value(); }

/// Maximal cliques of a chordal graph, each sorted, listed in sorted order.
inline std::vector<VertexSet> maximal_cliques(const Graph& g) {
  auto peo = perfect_elimination_ordering(g);
  if (!peo) throw GraphError("maximal_cliques: graph is not chordal");
  const auto& order = *peo;
  std::vector<int> pos(g.n());
  for (int i = 0; i < g.n(); ++i) pos[order[i]] = i;
  std::vector<VertexSet> later(g.n());
  std::vector<Vertex> parent(g.n(), -1);
  for (Vertex v = 0; v < g.n(); ++v) {
    for (Vertex w : g.neighbors(v))
      if (pos[w] > pos[v]) {
        later[v].push_back(w);
        if (parent[v] < 0 || pos[w] < pos[parent[v]]) parent[v] = w;
      }
  }
  // C_v = {v} ∪ later(v) is dominated iff some u with parent v has one more later neighbour.
  std::vector<bool> maximal(g.n(), true);
  for (Vertex u = 0; u < g.n(); ++u)
    if (parent[u] >= 0 && later[u].size() == later[parent[u]].size() + 1) maximal[parent[u]] = false;
  std::vector<VertexSet> out;
  for (Vertex v = 0; v < g.n(); ++v)
    if (maximal[v]) {
      VertexSet c = later[v];
      c.push_back(v);
      out.push_back(sorted_set(std::move(c)));
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// For each vertex, the sorted ids of the maximal cliques containing it.
inline std::vector<std::vector<int>> clique_incidence(int n, const std::vector<VertexSet>& cliques) {
  std::vector<std::vector<int>> of(n);
  for (int c = 0; c < static_cast<int>(cliques.size()); ++c)
    for (Vertex v : cliques[c]) of[v].push_back(c);
  return of;
}

/// Laminar decomposition of a set family with the consecutive-ones property.
/// P nodes allow any order of their children, Q nodes fix it up to reversal,
/// leaves are single elements of the universe.
struct PQStructure {
  enum class Kind { P, Q, Leaf };
  struct Node {
    Kind kind = Kind::P;
    std::vector<int> elems;     // sorted
    std::vector<int> children;  // ordered for Q nodes
    int parent = -1;
  };
  std::vector<Node> nodes;
  int root = -1;
  std::map<std::vector<int>, int> node_of;  // element set -> node

  /// Elements in left-to-right frontier order.
  std::vector<int> frontier() const {
    std::vector<int> out;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (nodes[x].kind == Kind::Leaf) out.push_back(nodes[x].elems.front());
      for (auto it = nodes[x].children.rbegin(); it != nodes[x].children.rend(); ++it) stack.push_back(*it);
    }
    return out;
  }

  /// For a set that is not a node: the Q node and 1-based child range covering it.
  std::optional<std::tuple<int, int, int>> range_of(const std::vector<int>& set) const {
    for (int x = 0; x < static_cast<int>(nodes.size()); ++x) {
      const auto& nd = nodes[x];
      if (nd.kind != Kind::Q || !std::includes(nd.elems.begin(), nd.elems.end(), set.begin(), set.end())) continue;
      int s = -1, t = -1;
      std::size_t covered = 0;
      for (int i = 0; i < static_cast<int>(nd.children.size()); ++i) {
        const auto& ce = nodes[nd.children[i]].elems;
        auto inter = set_intersection(ce, set);
        if (inter.empty()) continue;
        if (inter.size() != ce.size()) { s = -2; break; }
        if (s < 0) s = i + 1;
        else if (t != i) { s = -2; break; }
        t = i + 1;
        covered += ce.size();
      }
      if (s > 0 && covered == set.size() && t > s) return std::make_tuple(x, s, t);
    }
    return std::nullopt;
  }
};

namespace detail {

inline bool overlaps(const std::vector<int>& a, const std::vector<int>& b) {
  auto inter = set_intersection(a, b);
  return !inter.empty() && inter.size() < a.size() && inter.size() < b.size();
}

/// Orders the membership classes of one overlap component so every member is
/// contiguous. Members are given in an order where each overlaps an earlier one.
inline std::optional<std::vector<std::vector<int>>> order_component(const std::vector<std::vector<int>>& members) {
  std::vector<std::vector<int>> blocks{members.front()};
  std::vector<int> placed = members.front();
  for (std::size_t mi = 1; mi < members.size(); ++mi) {
    const auto& m = members[mi];
    auto outside = set_difference(m, placed);
    std::vector<int> state(blocks.size());  // 0 none, 1 partial, 2 full
    int a = -1, b = -1;
    for (int j = 0; j < static_cast<int>(blocks.size()); ++j) {
      auto inter = set_intersection(blocks[j], m);
      state[j] = inter.empty() ? 0 : (inter.size() == blocks[j].size() ? 2 : 1);
      if (state[j]) {
        if (a < 0) a = j;
        b = j;
      }
    }
    if (a < 0) throw std::logic_error("order_component: member does not meet placed elements");
    for (int j = a + 1; j < b; ++j)
      if (state[j] != 2) return std::nullopt;
    auto split = [&](int j, bool member_first) {
      auto in = set_intersection(blocks[j], m);
      auto out = set_difference(blocks[j], m);
      blocks[j] = member_first ? in : out;
      blocks.insert(blocks.begin() + j + 1, member_first ? out : in);
    };
    const int last = static_cast<int>(blocks.size()) - 1;
    if (!outside.empty()) {
      bool right_ok = b == last && (a == b || state[b] == 2);
      bool left_ok = a == 0 && (a == b || state[a] == 2);
      if (blocks.size() == 1) left_ok = false;
      if (right_ok) {
        if (state[a] == 1) split(a, false);
        blocks.push_back(outside);
      } else if (left_ok) {
        if (state[b] == 1) split(b, true);
        blocks.insert(blocks.begin(), outside);
      } else {
        return std::nullopt;
      }
      placed = set_union(placed, outside);
    } else {
      if (a == b) throw std::logic_error("order_component: member inside a single block");
      if (state[b] == 1) split(b, true);
      if (state[a] == 1) split(a, false);
    }
  }
  // Certificate: every member is a contiguous run of blocks.
  for (const auto& m : members) {
    int a = -1, b = -1;
    std::size_t covered = 0;
    for (int j = 0; j < static_cast<int>(blocks.size()); ++j) {
      auto inter = set_intersection(blocks[j], m);
      if (inter.empty()) continue;
      if (inter.size() != blocks[j].size()) return std::nullopt;
      if (a < 0) a = j;
      else if (b != j - 1) return std::nullopt;
      b = j;
      covered += inter.size();
    }
    if (covered != m.size()) return std::nullopt;
  }
  return blocks;
}

}  // namespace detail

/// Builds the PQ decomposition of the family over elements 0..universe-1, or
/// nothing if the family lacks the consecutive-ones property.
inline std::optional<PQStructure> consecutive_structure(int universe, const std::vector<std::vector<int>>& family) {
  std::vector<std::vector<int>> sets;
  for (const auto& s : family)
    if (s.size() >= 2) sets.push_back(sorted_set(s));
  sets = [&] {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    return sets;
  }();
  const int s = static_cast<int>(sets.size());

  PQStructure pq;
  std::map<std::vector<int>, PQStructure::Kind> kinds;
  std::map<std::vector<int>, std::vector<std::vector<int>>> q_blocks;
  auto add = [&](const std::vector<int>& elems, PQStructure::Kind kind) {
    auto [it, fresh] = kinds.emplace(elems, kind);
    if (!fresh && kind == PQStructure::Kind::Q) it->second = kind;
  };

  std::vector<int> comp(s, -1);
  for (int start = 0; start < s; ++start) {
    if (comp[start] >= 0) continue;
    std::vector<int> bfs{start};
    comp[start] = start;
    for (std::size_t i = 0; i < bfs.size(); ++i)
      for (int o = 0; o < s; ++o)
        if (comp[o] < 0 && detail::overlaps(sets[bfs[i]], sets[o])) {
          comp[o] = start;
          bfs.push_back(o);
        }
    std::vector<int> uni;
    std::vector<std::vector<int>> members;
    for (int i : bfs) {
      uni = set_union(uni, sets[i]);
      members.push_back(sets[i]);
    }
    if (members.size() == 1) {
      add(uni, PQStructure::Kind::P);
      continue;
    }
    auto blocks = detail::order_component(members);
    if (!blocks) return std::nullopt;
    add(uni, PQStructure::Kind::Q);
    for (auto& blk : *blocks) {
      std::sort(blk.begin(), blk.end());
      add(blk, blk.size() == 1 ? PQStructure::Kind::Leaf : PQStructure::Kind::P);
    }
    q_blocks[uni] = *blocks;
  }
  std::vector<int> all(universe);
  for (int i = 0; i < universe; ++i) all[i] = i;
  if (universe > 0) add(all, universe == 1 ? PQStructure::Kind::Leaf : PQStructure::Kind::P);
  for (int i = 0; i < universe; ++i) add({i}, PQStructure::Kind::Leaf);

  // Nodes sorted by size so parents come after children.
  std::vector<std::vector<int>> order;
  for (auto& [elems, kind] : kinds) order.push_back(elems);
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  for (const auto& elems : order) {
    PQStructure::Node nd;
    nd.kind = kinds[elems];
    nd.elems = elems;
    pq.node_of[elems] = static_cast<int>(pq.nodes.size());
    pq.nodes.push_back(std::move(nd));
  }
  const int nn = static_cast<int>(pq.nodes.size());
  for (int x = 0; x < nn; ++x) {
    for (int y = x + 1; y < nn; ++y) {
      const auto& ey = pq.nodes[y].elems;
      const auto& ex = pq.nodes[x].elems;
      if (ey.size() > ex.size() && std::includes(ey.begin(), ey.end(), ex.begin(), ex.end())) {
        pq.nodes[x].parent = y;
        break;
      }
    }
    if (pq.nodes[x].parent >= 0) pq.nodes[pq.nodes[x].parent].children.push_back(x);
  }
  pq.root = nn - 1;
  for (int x = 0; x < nn; ++x) {
    auto& nd = pq.nodes[x];
    if (nd.kind != PQStructure::Kind::Q) continue;
    std::vector<int> ordered;
    for (const auto& blk : q_blocks[nd.elems]) {
      auto it = pq.node_of.find(blk);
      if (it == pq.node_of.end() || pq.nodes[it->second].parent != x)
        throw std::logic_error("consecutive_structure: Q node child mismatch");
      ordered.push_back(it->second);
    }
    if (ordered.size() != nd.children.size()) throw std::logic_error("consecutive_structure: Q node arity mismatch");
    nd.children = std::move(ordered);
  }
  // The frontier order must realise every input set consecutively.
  auto fr = pq.frontier();
  std::vector<int> pos(universe);
  for (int i = 0; i < static_cast<int>(fr.size()); ++i) pos[fr[i]] = i;
  for (const auto& st : sets) {
    int lo = universe, hi = -1;
    for (int e : st) {
      lo = std::min(lo, pos[e]);
      hi = std::max(hi, pos[e]);
    }
    if (hi - lo + 1 != static_cast<int>(st.size())) return std::nullopt;
  }
  return pq;
}

/// True iff g is chordal and its maximal cliques admit a consecutive ordering.
inline bool is_interval(const Graph& g) {
  if (!is_chordal(g)) return false;
  auto cliques = maximal_cliques(g);
  auto of = clique_incidence(g.n(), cliques);
  return consecutive_structure(static_cast<int>(cliques.size()), of).has_value();
}

}  // namespace chordaut
