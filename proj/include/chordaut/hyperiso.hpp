#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "graph.hpp"
#include "hypergraph.hpp"
#include "perm.hpp"

namespace chordaut {

namespace detail {

inline void add_symmetric_generators(std::vector<Permutation>& gens, int n, const std::vector<int>& cls) {
  if (cls.size() < 2) return;
  gens.push_back(Permutation::from_cycles(n, {{cls[0], cls[1]}}));
  if (cls.size() > 2) gens.push_back(Permutation::from_cycles(n, {cls}));
}

/// Coset whose element set is exactly the given nonempty list.
inline Coset coset_of_elements(int n, const std::vector<Permutation>& elems) {
  if (elems.empty()) return Coset::empty();
  const Permutation inv = elems.front().inverse();
  std::vector<Permutation> gens;
  for (const auto& e : elems) gens.push_back(e * inv);
  return Coset(PermGroup(n, gens), elems.front());
}

inline Coset with_extra_generators(const Coset& c, const std::vector<Permutation>& extra) {
  if (c.is_empty() || extra.empty()) return c;
  return Coset(c.group().extended(extra), c.rep());
}

/// Shape of a node with every atom replaced by its class index.
class ShapeMapper {
 public:
  explicit ShapeMapper(const std::vector<int>& class_of) : class_of_(class_of) {}
  NodeId operator()(NodeId id) {
    if (auto it = memo_.find(id); it != memo_.end()) return it->second;
    const auto& nd = node(id);
    NodeId out;
    if (nd.atom >= 0) {
      out = atom(class_of_[nd.atom]);
    } else {
      std::vector<std::pair<NodeId, int>> kids;
      for (auto& [c, m] : nd.kids) kids.emplace_back((*this)(c), m);
      out = NodeTable::instance().nested(std::move(kids));
    }
    memo_.emplace(id, out);
    return out;
  }

 private:
  const std::vector<int>& class_of_;
  std::unordered_map<NodeId, NodeId> memo_;
};

}  // namespace detail

/// Level recursion computing the coset of color-preserving isomorphisms
/// between two hypergraphs that share one vertex coloring. Vertices outside
/// `domain` stay fixed; classes inside it that no edge touches are free.
class IsoEngine {
 public:
  IsoEngine(const Hypergraph& h, const Hypergraph& hp, std::vector<std::vector<int>> domain)
      : h_(h), hp_(hp), n_(h.n), class_of_(h.n, -1) {
    if (h.n != hp.n || h.vertex_color != hp.vertex_color)
      throw std::invalid_argument("IsoEngine: hypergraphs must share the vertex coloring");
    std::vector<bool> touched(n_, false), touched_p(n_, false);
    for (auto& [e, c] : h.edges)
      for (int v : atoms_of(e)) touched[v] = true;
    for (auto& [e, c] : hp.edges)
      for (int v : atoms_of(e)) touched_p[v] = true;
    std::vector<bool> in_domain(n_, false);
    for (const auto& cls : domain) {
      bool t = false, tp = false;
      for (int v : cls) {
        in_domain[v] = true;
        t = t || touched[v];
        tp = tp || touched_p[v];
      }
      if (t != tp) mismatch_ = true;
      (t ? active_ : inactive_).push_back(cls);
    }
    for (int v = 0; v < n_; ++v)
      if (!in_domain[v] && (touched[v] || touched_p[v]))
        throw std::invalid_argument("IsoEngine: edge uses a vertex outside the domain");
    partition_ = active_;
    partition_.insert(partition_.end(), inactive_.begin(), inactive_.end());
    for (int v = 0; v < n_; ++v)
      if (!in_domain[v]) partition_.push_back({v});
    for (int c = 0; c < static_cast<int>(partition_.size()); ++c)
      for (int v : partition_[c]) class_of_[v] = c;
    m_ = static_cast<int>(active_.size());
    index_blocks(h_, keys_);
    index_blocks(hp_, keys_p_);
  }

  /// iso(H, H') as a coset on the full vertex set.
  Coset solve() {
    if (mismatch_ || h_.edges.size() != hp_.edges.size()) return Coset::empty();
    std::vector<ColorId> c1, c2;
    for (auto& [e, c] : h_.edges) c1.push_back(c);
    for (auto& [e, c] : hp_.edges) c2.push_back(c);
    std::sort(c1.begin(), c1.end());
    std::sort(c2.begin(), c2.end());
    if (c1 != c2) return Coset::empty();
    std::vector<Permutation> free_gens;
    for (const auto& cls : inactive_) detail::add_symmetric_generators(free_gens, n_, cls);
    // With singleton active classes the only candidate is the identity there.
    const bool rigid = std::all_of(active_.begin(), active_.end(), [](const auto& c) { return c.size() == 1; });
    if (m_ == 0 || rigid) {
      if (h_.edges != hp_.edges) return Coset::empty();
      return Coset(PermGroup(n_, free_gens), Permutation(n_));
    }
    Coset res = level(0, -1, -1);
    return detail::with_extra_generators(res, free_gens);
  }

  /// Coset for the i-blocks with prefix keys a and ap (keys ignored at level 0).
  Coset level(int i, NodeId a, NodeId ap) {
    auto memo_key = std::make_tuple(i, a, ap);
    if (auto it = memo_.find(memo_key); it != memo_.end()) return it->second;
    Coset out = compute_level(i, a, ap);
    memo_.emplace(memo_key, out);
    return out;
  }

  int levels() const { return m_; }
  const std::vector<std::vector<int>>& active_classes() const { return active_; }

 private:
  // keys[i][e]: projection of edge e onto the first i active classes (i >= 1).
  void index_blocks(const Hypergraph& h, std::vector<std::vector<NodeId>>& keys) {
    keys.assign(m_ + 1, std::vector<NodeId>(h.edges.size(), -1));
    for (int i = 1; i <= m_; ++i) {
      auto pr = prefix_projector(active_, i, n_);
      for (std::size_t e = 0; e < h.edges.size(); ++e) keys[i][e] = pr(h.edges[e].first);
    }
  }

  std::vector<int> block_edges(const std::vector<std::vector<NodeId>>& keys, const Hypergraph& h, int i, NodeId key) const {
    std::vector<int> out;
    for (int e = 0; e < static_cast<int>(h.edges.size()); ++e)
      if (i == 0 || keys[i][e] == key) out.push_back(e);
    return out;
  }

  /// A[i]: at level 0 the block itself, otherwise its projection onto classes i..m.
  Hypergraph level_hypergraph(const Hypergraph& h, const std::vector<int>& blk, int i) const {
    if (i == 0) {
      std::vector<std::pair<NodeId, ColorId>> es;
      for (int e : blk) es.push_back(h.edges[e]);
      return Hypergraph(n_, h.vertex_color, es);
    }
    return block_hypergraph(h, blk, active_, i);
  }

  std::vector<std::vector<int>> domain_from(int i) const {
    return {active_.begin() + std::max(0, i - 1), active_.end()};
  }

  Coset compute_level(int i, NodeId a, NodeId ap) {
    const auto blk = block_edges(keys_, h_, i, a);
    const auto blkp = block_edges(keys_p_, hp_, i, ap);
    if (blk.empty() || blk.size() != blkp.size()) return Coset::empty();
    if (i == m_) return last_level(blk, blkp);

    const Hypergraph x = level_hypergraph(h_, blk, i);
    const Hypergraph xp = level_hypergraph(hp_, blkp, i);
    if (x.order() != xp.order()) return Coset::empty();
    Coset d0 = x.order() >= 2 ? IsoEngine(skeleton(x), skeleton(xp), domain_from(i)).solve()
                                                     : order1_start(i, blk, blkp);
    if (d0.is_empty()) return d0;

    // Children: (i+1)-blocks.
    auto group_children = [&](const std::vector<std::vector<NodeId>>& keys, const std::vector<int>& b) {
      std::vector<NodeId> out;
      for (int e : b) out.push_back(keys[i + 1][e]);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };
    const auto ch = group_children(keys_, blk);
    const auto chp = group_children(keys_p_, blkp);
    if (ch.size() != chp.size()) return Coset::empty();
    const int l = static_cast<int>(ch.size());

    detail::ShapeMapper shape(class_of_);
    auto invariant = [&](const std::vector<std::vector<NodeId>>& keys, const Hypergraph& h, NodeId key) {
      std::vector<std::pair<NodeId, ColorId>> sig;
      for (int e : block_edges(keys, h, i + 1, key)) sig.emplace_back(shape(h.edges[e].first), h.edges[e].second);
      std::sort(sig.begin(), sig.end());
      return sig;
    };
    std::vector<std::vector<std::pair<NodeId, ColorId>>> inv(l), invp(l);
    for (int j = 0; j < l; ++j) {
      inv[j] = invariant(keys_, h_, ch[j]);
      invp[j] = invariant(keys_p_, hp_, chp[j]);
    }
    std::vector<std::vector<int>> cand(l);
    for (int j = 0; j < l; ++j) {
      for (int jp = 0; jp < l; ++jp)
        if (inv[j] == invp[jp]) cand[j].push_back(jp);
      if (cand[j].empty()) return Coset::empty();
    }
    std::vector<int> order(l);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int p, int q) { return cand[p].size() < cand[q].size(); });

    std::vector<Permutation> sym_ci;
    if (i >= 1) detail::add_symmetric_generators(sym_ci, n_, active_[i - 1]);

    Coset acc = Coset::empty();
    std::vector<bool> used(l, false);
    auto dfs = [&](auto&& self, int pos, const Coset& d) -> void {
      if (pos == l) {
        acc = acc.is_empty() ? d : coset_union_as_coset({acc, d});
        return;
      }
      const int j = order[pos];
      for (int jp : cand[j]) {
        if (used[jp]) continue;
        Coset child = level(i + 1, ch[j], chp[jp]);
        if (child.is_empty()) continue;
        Coset next = coset_intersection(d, detail::with_extra_generators(child, sym_ci), partition_);
        if (next.is_empty()) continue;
        if (!acc.is_empty() && next.subset_of(acc)) continue;
        used[jp] = true;
        self(self, pos + 1, next);
        used[jp] = false;
      }
    };
    dfs(dfs, 0, d0);
    return acc;
  }

  /// Order-1 start at level i: maps of C_i carrying the common C_i-trace of
  /// the block onto that of the other block, free on later classes.
  Coset order1_start(int i, const std::vector<int>& blk, const std::vector<int>& blkp) const {
    std::vector<Permutation> gens;
    Permutation rep(n_);
    const int first_free = i;  // active_[i] is the class after C_i
    if (i >= 1) {
      const auto& ci = active_[i - 1];
      auto trace = [&](const Hypergraph& h, int e) {
        auto at = atoms_of(h.edges[e].first);
        return set_intersection(at, ci);
      };
      auto q = trace(h_, blk.front());
      auto qp = trace(hp_, blkp.front());
      if (q.size() != qp.size()) return Coset::empty();
      auto rest = set_difference(ci, q);
      auto restp = set_difference(ci, qp);
      std::vector<int> img(n_);
      std::iota(img.begin(), img.end(), 0);
      for (std::size_t k = 0; k < q.size(); ++k) img[q[k]] = qp[k];
      for (std::size_t k = 0; k < rest.size(); ++k) img[rest[k]] = restp[k];
      rep = Permutation(std::move(img));
      detail::add_symmetric_generators(gens, n_, q);
      detail::add_symmetric_generators(gens, n_, rest);
    }
    return Coset(free_tail(first_free).extended(gens), rep);
  }

  /// Symmetric group on the active classes j..m-1, built once per j.
  const PermGroup& free_tail(int j) const {
    if (tails_.empty()) tails_.resize(m_ + 1);
    if (!tails_[j]) {
      if (j == m_) {
        tails_[j] = PermGroup(n_);
      } else {
        std::vector<Permutation> gens;
        detail::add_symmetric_generators(gens, n_, active_[j]);
        tails_[j] = free_tail(j + 1).extended(gens);
      }
    }
    return *tails_[j];
  }

  /// Level m: single edges; brute force over the bijections of the last class.
  Coset last_level(const std::vector<int>& blk, const std::vector<int>& blkp) const {
    if (blk.size() != 1 || blkp.size() != 1) throw std::logic_error("IsoEngine: last level block is not a single edge");
    const auto& [e, c] = h_.edges[blk.front()];
    const auto& [ep, cp] = hp_.edges[blkp.front()];
    if (c != cp) return Coset::empty();
    const auto& cm = active_[m_ - 1];
    std::vector<bool> in(n_, false);
    for (int v : cm) in[v] = true;
    Projector pr(in), prp(in);
    const NodeId q = pr(e), qp = prp(ep);
    std::vector<int> img = cm;
    std::vector<Permutation> found;
    do {
      std::vector<int> full(n_);
      std::iota(full.begin(), full.end(), 0);
      for (std::size_t k = 0; k < cm.size(); ++k) full[cm[k]] = img[k];
      Permutation g(std::move(full));
      if (Applier(g)(q) == qp) found.push_back(std::move(g));
    } while (std::next_permutation(img.begin(), img.end()));
    return detail::coset_of_elements(n_, found);
  }

  const Hypergraph& h_;
  const Hypergraph& hp_;
  int n_;
  int m_ = 0;
  bool mismatch_ = false;
  std::vector<std::vector<int>> active_, inactive_, partition_;
  std::vector<int> class_of_;
  std::vector<std::vector<NodeId>> keys_, keys_p_;
  std::map<std::tuple<int, NodeId, NodeId>, Coset> memo_;
  mutable std::vector<std::optional<PermGroup>> tails_;
};

struct IsoOptions {
  bool reverse_class_order = false;  // process color classes in descending order
};

/// Coset of color-preserving isomorphisms H -> H'.
inline Coset iso_hypergraphs(const Hypergraph& h, const Hypergraph& hp, IsoOptions opt = {}) {
  if (h.n != hp.n) return Coset::empty();
  auto sorted_colors = [](std::vector<ColorId> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted_colors(h.vertex_color) != sorted_colors(hp.vertex_color)) return Coset::empty();
  // Align: the k-th vertex of a class in H' is renamed to the k-th vertex of that class in H.
  const auto classes = h.classes();
  const auto classes_p = hp.classes();
  std::vector<int> align(h.n);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (std::size_t k = 0; k < classes[c].size(); ++k) align[classes_p[c][k]] = classes[c][k];
  const Permutation sigma(align);
  const Hypergraph hq = hp.apply(sigma);
  auto domain = classes;
  if (opt.reverse_class_order) std::reverse(domain.begin(), domain.end());
  Coset c = IsoEngine(h, hq, domain).solve();
  if (c.is_empty()) return c;
  return Coset(c.group(), c.rep() * sigma.inverse());
}

inline PermGroup aut_hypergraph(const Hypergraph& h) { return iso_hypergraphs(h, h).group(); }

/// The order-1 case: the level recursion with trace matching in place of the skeleton step.
inline Coset iso_base_order1(const Hypergraph& h, const Hypergraph& hp) {
  if (h.order() > 1 || hp.order() > 1) throw std::invalid_argument("iso_base_order1: order must be 1");
  return iso_hypergraphs(h, hp);
}

}  // namespace chordaut
