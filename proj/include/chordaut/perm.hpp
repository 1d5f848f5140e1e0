#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace chordaut {

using BigInt = boost::multiprecision::cpp_int;

/// Bijection of 0..n-1. Products read left to right: x^(gh) = (x^g)^h.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(int n) : img_(n) { std::iota(img_.begin(), img_.end(), 0); }
  explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
    std::vector<bool> hit(img_.size(), false);
    for (int x : img_) {
      if (x < 0 || x >= size() || hit[x]) throw std::invalid_argument("Permutation: not a bijection");
      hit[x] = true;
    }
  }
  static Permutation identity(int n) { return Permutation(n); }

  /// Product of disjoint cycles on n points.
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 0);
    for (const auto& c : cycles)
      for (std::size_t i = 0; i < c.size(); ++i) img[c[i]] = c[(i + 1) % c.size()];
    return Permutation(std::move(img));
  }

  int size() const { return static_cast<int>(img_.size()); }
  int operator[](int x) const { return img_[x]; }
  const std::vector<int>& images() const { return img_; }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    Permutation r(size());
    for (int i = 0; i < size(); ++i) r.img_[img_[i]] = i;
    return r;
  }

  /// Apply *this first, then h.
  Permutation operator*(const Permutation& h) const {
    if (h.size() != size()) throw std::invalid_argument("Permutation: domain mismatch");
    Permutation r;
    r.img_.resize(img_.size());
    for (int i = 0; i < size(); ++i) r.img_[i] = h.img_[img_[i]];
    return r;
  }

  auto operator<=>(const Permutation&) const = default;

  std::string cycle_string() const {
    std::string out;
    std::vector<bool> seen(img_.size(), false);
    for (int i = 0; i < size(); ++i) {
      if (seen[i] || img_[i] == i) continue;
      out += '(';
      for (int j = i; !seen[j]; j = img_[j]) {
        seen[j] = true;
        if (j != i) out += ' ';
        out += std::to_string(j);
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

 private:
  std::vector<int> img_;
};

/// Permutation group stored as a stabilizer chain over a full base: every
/// point of the domain is a base point, in a caller-chosen order.
class PermGroup {
 public:
  struct Level {
    int point = 0;
    std::vector<int> gens;              // indices into strong_
    std::vector<int> orbit;             // orbit of point, in discovery order
    std::vector<int> trans;             // point -> index into transversal, or -1; empty when trivial
    std::vector<Permutation> transversal;  // transversal[k] maps point to orbit[k]; empty when trivial
  };

  PermGroup() = default;
  explicit PermGroup(int n) : PermGroup(n, {}) {}

  PermGroup(int n, const std::vector<Permutation>& gens, std::vector<int> base = {}) : n_(n) {
    if (base.empty()) {
      base.resize(n);
      std::iota(base.begin(), base.end(), 0);
    }
    if (static_cast<int>(base.size()) != n || sorted_copy(base) != iota_vec(n))
      throw std::invalid_argument("PermGroup: base must list every point once");
    for (const auto& g : gens) {
      if (g.size() != n) throw std::invalid_argument("PermGroup: generator domain mismatch");
      if (!g.is_identity() && std::find(gens_.begin(), gens_.end(), g) == gens_.end()) gens_.push_back(g);
    }
    levels_.resize(n);
    for (int l = 0; l < n; ++l) levels_[l].point = base[l];
    schreier_sims();
  }

  /// This group with extra generators, built on the existing chain.
  PermGroup extended(const std::vector<Permutation>& extra) const {
    PermGroup out = *this;
    out.done_.assign(n_, {});
    for (const auto& g : extra) {
      if (g.size() != n_) throw std::invalid_argument("PermGroup: generator domain mismatch");
      if (g.is_identity() || std::find(out.gens_.begin(), out.gens_.end(), g) != out.gens_.end()) continue;
      out.gens_.push_back(g);
      out.add_generator(g);
    }
    out.done_.clear();
    return out;
  }

  int degree() const { return n_; }
  const std::vector<Permutation>& generators() const { return gens_; }
  const std::vector<Permutation>& strong_generators() const { return strong_; }
  const std::vector<Level>& levels() const { return levels_; }
  std::vector<int> base() const {
    std::vector<int> b;
    for (const auto& l : levels_) b.push_back(l.point);
    return b;
  }

  BigInt order() const {
    BigInt o = 1;
    for (const auto& l : levels_) o *= static_cast<unsigned>(l.orbit.size());
    return o;
  }

  bool is_trivial() const { return strong_.empty(); }

  bool contains(const Permutation& p) const {
    if (p.size() != n_) return false;
    auto [h, lvl] = strip(p, 0);
    return lvl == n_ && h.is_identity();
  }

  /// Residue after sifting through levels from..n-1 and the level where it stopped.
  std::pair<Permutation, int> strip(Permutation g, int from) const {
    for (int l = from; l < n_; ++l) {
      const auto& lv = levels_[l];
      int beta = g[lv.point];
      if (beta == lv.point) continue;
      int k = lv.trans.empty() ? -1 : lv.trans[beta];
      if (k < 0) return {g, l};
      g = g * lv.transversal[k].inverse();
    }
    return {g, n_};
  }

  std::vector<int> orbit(int x) const {
    std::vector<int> out{x};
    std::vector<bool> seen(n_, false);
    seen[x] = true;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (const auto& g : gens_)
        if (!seen[g[out[i]]]) {
          seen[g[out[i]]] = true;
          out.push_back(g[out[i]]);
        }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::vector<int>> orbits() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(n_, false);
    for (int x = 0; x < n_; ++x) {
      if (seen[x]) continue;
      out.push_back(orbit(x));
      for (int y : out.back()) seen[y] = true;
    }
    return out;
  }

  /// Generators of the pointwise stabilizer of the first `depth` base points.
  std::vector<Permutation> stabilizer_generators(int depth) const {
    std::vector<Permutation> out;
    if (depth >= n_) return out;
    for (int k : levels_[depth].gens) out.push_back(strong_[k]);
    return out;
  }

  /// All elements; only for small groups.
  std::vector<Permutation> elements(std::size_t limit = 5'000'000) const {
    if (order() > limit) throw std::length_error("PermGroup::elements: group too large");
    std::vector<Permutation> cur{Permutation(n_)};
    for (int l = n_ - 1; l >= 0; --l) {
      const auto& lv = levels_[l];
      if (lv.orbit.size() == 1) continue;
      std::vector<Permutation> next;
      for (const auto& e : cur)
        for (const auto& u : lv.transversal) next.push_back(e * u);
      cur = std::move(next);
    }
    std::sort(cur.begin(), cur.end());
    return cur;
  }

  /// True when every generator of h lies in *this.
  bool contains_group(const PermGroup& h) const {
    for (const auto& g : h.generators())
      if (!contains(g)) return false;
    return true;
  }

 private:
  static std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
  }
  static std::vector<int> sorted_copy(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  }

  // Extends the orbit of level l after strong generator `added` joined it.
  // Existing transversal entries never change.
  void extend_level(int l, int added) {
    auto& lv = levels_[l];
    if (lv.trans.empty()) {
      if (strong_[added][lv.point] == lv.point) return;
      lv.trans.assign(n_, -1);
      lv.transversal = {Permutation(n_)};
      lv.trans[lv.point] = 0;
    }
    const std::size_t old = lv.orbit.size();
    auto visit = [&](int p, int k) {
      const auto& s = strong_[k];
      int q = s[p];
      if (lv.trans[q] >= 0) return;
      lv.trans[q] = static_cast<int>(lv.orbit.size());
      lv.orbit.push_back(q);
      lv.transversal.push_back(lv.transversal[lv.trans[p]] * s);
    };
    for (std::size_t i = 0; i < lv.orbit.size(); ++i) {
      if (i < old) {
        visit(lv.orbit[i], added);
      } else {
        for (int k : lv.gens) visit(lv.orbit[i], k);
      }
    }
  }

  // Incremental Schreier-Sims over the fixed full base. Trivial levels keep
  // no per-point tables, so large trivial groups stay cheap.
  void schreier_sims() {
    for (auto& lv : levels_) lv.orbit = {lv.point};
    done_.assign(n_, {});
    for (const auto& g : gens_) add_generator(g);
    done_.clear();
  }

  // Sifts g and, when it is new, adds its residue and recloses the chain.
  // done_[i][oi] counts the generators whose Schreier generator at orbit
  // point oi is known to sift; scanning stops at the first failure, so the
  // checked pairs always form a prefix.
  void add_generator(const Permutation& g) {
    auto [h0, j0] = strip(g, 0);
    if (j0 == n_) return;
    int i = push_strong(std::move(h0), j0);
    while (i >= 0) {
      bool restart = false;
      auto& lv = levels_[i];
      if (lv.orbit.size() == 1) {  // every generator here already lies one level down
        --i;
        continue;
      }
      auto& done = done_[i];
      done.resize(lv.orbit.size(), 0);
      for (std::size_t oi = 0; oi < lv.orbit.size() && !restart; ++oi) {
        const int beta = lv.orbit[oi];
        for (; done[oi] < static_cast<int>(lv.gens.size()); ++done[oi]) {
          const auto& s = strong_[lv.gens[done[oi]]];
          // At the base point a generator fixing it is its own Schreier
          // generator, and it already belongs to the next level.
          if (oi == 0 && s[beta] == beta) continue;
          const auto& u_img = lv.transversal[lv.trans[s[beta]]];
          auto [h, j] = strip(lv.transversal[oi] * s * u_img.inverse(), i + 1);
          if (j == n_) {
            if (!h.is_identity()) throw std::logic_error("schreier_sims: nontrivial residue fixes every base point");
            continue;
          }
          i = push_strong(std::move(h), j);
          restart = true;
          break;
        }
      }
      if (!restart) --i;
    }
  }

  // h fixes the base points before level j; it joins levels 0..j.
  int push_strong(Permutation h, int j) {
    const int idx = static_cast<int>(strong_.size());
    strong_.push_back(std::move(h));
    for (int l = 0; l <= j; ++l) {
      levels_[l].gens.push_back(idx);
      extend_level(l, idx);
    }
    return j;
  }

  int n_ = 0;
  std::vector<Permutation> gens_;
  std::vector<Permutation> strong_;
  std::vector<Level> levels_;
  std::vector<std::vector<int>> done_;
};

inline PermGroup group_from_generators(int n, const std::vector<Permutation>& gens) { return PermGroup(n, gens); }

/// Image of g on the sorted point set delta, renumbered 0..|delta|-1.
inline Permutation restrict_to(const Permutation& g, const std::vector<int>& delta) {
  std::vector<int> local(g.size(), -1);
  for (std::size_t i = 0; i < delta.size(); ++i) local[delta[i]] = static_cast<int>(i);
  std::vector<int> img(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i) {
    int y = local[g[delta[i]]];
    if (y < 0) throw std::invalid_argument("restrict_to: set is not invariant");
    img[i] = y;
  }
  return Permutation(std::move(img));
}

struct Restriction {
  PermGroup image;   // on |delta| points, local numbering
  PermGroup kernel;  // on the full domain
};

/// Restriction homomorphism to an invariant set: its image and kernel.
inline Restriction restriction(const PermGroup& g, std::vector<int> delta) {
  std::sort(delta.begin(), delta.end());
  delta.erase(std::unique(delta.begin(), delta.end()), delta.end());
  std::vector<Permutation> img;
  for (const auto& s : g.generators()) img.push_back(restrict_to(s, delta));
  std::vector<int> base = delta;
  for (int x = 0; x < g.degree(); ++x)
    if (!std::binary_search(delta.begin(), delta.end(), x)) base.push_back(x);
  PermGroup ordered(g.degree(), g.generators(), base);
  return {PermGroup(static_cast<int>(delta.size()), img),
          PermGroup(g.degree(), ordered.stabilizer_generators(static_cast<int>(delta.size())))};
}

/// Either empty, or group·rep (apply an element of the group, then rep).
class Coset {
 public:
  Coset() = default;
  Coset(PermGroup group, Permutation rep) : group_(std::move(group)), rep_(std::move(rep)), empty_(false) {
    if (rep_.size() != group_.degree()) throw std::invalid_argument("Coset: degree mismatch");
  }
  static Coset empty() { return Coset(); }
  static Coset of_group(const PermGroup& g) { return Coset(g, Permutation(g.degree())); }

  bool is_empty() const { return empty_; }
  explicit operator bool() const { return !empty_; }
  const PermGroup& group() const { return group_; }
  const Permutation& rep() const { return rep_; }
  int degree() const { return group_.degree(); }

  bool contains(const Permutation& p) const {
    return !empty_ && p.size() == degree() && group_.contains(p * rep_.inverse());
  }

  BigInt size() const { return empty_ ? BigInt(0) : group_.order(); }

  std::vector<Permutation> elements(std::size_t limit = 5'000'000) const {
    if (empty_) return {};
    std::vector<Permutation> out;
    for (const auto& g : group_.elements(limit)) out.push_back(g * rep_);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Subset test against another nonempty coset.
  bool subset_of(const Coset& o) const {
    if (empty_) return true;
    if (o.empty_) return false;
    return o.contains(rep_) && o.group_.contains_group(group_);
  }

 private:
  PermGroup group_;
  Permutation rep_;
  bool empty_ = true;
};

namespace detail {

/// Canonical images of `points` over the right coset R·x, where R is given by a
/// stabilizer chain whose leading levels are exactly `points` in order.
inline std::vector<int> min_image_key(const PermGroup& r, int depth, Permutation x) {
  std::vector<int> key;
  key.reserve(depth);
  for (int l = 0; l < depth; ++l) {
    const auto& lv = r.levels()[l];
    if (lv.orbit.size() == 1) {
      key.push_back(x[lv.point]);
      continue;
    }
    int best = -1;
    for (std::size_t k = 0; k < lv.orbit.size(); ++k)
      if (best < 0 || x[lv.orbit[k]] < x[lv.orbit[best]]) best = static_cast<int>(k);
    x = lv.transversal[best] * x;
    key.push_back(x[lv.point]);
  }
  return key;
}

inline void check_respects(const Permutation& p, const std::vector<int>& class_of) {
  for (int x = 0; x < p.size(); ++x)
    if (class_of[p[x]] != class_of[x]) throw std::invalid_argument("coset_intersection: element does not respect classes");
}

}  // namespace detail

/// Intersection of two cosets inside the direct product of the symmetric
/// groups on the classes. Classes are processed in the given order.
inline Coset coset_intersection(const Coset& c1, const Coset& c2, const std::vector<std::vector<int>>& classes) {
  if (c1.is_empty() || c2.is_empty()) return Coset::empty();
  // The orbit walk below runs over the first group, so let the smaller one lead.
  if (c1.group().order() > c2.group().order()) return coset_intersection(c2, c1, classes);
  const int n = c1.degree();
  if (c2.degree() != n) throw std::invalid_argument("coset_intersection: domain mismatch");
  std::vector<int> class_of(n, -1);
  std::vector<int> base;
  for (int c = 0; c < static_cast<int>(classes.size()); ++c)
    for (int x : classes[c]) {
      if (x < 0 || x >= n || class_of[x] >= 0) throw std::invalid_argument("coset_intersection: classes do not partition the domain");
      class_of[x] = c;
      base.push_back(x);
    }
  if (static_cast<int>(base.size()) != n) throw std::invalid_argument("coset_intersection: classes do not cover the domain");
  for (const auto* c : {&c1, &c2}) {
    detail::check_respects(c->rep(), class_of);
    for (const auto& g : c->group().generators()) detail::check_respects(g, class_of);
  }
  if (c1.subset_of(c2)) return c1;
  const Permutation sigma = c2.rep() * c1.rep().inverse();
  const PermGroup g2(n, c2.group().generators(), base);
  std::vector<Permutation> kgens = c1.group().generators();
  Permutation w(n);
  int depth = 0;
  for (const auto& cls : classes) {
    depth += static_cast<int>(cls.size());
    if (cls.size() <= 1) continue;
    auto key_of = [&](const Permutation& x) { return detail::min_image_key(g2, depth, x); };
    // Orbit of the trivial R-coset under K acting by right multiplication.
    std::map<std::vector<int>, int> index;
    std::vector<Permutation> reps{Permutation(n)};
    index[key_of(reps[0])] = 0;
    std::vector<Permutation> schreier;
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (const auto& k : kgens) {
        Permutation y = reps[i] * k;
        auto key = key_of(y);
        auto it = index.find(key);
        if (it == index.end()) {
          index.emplace(std::move(key), static_cast<int>(reps.size()));
          reps.push_back(std::move(y));
        } else {
          Permutation s = y * reps[it->second].inverse();
          if (!s.is_identity()) schreier.push_back(std::move(s));
        }
      }
    auto target = index.find(key_of(sigma * w.inverse()));
    if (target == index.end()) return Coset::empty();
    w = reps[target->second] * w;
    if (reps.size() == 1) continue;  // K already stabilizes this level
    PermGroup stab(n, schreier);
    kgens = stab.strong_generators();
  }
  return Coset(PermGroup(n, kgens), w * c1.rep());
}

/// Coset generated by a family of cosets whose union is known to be a coset.
inline Coset coset_union_as_coset(const std::vector<Coset>& parts) {
  const Coset* first = nullptr;
  for (const auto& p : parts)
    if (!p.is_empty()) {
      first = &p;
      break;
    }
  if (!first) return Coset::empty();
  const int n = first->degree();
  const Permutation tau0_inv = first->rep().inverse();
  std::vector<Permutation> gens;
  for (const auto& p : parts) {
    if (p.is_empty()) continue;
    if (p.degree() != n) throw std::invalid_argument("coset_union_as_coset: degree mismatch");
    for (const auto& g : p.group().generators()) gens.push_back(g);
    gens.push_back(p.rep() * tau0_inv);
  }
  return Coset(PermGroup(n, gens), first->rep());
}

}  // namespace chordaut
