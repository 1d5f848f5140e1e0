// Acceptance sweep: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chordaut/chordal.hpp"
#include "chordaut/hyperiso.hpp"
#include "chordaut/interval.hpp"
#include "chordaut/testkit.hpp"
#include "chordaut/wl.hpp"

using namespace chordaut;
namespace tk = chordaut::testkit;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

tk::Instance make(std::uint64_t seed, int n, int leaf_bound, bool colored, bool twinless, bool connected = false) {
  tk::GeneratorConfig cfg;
  cfg.n = n;
  cfg.leaf_bound = leaf_bound;
  cfg.seed = seed;
  cfg.colored = colored;
  cfg.twinless = twinless;
  cfg.connected = connected;
  return tk::gen_chordal(cfg);
}

std::set<Permutation> as_set(const std::vector<Permutation>& v) { return {v.begin(), v.end()}; }

std::string join(std::initializer_list<std::string> parts) {
  std::ostringstream out;
  for (const auto& p : parts) out << p;
  return out.str();
}

Verdict aut_oracle() {
  int total = 0, wrong = 0, bad_gens = 0;
  for (int i = 0; i < 360; ++i) {
    auto in = make(1000 + i, 3 + i % 8, 2 + i % 3, (i / 3) % 2, (i / 6) % 2, i % 5 != 0);
    PermGroup g = aut(in.graph, in.coloring);
    if (g.order() != tk::brute_aut(in.graph, in.coloring).order()) ++wrong;
    for (const auto& s : g.generators())
      if (!is_automorphism(in.graph, &in.coloring, s.images())) ++bad_gens;
    ++total;
  }
  return {wrong == 0 && bad_gens == 0 && total >= 300,
          join({std::to_string(total), " graphs, ", std::to_string(wrong), " order mismatches, ", std::to_string(bad_gens),
                " invalid generators"})};
}

Verdict iso_oracle() {
  std::mt19937_64 rng(2024);
  int total = 0, wrong = 0, bad_cert = 0, positive = 0;
  for (int i = 0; i < 320; ++i) {
    auto a = make(3000 + i, 3 + i % 8, 2 + i % 3, false, false, i % 3 != 0);
    Graph b = i % 2 == 0 ? tk::relabel(a.graph, tk::random_permutation(rng, a.graph.n()))
                         : make(7000 + i, a.graph.n(), 2 + i % 3, false, false, i % 3 != 0).graph;
    auto m = iso(a.graph, b);
    if (m.has_value() != tk::brute_iso(a.graph, b).has_value()) ++wrong;
    if (m) {
      ++positive;
      if (!is_isomorphism(a.graph, b, m->images())) ++bad_cert;
    }
    ++total;
  }
  return {wrong == 0 && bad_cert == 0 && total >= 300,
          join({std::to_string(total), " pairs (", std::to_string(positive), " isomorphic), ", std::to_string(wrong),
                " decision mismatches, ", std::to_string(bad_cert), " bad certificates"})};
}

double time_hyper_batch(int b) {
  std::mt19937_64 rng(55 + b);
  std::vector<std::pair<Hypergraph, Hypergraph>> batch;
  for (int i = 0; i < 60; ++i) {
    auto h = tk::random_hypergraph(rng, 12, 2, b, 6);
    batch.emplace_back(h, h.apply(tk::random_permutation(rng, 12)));
  }
  double best = 1e100;
  for (int rep = 0; rep < 3; ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& [h, hp] : batch) (void)iso_hypergraphs(h, hp);
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

Verdict hypergraph_engine() {
  std::mt19937_64 rng(404);
  int total = 0, wrong = 0;
  for (int i = 0; i < 240; ++i) {
    const int k = 1 + i % 3;
    const int n = 2 + static_cast<int>(rng() % 5);
    const int edges = 2 + static_cast<int>(rng() % 4);
    auto h = tk::random_hypergraph(rng, n, k, 3, edges);
    Hypergraph hp = i % 2 ? h.apply(tk::random_permutation(rng, n)) : tk::random_hypergraph(rng, n, k, 3, edges);
    Coset c = iso_hypergraphs(h, hp);
    std::set<Permutation> got;
    if (!c.is_empty()) got = as_set(c.elements());
    if (got != as_set(tk::brute_hyper_iso(h, hp))) ++wrong;
    ++total;
  }
  const double t2 = time_hyper_batch(2), t3 = time_hyper_batch(3);
  char timing[96];
  std::snprintf(timing, sizeof timing, "; batch time b=2 %.4fs, b=3 %.4fs", t2, t3);
  return {wrong == 0 && total >= 200 && t3 > t2,
          join({std::to_string(total), " hypergraphs, ", std::to_string(wrong), " element-set mismatches", timing})};
}

Verdict wl_structure() {
  int total = 0, bad = 0;
  std::string first;
  for (int i = 0; i < 300; ++i) {
    auto in = make(11000 + i, 3 + i % 28, 1 + i % 5, i % 2, (i / 2) % 2, (i / 4) % 2);
    auto stable = wl_refine(in.graph, in.coloring).first;
    auto v = tk::wl_structure_violations(in.graph, stable);
    if (!v.empty()) {
      ++bad;
      if (first.empty()) first = v.front();
    }
    ++total;
  }
  return {bad == 0, join({std::to_string(total), " stable colorings, ", std::to_string(bad), " violations", first.empty() ? "" : " (" + first + ")"})};
}

Verdict class_bound() {
  int total = 0, bad = 0, deadlocks = 0;
  std::size_t worst = 0;
  for (int i = 0; i < 300; ++i) {
    const int l = 1 + i % 4;
    auto in = make(13000 + i, 4 + i % 27, l, i % 3 == 0, true, i % 2);
    try {
      auto st = critical_loop(in.graph, in.coloring, l);
      if (st.omega_star.empty()) continue;
      auto hs = build_hstar(in.graph, st.pi, st.omega_star);
      worst = std::max(worst, hs.max_class_size());
      if (hs.max_class_size() > (static_cast<std::size_t>(l) << l)) ++bad;
      ++total;
    } catch (const NonCriticalDeadlock&) {
      ++deadlocks;  // impossible when the threshold is at least the leafage
    }
  }
  return {bad == 0 && deadlocks == 0 && total > 0,
          join({std::to_string(total), " critical instances, ", std::to_string(bad), " over L*2^L, ", std::to_string(deadlocks),
                " deadlocks, largest class ", std::to_string(worst)})};
}

Verdict canonicity() {
  std::mt19937_64 rng(606);
  int pairs = 0, wrong = 0, positive = 0;
  for (int i = 0; i < 220; ++i) {
    auto a = make(15000 + i, 2 + i % 7, 2, true, false);
    tk::Instance b;
    if (i % 2 == 0) {
      auto p = tk::random_permutation(rng, a.graph.n());
      b = {a.rep, tk::relabel(a.graph, p), tk::relabel(a.coloring, p)};
    } else {
      b = make(16000 + i, a.graph.n(), 2, true, false);
    }
    auto m = tree_isomorphism(canonical_tree(a.graph, a.coloring), canonical_tree(b.graph, b.coloring));
    auto expect = tk::brute_all_iso(a.graph, a.coloring, b.graph, b.coloring);
    ++pairs;
    if (m.has_value() != !expect.empty()) {
      ++wrong;
      continue;
    }
    if (!m) continue;
    ++positive;
    Permutation mp(*m);
    std::vector<Permutation> got;
    for (const auto& x : aut_colored_interval(a.graph, a.coloring).elements()) got.push_back(x * mp);
    if (as_set(got) != as_set(expect)) ++wrong;
  }
  int boundary_pairs = 0, boundary_bad = 0;
  for (int i = 0; i < 200; ++i) {
    auto in = make(17000 + i, 4 + i % 5, 2 + i % 3, i % 2, false);
    for (int l : {1, 2}) {
      CriticalState st;
      try {
        st = critical_loop(in.graph, in.coloring, l);
      } catch (const NonCriticalDeadlock&) {
        continue;
      }
      std::vector<BoundaryHypergraph> hys;
      for (const auto& y : outside_components(in.graph, st.omega_star)) hys.push_back(boundary_hypergraph(in.graph, st.pi.colors(), y));
      for (const auto& x : hys)
        for (const auto& y : hys) {
          ++boundary_pairs;
          if (!tk::boundary_identity_holds(x, y, st.pi.colors())) ++boundary_bad;
        }
    }
  }
  return {wrong == 0 && boundary_bad == 0 && pairs >= 200 && boundary_pairs > 0,
          join({std::to_string(pairs), " tree pairs (", std::to_string(positive), " isomorphic), ", std::to_string(wrong),
                " mismatches; ", std::to_string(boundary_pairs), " boundary pairs, ", std::to_string(boundary_bad), " failures"})};
}

Verdict micro_identities() {
  int applicable = 0, bad = 0, deadlocks = 0;
  for (int i = 0; i < 400; ++i) {
    auto in = make(19000 + i, 3 + i % 5, 2 + i % 3, i % 2, true);
    for (int l : {1, 2}) {
      tk::MicroIdentities r;
      try {
        r = tk::micro_identities(in.graph, in.coloring, l);
      } catch (const NonCriticalDeadlock&) {
        ++deadlocks;
        continue;
      }
      if (!r.applicable) continue;
      ++applicable;
      if (!(r.restriction_equals_intersection && r.aut_in_gstar && r.gstar_in_induced_aut && r.hdiamond_is_boundary_aut)) ++bad;
    }
  }
  return {bad == 0 && applicable >= 100,
          join({std::to_string(applicable), " instances with a critical set, ", std::to_string(bad), " identity failures, ",
                std::to_string(deadlocks), " threshold-1 deadlocks skipped"})};
}

Verdict loop_bounds() {
  int total = 0, over_iter = 0, over_bound = 0, max_iter = 0;
  for (int i = 0; i < 300; ++i) {
    const int lb = 1 + i % 5;
    auto in = make(21000 + i, 3 + i % 28, lb, i % 2, (i / 2) % 2, (i / 4) % 2);
    AutResult r = aut_report(in.graph, in.coloring);
    max_iter = std::max(max_iter, r.critical_iterations);
    if (r.critical_iterations > in.graph.n()) ++over_iter;
    if (r.leafage_bound > 2 * lb) ++over_bound;
    for (int l = 1; l <= 4; ++l) {
      try {
        auto st = critical_loop(in.graph, in.coloring, l);
        if (st.iterations > in.graph.n()) ++over_iter;
      } catch (const NonCriticalDeadlock&) {
      }
    }
    ++total;
  }
  return {over_iter == 0 && over_bound == 0,
          join({std::to_string(total), " instances, ", std::to_string(over_iter), " over n iterations (max seen ", std::to_string(max_iter),
                "), ", std::to_string(over_bound), " with final L > 2*leaf_bound"})};
}

Verdict equivariance() {
  std::mt19937_64 rng(909);
  int total = 0, order_bad = 0, set_bad = 0, set_checked = 0;
  for (int i = 0; i < 100; ++i) {
    auto in = make(23000 + i, 3 + i % 12, 2 + i % 3, i % 2, false);
    auto p = tk::random_permutation(rng, in.graph.n());
    PermGroup g = aut(in.graph, in.coloring);
    PermGroup h = aut(tk::relabel(in.graph, p), tk::relabel(in.coloring, p));
    if (g.order() != h.order()) ++order_bad;
    if (in.graph.n() <= 7) {
      std::set<Permutation> conj;
      for (const auto& x : g.elements()) conj.insert(p.inverse() * x * p);
      if (conj != as_set(h.elements())) ++set_bad;
      ++set_checked;
    }
    ++total;
  }
  return {order_bad == 0 && set_bad == 0,
          join({std::to_string(total), " relabelings, ", std::to_string(order_bad), " order mismatches, ", std::to_string(set_checked),
                " element-set comparisons, ", std::to_string(set_bad), " mismatches"})};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"aut matches brute force", aut_oracle},
      {"iso matches brute force", iso_oracle},
      {"hypergraph isomorphism engine", hypergraph_engine},
      {"stable coloring structure", wl_structure},
      {"H* class size bound", class_bound},
      {"canonical tree and boundary identity", canonicity},
      {"micro-scale sandwich identities", micro_identities},
      {"refinement and deepening bounds", loop_bounds},
      {"relabeling equivariance", equivariance},
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
