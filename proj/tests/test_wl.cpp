#include <gtest/gtest.h>

#include "chordaut/testkit.hpp"
#include "chordaut/wl.hpp"

using namespace chordaut;

namespace {

Graph path(int n) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return Graph::from_edges(n, es);
}

// Naive 1-dimensional refinement, enough to cross-check vertex classes on trees.
Coloring color_refinement(const Graph& g) {
  Coloring pi = Coloring::uniform(g.n());
  for (;;) {
    std::vector<std::pair<int, std::vector<int>>> sig(g.n());
    for (int v = 0; v < g.n(); ++v) {
      sig[v].first = pi.color(v);
      for (int w : g.neighbors(v)) sig[v].second.push_back(pi.color(w));
      std::sort(sig[v].second.begin(), sig[v].second.end());
    }
    Coloring next = Coloring::from_labels(sig);
    if (next.size() == pi.size()) return next;
    pi = next;
  }
}

}  // namespace

TEST(Wl, Examples) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) es.emplace_back(i, j);
  EXPECT_EQ(wl_refine(Graph::from_edges(5, es), Coloring::uniform(5)).first.size(), 1);
  auto p4 = wl_refine(path(4), Coloring::uniform(4)).first;
  EXPECT_EQ(p4.size(), 2);
  EXPECT_EQ(p4.color(0), p4.color(3));
  EXPECT_EQ(p4.color(1), p4.color(2));
  auto p3 = wl_refine(path(3), Coloring::uniform(3)).first;
  EXPECT_EQ(p3.size(), 2);
  EXPECT_EQ(p3.color(0), p3.color(2));
}

TEST(Wl, CheckStableExamples) {
  EXPECT_FALSE(check_stable(path(4), Coloring::uniform(4)));
  EXPECT_TRUE(check_stable(path(4), Coloring::discrete(4)));
  EXPECT_TRUE(check_stable(path(4), wl_refine(path(4), Coloring::uniform(4)).first));
}

TEST(Wl, RefinesInputAndIsDeterministic) {
  for (int i = 0; i < 60; ++i) {
    testkit::GeneratorConfig cfg;
    cfg.n = 3 + i % 14;
    cfg.seed = 300 + i;
    cfg.colored = i % 2;
    auto in = testkit::gen_chordal(cfg);
    auto [a, pairs] = wl_refine(in.graph, in.coloring);
    auto b = wl_refine(in.graph, in.coloring).first;
    EXPECT_TRUE(a.refines(in.coloring));
    EXPECT_TRUE(check_stable(in.graph, a));
    EXPECT_EQ(a.colors(), b.colors());
    // Diagonal pair colors carry the vertex classes.
    for (int u = 0; u < in.graph.n(); ++u)
      for (int v = 0; v < in.graph.n(); ++v)
        EXPECT_EQ(pairs.at(u, u) == pairs.at(v, v), a.color(u) == a.color(v));
  }
}

TEST(Wl, AtLeastAsFineAsColorRefinement) {
  for (int i = 0; i < 40; ++i) {
    testkit::GeneratorConfig cfg;
    cfg.n = 4 + i % 12;
    cfg.seed = 500 + i;
    Graph g = testkit::gen_chordal(cfg).graph;
    EXPECT_TRUE(wl_refine(g, Coloring::uniform(g.n())).first.refines(color_refinement(g)));
  }
}

TEST(Wl, ClassesAreUnionsOfOrbits) {
  for (int i = 0; i < 40; ++i) {
    testkit::GeneratorConfig cfg;
    cfg.n = 4 + i % 7;
    cfg.seed = 700 + i;
    cfg.colored = i % 3 == 0;
    auto in = testkit::gen_chordal(cfg);
    auto pi = wl_refine(in.graph, in.coloring).first;
    PermGroup aut = testkit::brute_aut(in.graph, in.coloring);
    for (const auto& g : aut.generators())
      for (int v = 0; v < in.graph.n(); ++v) EXPECT_EQ(pi.color(v), pi.color(g[v]));
  }
}

TEST(Wl, ChordalStructureHolds) {
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    testkit::GeneratorConfig cfg;
    cfg.n = 4 + i % 20;
    cfg.leaf_bound = 2 + i % 4;
    cfg.seed = 1100 + i;
    cfg.colored = i % 2;
    cfg.connected = (i / 2) % 2;
    auto in = testkit::gen_chordal(cfg);
    auto v = testkit::wl_structure_violations(in.graph, wl_refine(in.graph, in.coloring).first);
    EXPECT_TRUE(v.empty()) << i << ": " << (v.empty() ? "" : v.front());
    ++checked;
  }
  EXPECT_EQ(checked, 200);
}

TEST(Wl, StructureCheckDetectsViolations) {
  // Two triangles of different size in one class break the equal-clique rule.
  Graph g = Graph::from_edges(5, {{0, 1}, {2, 3}, {3, 4}, {2, 4}});
  auto v = testkit::wl_structure_violations(g, Coloring::uniform(5));
  EXPECT_FALSE(v.empty());
}

TEST(RestrictStable, Examples) {
  Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {3, 4}});
  auto pi = wl_refine(g, Coloring::uniform(5)).first;
  auto one = restrict_stable(pi, pi.cls(pi.color(1)));
  EXPECT_EQ(one.size(), 1);
  EXPECT_TRUE(restrict_stable(pi, {0, 1, 2, 3, 4}).same_partition(pi));
  auto comp = restrict_stable(pi, {0, 1, 2}, &g);
  EXPECT_EQ(comp.n(), 3);
  EXPECT_EQ(comp.color(0), comp.color(2));
  EXPECT_NE(comp.color(0), comp.color(1));
  EXPECT_THROW(restrict_stable(pi, {0, 1}), std::invalid_argument);
}
