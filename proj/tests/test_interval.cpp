#include <gtest/gtest.h>

#include <set>

#include "chordaut/chordal.hpp"
#include "chordaut/interval.hpp"
#include "chordaut/testkit.hpp"

using namespace chordaut;

namespace {

Graph path(int n) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return Graph::from_edges(n, es);
}

Graph claw() { return Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}}); }

testkit::Instance interval_instance(int i, int n) {
  testkit::GeneratorConfig cfg;
  cfg.n = n;
  cfg.leaf_bound = 2;
  cfg.seed = 4000 + i;
  cfg.colored = i % 2;
  cfg.num_colors = 2;
  cfg.connected = i % 3 != 0;
  return testkit::gen_chordal(cfg);
}

std::set<Permutation> to_set(const std::vector<Permutation>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(CanonicalTree, SingleVertex) {
  auto t = canonical_tree(Graph(1), Coloring::uniform(1));
  EXPECT_EQ(t.leaf_of.size(), 1u);
  EXPECT_EQ(t.leaves[t.root], (VertexSet{0}));
}

TEST(CanonicalTree, LeavesAreTheVertices) {
  for (int i = 0; i < 30; ++i) {
    auto in = interval_instance(i, 3 + i % 8);
    auto t = canonical_tree(in.graph, in.coloring);
    VertexSet all(in.graph.n());
    std::iota(all.begin(), all.end(), 0);
    EXPECT_EQ(t.leaves[t.root], all);
    for (Vertex v = 0; v < in.graph.n(); ++v) EXPECT_EQ(t.nodes[t.leaf_of[v]].leaf, v);
  }
}

TEST(CanonicalTree, P3LeafOrbits) {
  auto g = aut_colored_interval(path(3), Coloring::uniform(3));
  EXPECT_EQ(g.order(), 2);
  EXPECT_EQ(g.orbit(0), (std::vector<int>{0, 2}));
  EXPECT_EQ(g.orbit(1), (std::vector<int>{1}));
}

TEST(CanonicalTree, SameDegreesDifferentGraphs) {
  // P_2 + P_4 and P_3 + P_3 share the degree sequence 1,1,1,1,2,2.
  Graph a = Graph::from_edges(6, {{0, 1}, {2, 3}, {3, 4}, {4, 5}});
  Graph b = Graph::from_edges(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  auto ta = canonical_tree(a, Coloring::uniform(6)), tb = canonical_tree(b, Coloring::uniform(6));
  EXPECT_NE(ta.root_code(), tb.root_code());
  EXPECT_FALSE(tree_isomorphism(ta, tb).has_value());
}

TEST(CanonicalTree, RejectsNonInterval) {
  Graph spider = Graph::from_edges(7, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}});
  EXPECT_THROW(canonical_tree(spider, Coloring::uniform(7)), GraphError);
  EXPECT_THROW(aut_colored_interval(spider, Coloring::uniform(7)), GraphError);
}

TEST(AutColoredInterval, Examples) {
  EXPECT_EQ(aut_colored_interval(claw(), Coloring::uniform(4)).order(), 6);
  EXPECT_EQ(aut_colored_interval(path(4), Coloring::uniform(4)).order(), 2);
  auto pi = Coloring::from_labels(std::vector<int>{0, 0, 0, 1});
  EXPECT_EQ(aut_colored_interval(claw(), pi).order(), 2);
  EXPECT_EQ(aut_colored_interval(Graph(3), Coloring::uniform(3)).order(), 6);
}

TEST(AutColoredInterval, MatchesBruteForceElementwise) {
  for (int i = 0; i < 120; ++i) {
    auto in = interval_instance(i, 2 + i % 7);
    auto g = aut_colored_interval(in.graph, in.coloring);
    auto b = testkit::brute_aut(in.graph, in.coloring);
    ASSERT_EQ(g.order(), b.order()) << i;
    EXPECT_EQ(to_set(g.elements()), to_set(b.elements())) << i;
  }
}

// Leaf maps of tree isomorphisms, composed with the automorphisms, give
// exactly the colored graph isomorphisms.
TEST(TreeIsomorphism, LeafMapsAreExactlyGraphIsomorphisms) {
  std::mt19937_64 rng(77);
  int positive = 0;
  for (int i = 0; i < 200; ++i) {
    auto a = interval_instance(i, 2 + i % 7);
    testkit::Instance b;
    if (i % 2 == 0) {
      auto p = testkit::random_permutation(rng, a.graph.n());
      b = {a.rep, testkit::relabel(a.graph, p), testkit::relabel(a.coloring, p)};
    } else {
      b = interval_instance(i + 1000, a.graph.n());
    }
    auto ta = canonical_tree(a.graph, a.coloring), tb = canonical_tree(b.graph, b.coloring);
    auto m = tree_isomorphism(ta, tb);
    auto expect = testkit::brute_all_iso(a.graph, a.coloring, b.graph, b.coloring);
    ASSERT_EQ(m.has_value(), !expect.empty()) << i;
    if (!m) continue;
    ++positive;
    Permutation mp(*m);
    EXPECT_TRUE(is_isomorphism(a.graph, b.graph, mp.images()));
    std::vector<Permutation> got;
    for (const auto& x : aut_colored_interval(a.graph, a.coloring).elements()) got.push_back(x * mp);
    EXPECT_EQ(to_set(got), to_set(expect)) << i;
  }
  EXPECT_GE(positive, 100);
}

TEST(IsoColoredInterval, AgreesWithBruteForce) {
  for (int i = 0; i < 80; ++i) {
    auto a = interval_instance(i, 5);
    auto b = interval_instance(i + 500, 5);
    auto m = iso_colored_interval(a.graph, a.coloring.colors(), b.graph, b.coloring.colors());
    EXPECT_EQ(m.has_value(), testkit::brute_iso_colored(a.graph, a.coloring, b.graph, b.coloring).has_value()) << i;
    if (m) EXPECT_TRUE(is_isomorphism(a.graph, b.graph, m->images()));
  }
}

TEST(BoundaryHypergraph, PendantVertex) {
  // Y = {1} pendant on vertex 0.
  Graph x = Graph::from_edges(3, {{0, 1}, {0, 2}});
  std::vector<int> colors{0, 1, 2};
  auto hy = boundary_hypergraph(x, colors, {1});
  EXPECT_EQ(hy.boundary, (VertexSet{0}));
  ASSERT_FALSE(hy.edges.empty());
  for (const auto& e : hy.edges) EXPECT_EQ(e.vertices, (VertexSet{0}));
}

TEST(BoundaryHypergraph, IsomorphicClosuresGiveEqualSignatures) {
  // Two pendant paths 0-1-2 and 0-3-4 on the boundary vertex 0.
  Graph x = Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 3}, {3, 4}});
  std::vector<int> colors{0, 1, 2, 1, 2};
  auto a = boundary_hypergraph(x, colors, {1, 2});
  auto b = boundary_hypergraph(x, colors, {3, 4});
  EXPECT_EQ(a.signature(), b.signature());
  EXPECT_EQ(a.closure_type(), b.closure_type());
  auto lifted = lift_boundary_iso(a, b, {0});
  // Closure-local order of a is (0,1,2); the lift sends 1 -> 3 and 2 -> 4.
  EXPECT_EQ(lifted, (std::vector<Vertex>{0, 3, 4}));
}

TEST(BoundaryHypergraph, DifferentClosuresGiveNoIsomorphism) {
  Graph x = Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {3, 5}});
  std::vector<int> colors{0, 1, 2, 1, 2, 2};
  auto a = boundary_hypergraph(x, colors, {1, 2});
  auto b = boundary_hypergraph(x, colors, {3, 4, 5});
  EXPECT_NE(a.closure_type(), b.closure_type());
  EXPECT_TRUE(iso_hypergraphs(a.local(colors), b.local(colors)).is_empty() || a.signature() != b.signature());
  EXPECT_TRUE(testkit::boundary_identity_holds(a, b, colors));
}

TEST(BoundaryHypergraph, LiftRejectsNonIsomorphism) {
  // Y = {1, 2} hangs off 0 as a path, Y' = {3, 4} as a triangle with 0.
  Graph x = Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 4}});
  std::vector<int> colors{0, 1, 2, 1, 2};
  auto a = boundary_hypergraph(x, colors, {1, 2});
  auto b = boundary_hypergraph(x, colors, {3, 4});
  EXPECT_NE(a.closure_type(), b.closure_type());
  EXPECT_THROW(lift_boundary_iso(a, b, {0}), std::invalid_argument);
}

TEST(BoundaryHypergraph, IdentityHoldsOnCriticalInstances) {
  int pairs = 0;
  for (int i = 0; i < 150; ++i) {
    testkit::GeneratorConfig cfg;
    cfg.n = 4 + i % 5;
    cfg.leaf_bound = 2 + i % 3;
    cfg.seed = 6000 + i;
    cfg.colored = i % 2;
    auto in = testkit::gen_chordal(cfg);
    // Threshold 1 leaves more of the graph outside the critical set.
    auto st = critical_loop(in.graph, in.coloring, 1);
    std::vector<BoundaryHypergraph> hys;
    for (const auto& y : outside_components(in.graph, st.omega_star))
      hys.push_back(boundary_hypergraph(in.graph, st.pi.colors(), y));
    for (const auto& a : hys)
      for (const auto& b : hys) {
        EXPECT_TRUE(testkit::boundary_identity_holds(a, b, st.pi.colors())) << i;
        ++pairs;
      }
  }
  EXPECT_GE(pairs, 100);
}
