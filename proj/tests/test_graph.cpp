#include <gtest/gtest.h>

#include "chordaut/graph.hpp"
#include "chordaut/io.hpp"
#include "chordaut/testkit.hpp"

using namespace chordaut;

namespace {

Graph path(int n) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i + 1 < n; ++i) es.emplace_back(i, i + 1);
  return Graph::from_edges(n, es);
}

Graph complete(int n) {
  std::vector<std::pair<int, int>> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.emplace_back(i, j);
  return Graph::from_edges(n, es);
}

// a=0, b=1 adjacent to everything; c=2, d=3 non-adjacent.
Graph k4_minus_edge() { return Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}); }

}  // namespace

TEST(Graph, BasicQueries) {
  Graph g = path(4);
  EXPECT_EQ(g.n(), 4);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.adjacent(1, 2));
  EXPECT_FALSE(g.adjacent(0, 2));
  EXPECT_EQ(g.degree(1), 2);
  EXPECT_EQ(g.neighbors(1), (VertexSet{0, 2}));
}

TEST(Graph, DuplicateEdgesAndLoopsAreRejected) {
  Graph g = Graph::from_edges(3, {{0, 1}, {1, 0}});
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_THROW(Graph::from_edges(2, {{0, 0}}), GraphError);
  EXPECT_THROW(Graph::from_edges(2, {{0, 2}}), GraphError);
}

TEST(Graph, RelabelMovesEdges) {
  Graph g = path(3).relabeled({2, 0, 1});
  EXPECT_TRUE(g.adjacent(2, 0));
  EXPECT_TRUE(g.adjacent(0, 1));
  EXPECT_FALSE(g.adjacent(2, 1));
}

TEST(Coloring, FromLabelsKeepsOrder) {
  auto pi = Coloring::from_labels(std::vector<int>{5, 1, 5, 3});
  EXPECT_EQ(pi.size(), 3);
  EXPECT_EQ(pi.color(1), 0);
  EXPECT_EQ(pi.color(3), 1);
  EXPECT_EQ(pi.color(0), 2);
  EXPECT_EQ(pi.cls(2), (VertexSet{0, 2}));
  EXPECT_TRUE(Coloring::discrete(4).refines(pi));
  EXPECT_FALSE(Coloring::uniform(4).refines(pi));
}

TEST(Realize, SingleNodeTreeGivesClique) {
  TreeRepresentation rep;
  rep.tree = Graph(1);
  rep.bags = {{0}, {0}, {0}};
  Graph g = realize(rep);
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST(Realize, DisjointBags) {
  TreeRepresentation rep;
  rep.tree = Graph::from_edges(2, {{0, 1}});
  rep.bags = {{0}, {1}};
  EXPECT_EQ(realize(rep).edge_count(), 0u);
}

TEST(Realize, PathHost) {
  TreeRepresentation rep;
  rep.tree = path(3);
  rep.bags = {{0, 1}, {1, 2}, {2}};
  Graph g = realize(rep);
  EXPECT_EQ(g.edges(), (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
}

TEST(Realize, RejectsDisconnectedBag) {
  TreeRepresentation rep;
  rep.tree = path(3);
  rep.bags = {{0, 2}};
  EXPECT_THROW(realize(rep), GraphError);
}

TEST(Components, Examples) {
  Graph g = Graph::from_edges(5, {{0, 1}, {1, 2}, {3, 4}});
  EXPECT_EQ(components(g), (std::vector<VertexSet>{{0, 1, 2}, {3, 4}}));
  EXPECT_EQ(components(path(4)).size(), 1u);
  EXPECT_EQ(components(Graph(3)), (std::vector<VertexSet>{{0}, {1}, {2}}));
}

TEST(TwinClasses, Examples) {
  auto tw = twin_classes(k4_minus_edge());
  EXPECT_EQ(tw.size(), 2);
  EXPECT_EQ(tw.color(0), tw.color(1));
  EXPECT_EQ(tw.color(2), tw.color(3));
  EXPECT_EQ(twin_classes(path(4)).size(), 4);
  EXPECT_EQ(twin_classes(complete(3)).size(), 1);
}

TEST(TwinClasses, ColoringSeparatesTwins) {
  auto pi = Coloring::from_labels(std::vector<int>{0, 1, 2});
  EXPECT_EQ(twin_classes(complete(3), &pi).size(), 3);
}

TEST(BoundaryAndClosure, Examples) {
  Graph g = path(4);
  auto [bd, view] = boundary_and_closure(g, {0, 1});
  EXPECT_EQ(bd, (VertexSet{2}));
  EXPECT_EQ(view.to_parent, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(view.graph.edge_count(), 2u);
  EXPECT_TRUE(boundary_and_closure(g, {0, 1, 2, 3}).first.empty());
  auto [b0, v0] = boundary_and_closure(g, {});
  EXPECT_TRUE(b0.empty());
  EXPECT_EQ(v0.graph.n(), 0);
}

TEST(BipartiteBetween, Examples) {
  Graph g = path(4);
  auto v = bipartite_between(g, {0, 3}, {1, 2});
  EXPECT_EQ(v.graph.edge_count(), 2u);
  EXPECT_TRUE(v.graph.adjacent(v.local(0), v.local(1)));
  EXPECT_TRUE(v.graph.adjacent(v.local(2), v.local(3)));
  EXPECT_FALSE(v.graph.adjacent(v.local(1), v.local(2)));
  EXPECT_EQ(bipartite_between(g, {0, 1, 2, 3}, {0, 1, 2, 3}).graph.edges(), g.edges());
  EXPECT_EQ(bipartite_between(g, {0}, {3}).graph.edge_count(), 0u);
}

TEST(Automorphism, Checks) {
  Graph g = path(4);
  EXPECT_TRUE(is_automorphism(g, nullptr, {3, 2, 1, 0}));
  EXPECT_FALSE(is_automorphism(g, nullptr, {1, 0, 2, 3}));
  auto pi = Coloring::from_labels(std::vector<int>{0, 1, 1, 2});
  EXPECT_FALSE(is_automorphism(g, &pi, {3, 2, 1, 0}));
  EXPECT_FALSE(is_isomorphism(g, g, {0, 0, 1, 2}));
}

TEST(Io, Graph6RoundTrip) {
  for (int i = 0; i < 20; ++i) {
    testkit::GeneratorConfig cfg;
    cfg.n = 1 + i * 4;
    cfg.seed = i;
    Graph g = testkit::gen_chordal(cfg).graph;
    Graph back = read_graph6(write_graph6(g));
    EXPECT_EQ(back.n(), g.n());
    EXPECT_EQ(back.edges(), g.edges());
  }
}

TEST(Io, Graph6KnownString) {
  Graph g = read_graph6("Bg");  // edges 0-1 and 1-2
  EXPECT_EQ(g.n(), 3);
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(Io, EdgeListAndAutodetect) {
  Graph g = parse_graph("4 3\n0 1\n1 2\n2 3\n");
  EXPECT_EQ(g.edges(), path(4).edges());
  EXPECT_EQ(parse_graph(write_graph6(g)).edges(), g.edges());
  EXPECT_EQ(parse_graph(write_edge_list(g)).edges(), g.edges());
}

TEST(Io, MalformedInputThrows) {
  EXPECT_THROW(parse_graph("3 2\n0 1\n"), ParseError);
  EXPECT_THROW(parse_graph("2 1\n0 5\n"), ParseError);
  EXPECT_THROW(parse_graph(""), ParseError);
  EXPECT_THROW(parse_coloring("0", 3), ParseError);
  EXPECT_THROW(parse_coloring("7 1", 3), ParseError);
}
