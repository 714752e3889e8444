#include <catch2/catch_amalgamated.hpp>

#include "mixlab/graph.hpp"
#include "oracles.hpp"

using namespace mixlab;

TEST_CASE("path construction and stationary measure") {
  auto g = build_graph({{0, 1, 1.0}, {1, 2, 1.0}});
  REQUIRE(g.vertex_count() == 3);
  REQUIRE(g.edges().size() == 2);
  auto s = stationary(g);
  CHECK(s.total_mass == 4.0);
  CHECK(s.probabilities[0] == 0.25);
  CHECK(s.probabilities[1] == 0.5);
  CHECK(s.probabilities[2] == 0.25);
}

TEST_CASE("K2 with weight and root") {
  auto g = build_graph({{0, 1, 5.0}}, MetricSpec::graph_distance(), 0);
  REQUIRE(g.root().has_value());
  CHECK(*g.root() == 0);
  auto s = stationary(g);
  CHECK(s.total_mass == 10.0);
  CHECK(s.probabilities[0] == 0.5);
}

TEST_CASE("triangle stationary by symmetry") {
  auto g = complete_graph(3);
  auto s = stationary(g);
  CHECK(s.total_mass == 6.0);
  for (int i = 0; i < 3; ++i) CHECK_THAT(s.probabilities[i], Catch::Matchers::WithinAbs(1.0 / 3, 1e-15));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(build_graph({{0, 1, 1.0}, {2, 3, 1.0}}), DisconnectedGraph);
  CHECK_THROWS_AS(build_graph({{0, 0, 1.0}}), SelfLoop);
  CHECK_THROWS_AS(build_graph({{0, 1, 1.0}, {1, 0, 2.0}}), DuplicateEdge);
  CHECK_THROWS_AS(build_graph({{0, 1, -1.0}}), NonPositiveWeight);
  CHECK_THROWS_AS(build_graph({{0, 1, 0.0}}), NonPositiveWeight);
}

TEST_CASE("labels compact to dense indices") {
  auto g = build_graph({{5, 9, 1.0}, {9, 70, 2.0}});
  REQUIRE(g.vertex_count() == 3);
  CHECK(g.labels() == std::vector<long>{5, 9, 70});
  CHECK(g.degree(1) == 2);  // label 9
}

TEST_CASE("distances: hops, scaled, explicit, identity") {
  auto p3 = path_graph(3);
  CHECK(p3.distance(0, 2) == 2.0);
  CHECK(p3.distance(1, 1) == 0.0);

  auto scaled = build_graph({{0, 1, 1.0}, {1, 2, 1.0}}, MetricSpec::scaled(0.5));
  CHECK(scaled.distance(0, 2) == 1.0);

  std::vector<std::vector<double>> m{{0, 1, 1.5}, {1, 0, 1}, {1.5, 1, 0}};
  auto ex = build_graph({{0, 1, 1.0}, {1, 2, 1.0}}, MetricSpec::explicit_matrix(m));
  CHECK(ex.distance(0, 2) == 1.5);

  std::vector<std::vector<double>> bad{{0, 1, 5}, {1, 0, 1}, {5, 1, 0}};
  CHECK_THROWS_AS(build_graph({{0, 1, 1.0}, {1, 2, 1.0}}, MetricSpec::explicit_matrix(bad)),
                  BadMetric);
}

TEST_CASE("serialize round trip is the identity") {
  auto g = build_graph({{0, 1, 0.1}, {1, 2, 2.625}, {0, 2, 1.0 / 3.0}},
                       MetricSpec::scaled(0.125), 1);
  auto text = g.serialize();
  auto h = WeightedGraph::deserialize(text);
  REQUIRE(h.vertex_count() == g.vertex_count());
  REQUIRE(h.edges().size() == g.edges().size());
  for (size_t e = 0; e < g.edges().size(); ++e) {
    CHECK(h.edges()[e].u == g.edges()[e].u);
    CHECK(h.edges()[e].v == g.edges()[e].v);
    CHECK(h.edges()[e].w == g.edges()[e].w);  // bit identical
  }
  CHECK(h.root() == g.root());
  CHECK(h.metric().mode == g.metric().mode);
  CHECK(h.metric().scale == g.metric().scale);
  CHECK(h.serialize() == text);
}

TEST_CASE("rational weights round trip exactly") {
  std::vector<EdgeInput> edges{{0, 1, 0.0, mpq_class(1, 3)}, {1, 2, 0.0, mpq_class(7, 2)}};
  auto g = build_graph(edges);
  auto h = WeightedGraph::deserialize(g.serialize());
  CHECK(h.exact_weight(0) == mpq_class(1, 3));
  CHECK(h.exact_weight(1) == mpq_class(7, 2));
}

TEST_CASE("header parsing and errors") {
  auto g = WeightedGraph::deserialize("mixgraph v1 n=3 root=0 metric=graph\n0 1 1\n1 2 1\n");
  REQUIRE(g.root().has_value());
  CHECK(*g.root() == 0);

  CHECK_THROWS_AS(WeightedGraph::deserialize("mixgraph v1 n=3 metric=graph\n0 1\n1 2 1\n"),
                  ParseError);
  try {
    WeightedGraph::deserialize("mixgraph v1 n=3 metric=graph\n0 1 1\n0 2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("stationary sums to one with positive mass on random graphs") {
  for (int trial = 0; trial < 25; ++trial) {
    auto g = oracle::random_connected(2 + trial, trial % 5, 100 + trial, trial % 2 == 1);
    auto s = stationary(g);
    double total = 0;
    for (double p : s.probabilities) {
      CHECK(p > 0);
      total += p;
    }
    CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("graph metric axioms on small random graphs") {
  for (int trial = 0; trial < 10; ++trial) {
    int n = 5 + 4 * trial;  // up to 41
    auto g = oracle::random_connected(n, n / 2, 500 + trial);
    std::vector<std::vector<double>> d(n);
    for (int x = 0; x < n; ++x) d[x] = g.distances_from(x);
    for (int x = 0; x < n; ++x) {
      CHECK(d[x][x] == 0.0);
      for (int y = 0; y < n; ++y) {
        CHECK(d[x][y] == d[y][x]);
        for (int z = 0; z < n; ++z) CHECK(d[x][y] <= d[x][z] + d[z][y]);
      }
    }
  }
}
