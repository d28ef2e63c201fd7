#include <doctest.h>

#include <cmath>
#include <set>

#include "gso/error.hpp"
#include "gso/graph.hpp"
#include "support.hpp"

using namespace gso;

TEST_SUITE("graph") {

TEST_CASE("edges are deduplicated and stored sorted")
{
  const Graph g(4, {{2, 1}, {1, 2}, {0, 3}, {3, 0}, {0, 1}});
  CHECK(g.n_vertices() == 4);
  CHECK(g.n_edges() == 3);
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}});
  CHECK(g.neighbors(0) == std::vector<int>{1, 3});
  CHECK(g.degree(1) == 2);
  CHECK(g.degrees() == std::vector<int>{2, 2, 1, 1});
  CHECK(g.has_edge(3, 0));
  CHECK_FALSE(g.has_edge(2, 3));
  const Eigen::MatrixXd a = g.adjacency();
  CHECK(a == a.transpose());
  CHECK(a.sum() == 6.0);
}

TEST_CASE("invalid edges are rejected")
{
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{-1, 2}}), std::invalid_argument);
}

TEST_CASE("edge list parsing")
{
  test::TempDir dir;
  const auto path = dir.file("g.txt");

  SUBCASE("comments, blank lines and duplicates")
  {
    test::write_text(path, "# a comment\n0 1\n\n1 2  # trailing\n2 1\n");
    const Graph g = load_edge_list(path);
    CHECK(g.n_vertices() == 3);
    CHECK(g.n_edges() == 2);
  }
  SUBCASE("one-based ids")
  {
    test::write_text(path, "1 2\n2 3\n");
    const Graph g = load_edge_list(path, true);
    CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  }
  SUBCASE("vertex count directive keeps isolated vertices")
  {
    test::write_text(path, "# vertices: 6\n0 1\n");
    CHECK(load_edge_list(path).n_vertices() == 6);
  }
  SUBCASE("malformed lines report their line number")
  {
    test::write_text(path, "0 1\n1 2 3\n");
    try {
      load_edge_list(path);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("other malformed content")
  {
    test::write_text(path, "0 x\n");
    CHECK_THROWS_AS(load_edge_list(path), ParseError);
    test::write_text(path, "0 -4\n");
    CHECK_THROWS_AS(load_edge_list(path), ParseError);
    test::write_text(path, "2 2\n");
    CHECK_THROWS_AS(load_edge_list(path), ParseError);
    test::write_text(path, "# nothing\n");
    CHECK_THROWS_AS(load_edge_list(path), ParseError);
    test::write_text(path, "0 1\n");
    CHECK_THROWS_AS(load_edge_list(path, true), ParseError);
  }
  SUBCASE("missing file")
  {
    CHECK_THROWS(load_edge_list(dir.file("absent.txt")));
  }
}

TEST_CASE("save and load round trip")
{
  test::TempDir dir;
  const Graph g(7, {{0, 1}, {1, 4}, {2, 3}});
  save_graph(g, dir.file("g.txt"));
  CHECK(load_edge_list(dir.file("g.txt")) == g);
}

TEST_CASE("bundled Zachary karate club")
{
  const Graph g = load_edge_list(std::string(GSO_DATA_DIR) + "/zachary.edges");
  CHECK(g.n_vertices() == 34);
  CHECK(g.n_edges() == 78);
}

TEST_CASE("SK couplings")
{
  const SKInstance a = gen_sk_instance(300, 5);
  CHECK(a.couplings == a.couplings.transpose());
  CHECK(a.couplings.diagonal().cwiseAbs().maxCoeff() == 0.0);
  // E[J_ij^2] = 1/n over n(n-1)/2 independent entries.
  const double mean_sq = a.couplings.squaredNorm() / (300.0 * 299.0);
  CHECK(mean_sq * 300 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(gen_sk_instance(300, 5).couplings == a.couplings);
  CHECK(gen_sk_instance(300, 6).couplings != a.couplings);
  CHECK_THROWS_AS(gen_sk_instance(1, 0), std::invalid_argument);
}

TEST_CASE("random regular graphs")
{
  for (std::uint64_t seed : {1, 2, 3}) {
    const Graph g = gen_random_regular(30, 4, seed);
    CHECK(g.n_edges() == 60);
    for (int v = 0; v < 30; ++v)
      CHECK(g.degree(v) == 4);
    CHECK(gen_random_regular(30, 4, seed) == g);
  }
  CHECK_THROWS_AS(gen_random_regular(5, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_random_regular(4, 4, 1), std::invalid_argument);
}

TEST_CASE("Erdos-Renyi density")
{
  const Graph g = gen_erdos_renyi(200, 0.1, 9);
  const double density = g.n_edges() / (200.0 * 199.0 / 2.0);
  CHECK(density == doctest::Approx(0.1).epsilon(0.1));
  CHECK(gen_erdos_renyi(10, 0.0, 1).n_edges() == 0);
  CHECK(gen_erdos_renyi(10, 1.0, 1).n_edges() == 45);
}

TEST_CASE("series files")
{
  test::TempDir dir;
  const auto path = dir.file("s.csv");

  SUBCASE("round trip is exact")
  {
    Rng rng(4);
    TimeSeries s{Eigen::MatrixXd(5, 3)};
    for (Eigen::Index i = 0; i < s.states.size(); ++i)
      s.states.data()[i] = uniform01(rng);
    save_series(s, path);
    CHECK(load_series(path).states == s.states);
  }
  SUBCASE("wrong row width")
  {
    test::write_text(path, "t,x_0,x_1\n0,0.1,0.2\n1,0.3\n");
    try {
      load_series(path);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("row 1") != std::string::npos);
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("non-numeric value")
  {
    test::write_text(path, "t,x_0\n0,0.5\n1,abc\n");
    CHECK_THROWS_AS(load_series(path), ParseError);
  }
  SUBCASE("too short")
  {
    test::write_text(path, "t,x_0\n0,0.5\n");
    CHECK_THROWS_AS(load_series(path), ParseError);
  }
}

TEST_CASE("partitions")
{
  Partition p{{0, 2, 2, 0}, 4};
  CHECK_NOTHROW(p.validate());
  CHECK(p.n_nonempty() == 2);
  p.labels[1] = 4;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

}
