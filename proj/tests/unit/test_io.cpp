#include <doctest.h>

#include <sstream>

#include "sparsepc/errors.hpp"
#include "sparsepc/io.hpp"
#include "sparsepc/samplers.hpp"

using namespace sparsepc;

TEST_CASE("edge list round trip preserves adjacency and the declared clique size") {
  const Graph g = sample_planted_clique(15, 5, 9u);
  std::stringstream buffer;
  write_edge_list(g, buffer);
  const std::string text = buffer.str();
  CHECK(text.rfind("15 5\n", 0) == 0);

  std::stringstream in(text);
  int declared = 0;
  const Graph h = read_edge_list(in, &declared);
  CHECK(declared == 5);
  CHECK(h.vertex_count() == 15);
  CHECK_FALSE(h.planted().has_value());  // only the size survives a round trip
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 15; ++j) CHECK(h.adjacent(i, j) == g.adjacent(i, j));
  }
}

TEST_CASE("erdos-renyi graphs serialize kappa as zero") {
  const Graph g = sample_er_graph(6, 3u);
  std::stringstream buffer;
  write_edge_list(g, buffer);
  CHECK(buffer.str().rfind("6 0\n", 0) == 0);
}

TEST_CASE("edge list rejects malformed input") {
  std::stringstream empty("");
  CHECK_THROWS_AS(read_edge_list(empty), InvalidArgument);
  std::stringstream bad_endpoint("4 0\n1 9\n");
  CHECK_THROWS_AS(read_edge_list(bad_endpoint), InvalidArgument);
  std::stringstream self_loop("4 0\n2 2\n");
  CHECK_THROWS_AS(read_edge_list(self_loop), InvalidArgument);
}

TEST_CASE("sample csv round trip is exact") {
  const SampleMatrix x = sample_null(4, 7, NullFamily::kGaussian, 12u);
  std::stringstream buffer;
  write_sample_csv(x, buffer);
  const std::string text = buffer.str();
  CHECK(text.rfind("x1,x2,x3,x4\n", 0) == 0);
  std::stringstream in(text);
  const SampleMatrix y = read_sample_csv(in);
  CHECK(y.d() == 4);
  CHECK(y.n() == 7);
  CHECK((x.columns - y.columns).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample csv rejects ragged and empty input") {
  std::stringstream ragged("x1,x2\n1.0,2.0\n3.0\n");
  CHECK_THROWS_AS(read_sample_csv(ragged), InvalidArgument);
  std::stringstream header_only("x1,x2\n");
  CHECK_THROWS_AS(read_sample_csv(header_only), InvalidArgument);
}

TEST_CASE("format_double round-trips and is stable") {
  CHECK(format_double(0.1) == format_double(0.1));
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_double(-1.2345678912345678e-7)) == -1.2345678912345678e-7);
}
