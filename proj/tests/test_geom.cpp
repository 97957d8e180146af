#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "geomlab/error.hpp"
#include "geomlab/geom.hpp"

using namespace geomlab;

namespace {

PointTuple rows(const std::vector<Vector>& r) { return PointSet::from_rows(r); }

PointTuple unit_square() { return rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace

TEST_SUITE("geom") {
  TEST_CASE("geometric graphs") {
    const auto line = NormedSpace::lp(1, 2);
    CHECK(geometric_graph(line, rows({{0}, {1}, {2}})) == path_graph(3));
    CHECK(geometric_graph(line, rows({{0}, {1.5}, {3.1}})).edge_count() == 0);
    const auto l2 = NormedSpace::lp(2, 2);
    CHECK(geometric_graph(l2, unit_square()) == cycle_graph(4));
    // In the max norm the diagonals have length 1 as well.
    CHECK(geometric_graph(NormedSpace::linf(2), unit_square()) == complete_graph(4));
    CHECK_THROWS_AS(geometric_graph(l2, rows({{0, 0}, {1, 1}, {0, 0}})), PreconditionError);
  }

  TEST_CASE("threshold is monotone") {
    RandomStream rng(6);
    const auto s = NormedSpace::lp(2, 1.5);
    PointTuple x(2);
    for (int i = 0; i < 60; ++i) x.push_back(Vector{rng.uniform(0, 4), rng.uniform(0, 4)});
    const Graph a = geometric_graph(s, x, 0.7);
    const Graph b = geometric_graph(s, x, 1.0);
    for (const auto& e : a.edges()) CHECK(b.has_edge(e.u, e.v));
    CHECK(check_geometric_isomorphism(s, x, b).isomorphic);
  }

  TEST_CASE("near-threshold diagnostics") {
    const auto line = NormedSpace::lp(1, 2);
    const auto near = near_threshold_pairs(line, rows({{0}, {1.0000001}, {5}}));
    REQUIRE(near.size() == 1);
    CHECK(near[0].i == 0);
    CHECK(near[0].j == 1);
  }

  TEST_CASE("sparsity") {
    const auto l2 = NormedSpace::lp(2, 2);
    const auto spread = rows({{0, 0}, {0.6, 0}, {0, 0.6}, {5, 5}});
    CHECK(check_sparsity(l2, spread, 0).sparse);

    const auto pile = rows({{0, 0}, {0.01, 0}, {0, 0.01}, {0.01, 0.01}, {-0.01, 0}});
    const auto bad = check_sparsity(l2, pile, 3);
    CHECK_FALSE(bad.sparse);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.crowd.size() == 4);

    PointTuple grid(2);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) grid.push_back(Vector{0.5 * i, 0.5 * j});
    const auto linf = NormedSpace::linf(2);
    CHECK(check_sparsity(linf, grid, 8).sparse);
    const auto tight = check_sparsity(linf, grid, 7);
    CHECK_FALSE(tight.sparse);
    CHECK(tight.crowd.size() == 8);
  }

  TEST_CASE("domain membership") {
    const auto l2 = NormedSpace::lp(2, 2);
    const double D = 2.0;
    const double R = D * std::log(4.0);
    const auto far = rows({{0, 0}, {2, 0}, {0, 2}, {R + 1, 0}});
    const auto dc = check_domain(l2, far, 3, D);
    CHECK(dc.reason == DomainReason::diameter);
    CHECK(dc.index == 3);
    CHECK(to_string(dc.reason) == "diameter");

    const auto crowd = rows({{0, 0}, {0.01, 0}, {0.02, 0}, {0.03, 0}});
    CHECK(check_domain(l2, crowd, 2, D).reason == DomainReason::sparsity);
    CHECK(check_domain(l2, crowd, 3, D).ok());

    RandomStream rng(7);
    const std::size_t n = 500;
    const double radius = 8.0 * std::log(static_cast<double>(n));
    const auto x = random_sparse_tuple(l2, n, 3, radius, rng);
    CHECK(x.size() == n);
    CHECK(check_domain(l2, x, 3, 8.0).ok());

    // Invariant under relabelling.
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = (i * 7 + 3) % n;
    CHECK(check_domain(l2, permute(x, perm), 3, 8.0).ok());
    CHECK(check_domain(l2, permute(crowd, {3, 1, 0, 2}), 2, D).reason == DomainReason::sparsity);
  }

  TEST_CASE("random sparse tuples are sparse even when packed") {
    RandomStream rng(8);
    const auto linf = NormedSpace::linf(2);
    const auto x = random_sparse_tuple(linf, 80, 2, 3.0, rng);
    CHECK(check_sparsity(linf, x, 2).sparse);
    CHECK_THROWS_AS(random_sparse_tuple(linf, 500, 0, 0.2, rng, 5000), BudgetExhausted);
  }

  TEST_CASE("labelled isomorphism") {
    const auto line = NormedSpace::lp(1, 2);
    const auto pts = rows({{0}, {1}, {2}});
    CHECK(check_geometric_isomorphism(line, pts, path_graph(3)).isomorphic);
    const Graph chord(3, {{0, 1}, {1, 2}, {0, 2}});
    const auto bad = check_geometric_isomorphism(line, pts, chord);
    CHECK_FALSE(bad.isomorphic);
    REQUIRE(bad.violation.has_value());
    CHECK(bad.violation->first == 0);
    CHECK(bad.violation->second == 2);
    CHECK(bad.violation_is_edge);
    CHECK(bad.violation_distance == doctest::Approx(2.0));

    const auto l2 = NormedSpace::lp(2, 2);
    CHECK(check_geometric_isomorphism(l2, unit_square(), cycle_graph(4)).isomorphic);
    CHECK_FALSE(check_geometric_isomorphism(l2, unit_square(), complete_graph(4)).isomorphic);
    CHECK_THROWS_AS(check_geometric_isomorphism(l2, unit_square(), cycle_graph(5)),
                    PreconditionError);
  }

  TEST_CASE("round trip through geom") {
    RandomStream rng(12);
    for (const auto& s : {NormedSpace::lp(3, 1), NormedSpace::lp(3, 2), NormedSpace::linf(3)}) {
      PointTuple x(3);
      for (int i = 0; i < 80; ++i)
        x.push_back(Vector{rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3)});
      CHECK(check_geometric_isomorphism(s, x, geometric_graph(s, x)).isomorphic);
    }
  }

  TEST_CASE("helpers") {
    const auto t = translate_to_origin(rows({{1, 2}, {3, 5}}));
    CHECK(t[0][0] == 0.0);
    CHECK(t[0][1] == 0.0);
    CHECK(t[1][0] == 2.0);
    CHECK(t[1][1] == 3.0);
    std::ostringstream csv;
    write_pair_distances_csv(NormedSpace::lp(1, 2), rows({{0}, {1}, {3}}), csv);
    const auto text = csv.str();
    CHECK(text.find("i,j,distance") == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  }
}
