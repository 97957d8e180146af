#include <doctest.h>

#include <cmath>
#include <vector>

#include "geomlab/embed.hpp"
#include "geomlab/error.hpp"
#include "geomlab/obstruct.hpp"

using namespace geomlab;

TEST_SUITE("obstruct") {
  TEST_CASE("poincare ratio of complete graphs") {
    RandomStream rng(4);
    for (std::size_t n : {3u, 5u, 9u}) {
      PointTuple x(2);
      for (std::size_t i = 0; i < n; ++i) x.push_back(Vector{rng.uniform(), rng.uniform()});
      const double r = poincare_ratio(complete_graph(n), NormedSpace::lp(2, 2), x);
      CHECK(r == doctest::Approx(static_cast<double>(n - 1) / static_cast<double>(n)));
    }
  }

  TEST_CASE("poincare ratio of a single edge") {
    const auto x = PointSet::from_rows({{0}, {3}});
    const Graph g(2, {{0, 1}});
    CHECK(poincare_ratio(g, NormedSpace::lp(1, 2), x) == doctest::Approx(0.5));
    CHECK(poincare_ratio(g, NormedSpace::lp(1, 2), x, 2.0) == doctest::Approx(0.5));
  }

  TEST_CASE("poincare ratio preconditions") {
    const auto l2 = NormedSpace::lp(1, 2);
    CHECK_THROWS_AS(poincare_ratio(path_graph(3), l2, PointSet::from_rows({{0}, {1}, {2}})),
                    PreconditionError);
    CHECK_THROWS_AS(poincare_ratio(cycle_graph(4), l2, PointSet::from_rows({{0}, {1}, {2}})),
                    PreconditionError);
    CHECK_THROWS_AS(
        poincare_ratio(cycle_graph(3), l2, PointSet::from_rows({{0}, {0}, {0}})),
        PreconditionError);
    CHECK_THROWS_AS(
        poincare_ratio(cycle_graph(3), l2, PointSet::from_rows({{0}, {1}, {2}}), 0.5),
        PreconditionError);
  }

  TEST_CASE("poincare ratio of landmark maps grows with dimension") {
    RandomStream rng(31);
    auto grng = rng.split("graph");
    const Graph g = random_regular_graph(1000, 3, grng);
    std::vector<double> ratios;
    for (std::size_t d : {1u, 4u, 16u, 64u}) {
      auto lrng = rng.split("landmarks", d);
      const auto e = landmark_embedding(g, d, lrng);
      ratios.push_back(poincare_ratio(g, NormedSpace::linf(d), e.tuple()));
    }
    for (double r : ratios) MESSAGE("landmark ratio: " << r);
    CHECK(ratios.back() > ratios.front());
  }

  TEST_CASE("mean pairwise distance") {
    const auto line = NormedSpace::lp(1, 2);
    CHECK(mean_pairwise_distance(line, PointSet::from_rows({{0}, {2}})) == doctest::Approx(1.0));
    CHECK(mean_pairwise_distance(line, PointSet::from_rows({{1}, {1}, {1}})) == 0.0);
    const auto sq = PointSet::from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(mean_pairwise_distance(NormedSpace::lp(2, 2), sq) ==
          doctest::Approx((2 + std::sqrt(2.0)) / 4));
    CHECK(mean_pairwise_distance(NormedSpace::lp(2, 2), sq, 2.0) == doctest::Approx(1.0));
  }

  TEST_CASE("average distance lower bound") {
    const auto a = avg_distance_lower_bound(1024, 3, 1);
    CHECK(a.value == doctest::Approx(32.0));
    CHECK(a.certifying);
    const auto b = avg_distance_lower_bound(1024, 3, 7);
    CHECK(b.value == doctest::Approx(0.5));
    CHECK(b.certifying);
    CHECK_FALSE(avg_distance_lower_bound(1023, 3, 7).certifying);
    CHECK_FALSE(avg_distance_lower_bound(10, 3, 2).certifying);
  }

  TEST_CASE("certificates") {
    CHECK(nonembedding_certificate(1024, 7, 3, 0.0).verdict == Verdict::certified_nonembeddable);
    const auto eq = nonembedding_certificate(1024, 7, 3, 1.0);
    CHECK(eq.threshold == doctest::Approx(1.0));
    CHECK(eq.verdict == Verdict::certified_nonembeddable);
    CHECK(nonembedding_certificate(1024, 7, 3, 1.0001).verdict == Verdict::inconclusive);
    CHECK(nonembedding_certificate(1024, 7, 3, 10.0).verdict == Verdict::inconclusive);
    // Below the volume precondition nothing is certified.
    CHECK(nonembedding_certificate(1023, 7, 3, 0.0).verdict == Verdict::inconclusive);
    CHECK(to_string(Verdict::certified_nonembeddable) == "certified-nonembeddable");
    CHECK(to_string(Verdict::inconclusive) == "inconclusive");
  }

  TEST_CASE("naor bound") {
    CHECK(naor_gamma_upper(1, 0.3, 2.0) == doctest::Approx(2.0 * std::log(2.0) / 0.3));
    CHECK(naor_gamma_upper(5, 0.8, 1.0) == doctest::Approx(naor_gamma_upper(5, 0.4, 1.0) / 2));
    CHECK(naor_gamma_upper(7, 2.0 / 3.0, 1.0) == doctest::Approx(1.5 * std::log(8.0)));
    CHECK_THROWS_AS(naor_gamma_upper(3, 0.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(naor_gamma_upper(0, 0.5, 1.0), PreconditionError);
    CHECK_THROWS_AS(naor_gamma_upper(3, 0.5, 0.0), PreconditionError);
  }

  TEST_CASE("dimension threshold") {
    CHECK(dimension_threshold(10, 3, 2.0 / 3.0, 1.0) == 0);
    CHECK(dimension_threshold(1000000, 3, 2.0 / 3.0, 1.0) == 6);
    std::size_t prev = 0;
    for (std::size_t n : {100u, 1000u, 10000u, 100000u, 1000000u, 10000000u}) {
      const auto t = dimension_threshold(n, 3, 2.0 / 3.0, 1.0);
      CHECK(t >= prev);
      prev = t;
    }
    std::size_t prevc = 1000;
    for (double c : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const auto t = dimension_threshold(1000000, 3, 2.0 / 3.0, c);
      CHECK(t <= prevc);
      prevc = t;
    }
  }

  TEST_CASE("certify assembles the report") {
    const Graph g = petersen_graph();
    const auto rep = certify(g, NormedSpace::lp(2, 2), 1.0);
    CHECK(rep.n == 10);
    CHECK(rep.degree == 3);
    CHECK(rep.lambda2 == doctest::Approx(1.0));
    CHECK(rep.gap == doctest::Approx(2.0 / 3.0));
    CHECK(rep.gamma_upper == doctest::Approx(1.5 * std::log(3.0)));
    CHECK_FALSE(rep.vol_certifying);
    CHECK(rep.certificate.verdict == Verdict::inconclusive);
    CHECK_FALSE(rep.gamma_lower.has_value());
  }

  TEST_CASE("a witness above the upper bound flags the constant") {
    RandomStream rng(5);
    auto grng = rng.split("graph");
    const Graph g = random_regular_graph(2048, 3, grng);
    auto lrng = rng.split("landmarks");
    const auto e = landmark_embedding(g, 4, lrng);
    const auto x = e.tuple();
    const auto space = NormedSpace::linf(4);
    const double ratio = poincare_ratio(g, space, x);
    // A tiny constant puts the spectral bound below the witness.
    const auto rep = certify(g, space, 1e-3, &x);
    REQUIRE(rep.gamma_lower.has_value());
    CHECK(*rep.gamma_lower == doctest::Approx(ratio));
    CHECK(rep.consistency_violation);
    CHECK(rep.certificate.verdict == Verdict::inconclusive);
    const auto ok = certify(g, space, kDefaultNaorConstant, &x);
    CHECK_FALSE(ok.consistency_violation);
    CHECK(ok.gamma_upper >= *ok.gamma_lower);
  }
}
