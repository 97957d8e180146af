#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "geomlab/discretize.hpp"
#include "geomlab/error.hpp"

using namespace geomlab;

namespace {

PointTuple line16() {
  PointTuple x(1);
  for (int i = 0; i < 16; ++i) x.push_back(Vector{static_cast<double>(i)});
  return x;
}

Params line_params() {
  Params p;
  p.eps = 0.25;  // 16^{2 eps} = 4
  return p;
}

// Probability that k uniform draws (with replacement) from [n] hit the
// neighbourhood of every member, by inclusion-exclusion over missed members.
double cover_probability(std::size_t n, std::size_t k, const std::vector<std::set<std::size_t>>& hoods) {
  double p = 0.0;
  const std::size_t m = hoods.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::set<std::size_t> uni;
    int sign = 1;
    for (std::size_t b = 0; b < m; ++b)
      if (mask >> b & 1) {
        uni.insert(hoods[b].begin(), hoods[b].end());
        sign = -sign;
      }
    p += sign * std::pow(1.0 - static_cast<double>(uni.size()) / static_cast<double>(n),
                         static_cast<double>(k));
  }
  return p;
}

}  // namespace

TEST_SUITE("discretize") {
  TEST_CASE("params") {
    Params p;
    CHECK(p.is_default());
    CHECK(default_ell_max(9800, 8.0) == 8);
    CHECK(p.ell_max_for(9800) == 8);
    p.ell_max = 3;
    CHECK(p.ell_max_for(9800) == 3);
    CHECK_FALSE(p.is_default());
    CHECK(dyadic_radius(5) == 32.0);
    CHECK(dyadic_radius(-1) == 0.5);
    Params q;
    const double expect = std::min({0.1 / (2 * std::log(320.0)), 0.1 * std::log(300.0) / 10, 5.0});
    CHECK(main_constant_bound(q) == doctest::Approx(expect));
    CHECK(main_constant_bound(q) == doctest::Approx(0.008668).epsilon(1e-3));
  }

  TEST_CASE("scale profile of a line") {
    const auto s = NormedSpace::lp(1, 2);
    const auto prof = scale_profile(s, line16(), line_params());
    CHECK(prof.threshold == doctest::Approx(4.0));
    std::vector<int> expect(16, 1);
    expect.front() = expect.back() = 2;
    CHECK(prof.ells == expect);
    CHECK(std::none_of(prof.saturated.begin(), prof.saturated.end(), [](bool b) { return b; }));
  }

  TEST_CASE("scale profile clamps and saturates") {
    const auto s = NormedSpace::lp(2, 2);
    PointTuple same(2);
    for (int i = 0; i < 10; ++i) same.push_back(Vector{1.0, 1.0});
    Params p;
    p.eps = 0.4;
    p.ell_min = -2;
    const auto a = scale_profile(s, same, p);
    for (int l : a.ells) CHECK(l == -2);

    PointTuple far(2);
    for (int i = 0; i < 10; ++i) far.push_back(Vector{1000.0 * i, 0.0});
    p.ell_min = 0;
    p.ell_max = 6;
    const auto b = scale_profile(s, far, p);
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(b.ells[i] == 6);
      CHECK(b.saturated[i]);
    }
  }

  TEST_CASE("seed selection: vacuous and clustered levels") {
    const auto s = NormedSpace::lp(2, 2);
    PointTuple cluster(2);
    for (int i = 0; i < 30; ++i) cluster.push_back(Vector{0.01 * i, 0.0});
    Params p;
    p.ell_max = 4;
    const auto prof = scale_profile(s, cluster, p);
    for (int l : prof.ells) CHECK(l == 0);
    RandomStream rng(6);
    const auto fam = select_seeds(s, cluster, prof, p, rng, 8);
    REQUIRE(fam.levels.size() == 5);
    for (const auto& lvl : fam.levels) {
      CHECK(lvl.attempts == 1);
      CHECK(lvl.completed == 0);
      CHECK(lvl.seeds.size() == static_cast<std::size_t>(std::floor(std::pow(30.0, 0.9))));
      for (auto sd : lvl.seeds) CHECK(sd < 30);
    }
    CHECK(fam.at(0).members == 30);
    CHECK(fam.at(3).members == 0);
  }

  TEST_CASE("seed retries follow the exact per-draw success probability") {
    const auto s = NormedSpace::lp(1, 2);
    const auto x = line16();
    Params p = line_params();
    p.seed_completion = false;
    const auto prof = scale_profile(s, x, p);
    std::vector<std::set<std::size_t>> hoods1, hoods2;
    for (std::size_t i = 0; i < 16; ++i) {
      std::set<std::size_t> h;
      for (std::size_t j = 0; j < 16; ++j)
        if (std::abs(static_cast<double>(i) - static_cast<double>(j)) <= dyadic_radius(prof.ells[i]))
          h.insert(j);
      (prof.ells[i] == 1 ? hoods1 : hoods2).push_back(h);
    }
    const double p1 = cover_probability(16, 8, hoods1);
    const double p2 = cover_probability(16, 8, hoods2);
    CHECK(p1 == doctest::Approx(0.5732865873724222));
    CHECK(p2 == doctest::Approx(1 - 2 * std::pow(11.0 / 16, 8) + std::pow(6.0 / 16, 8)));

    const int runs = 1000;
    int first1 = 0, first2 = 0;
    double sum1 = 0;
    RandomStream root(77);
    for (int r = 0; r < runs; ++r) {
      const auto fam = select_seeds(s, x, prof, p, root.split("run", static_cast<std::uint64_t>(r)), 1000);
      REQUIRE(fam.at(1).seeds.size() == 8);
      // Each accepted draw really covers its level.
      for (int level : {1, 2})
        for (std::size_t i = 0; i < 16; ++i) {
          if (prof.ells[i] != level) continue;
          bool hit = false;
          for (auto sd : fam.at(level).seeds)
            hit = hit || std::abs(static_cast<double>(sd) - static_cast<double>(i)) <= dyadic_radius(level);
          CHECK(hit);
        }
      first1 += fam.at(1).attempts == 1;
      first2 += fam.at(2).attempts == 1;
      sum1 += static_cast<double>(fam.at(1).attempts);
      CHECK(fam.at(0).attempts == 1);
    }
    const double sd1 = std::sqrt(p1 * (1 - p1) / runs);
    const double sd2 = std::sqrt(p2 * (1 - p2) / runs);
    CHECK(std::abs(first1 / double(runs) - p1) <= 4 * sd1);
    CHECK(std::abs(first2 / double(runs) - p2) <= 4 * sd2);
    const double mean_sd = std::sqrt((1 - p1) / (p1 * p1) / runs);
    CHECK(std::abs(sum1 / runs - 1 / p1) <= 4 * mean_sd);
  }

  TEST_CASE("seed failure without completion names the level") {
    const auto s = NormedSpace::lp(1, 2);
    PointTuple x(1);
    for (int i = 0; i < 64; ++i) x.push_back(Vector{static_cast<double>(i)});
    Params p;
    p.eps = 0.9;  // 1 seed per level, 64^{1.8} > n: every index saturates
    p.ell_max = 2;
    p.seed_completion = false;
    const auto prof = scale_profile(s, x, p);
    RandomStream rng(1);
    CHECK_THROWS_AS(select_seeds(s, x, prof, p, rng, 5), BudgetExhausted);
    // One seed cannot cover 64 points spread over 63 units, completed or not.
    p.seed_completion = true;
    CHECK_THROWS_AS(select_seeds(s, x, prof, p, rng, 5), BudgetExhausted);
  }

  TEST_CASE("seed completion fills uncovered indices") {
    const auto s = NormedSpace::lp(1, 2);
    const auto x = line16();
    const Params p = line_params();
    const auto prof = scale_profile(s, x, p);
    RandomStream root(5);
    std::size_t completed_runs = 0;
    for (std::uint64_t r = 0; r < 50; ++r) {
      const auto fam = select_seeds(s, x, prof, p, root.split("run", r), 1);
      const auto& lvl = fam.at(1);
      REQUIRE(lvl.seeds.size() == 8);
      if (lvl.completed > 0) ++completed_runs;
      for (std::size_t i = 1; i < 15; ++i) {
        bool hit = false;
        for (auto sd : lvl.seeds)
          hit = hit || std::abs(static_cast<double>(sd) - static_cast<double>(i)) <= 2.0;
        CHECK(hit);
      }
    }
    CHECK(completed_runs > 0);
  }

  TEST_CASE("multiscale net in one dimension") {
    const auto s = NormedSpace::linf(1);
    Params p;
    p.D = 16.0 / std::log(7.0);
    RandomStream rng(9);
    const MultiscaleNet net(s, 7, p, rng);
    CHECK(net.base_radius() == doctest::Approx(16.0));
    CHECK(net.base().points.size() <= 33);
    std::vector<double> xs;
    for (std::size_t i = 0; i < net.base().points.size(); ++i) xs.push_back(net.base().points[i][0]);
    std::sort(xs.begin(), xs.end());
    CHECK(xs.front() <= -15.0);
    CHECK(xs.back() >= 15.0);
    for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i] - xs[i - 1] <= 2.0);
  }

  TEST_CASE("local nets and projections") {
    const auto s = NormedSpace::lp(1, 2);
    RandomStream rng(10);
    const MultiscaleNet net(s, 9800, Params{}, rng);
    CHECK(net.max_level() == 8);
    CHECK(net.c0() == 0.01);
    const auto local = net.local_net(3, 0);
    CHECK(local->radius == 1.0);
    CHECK(local->mesh == doctest::Approx(0.01));
    CHECK(local->points.size() == net.local_size());
    const auto y = net.base().points[3];
    for (std::size_t k = 0; k < local->points.size(); ++k)
      CHECK(s.distance(local->points[k], y) <= 1.0 + 1e-12);
    CHECK(net.local_net(3, 0) == local);
    CHECK(net.cached_local_nets() == 1);

    RandomStream q(11);
    for (int level : {0, 3}) {
      const auto ln = net.local_net(5, level);
      CHECK(ln->mesh == doctest::Approx(0.01 * dyadic_radius(level)));
      for (int t = 0; t < 200; ++t) {
        const Vector p{net.base().points[5][0] + q.uniform(-1.5, 1.5) * dyadic_radius(level)};
        const auto got = net.project_local(5, level, p);
        const auto brute = project_to_set(s, p, ln->points);
        CHECK(got.distance == doctest::Approx(brute.distance).epsilon(1e-12));
      }
    }
    CHECK_THROWS_AS((void)net.local_net(net.base().points.size(), 0), PreconditionError);
    CHECK_THROWS_AS((void)net.local_net(0, 9), PreconditionError);
  }

  TEST_CASE("long distances") {
    const auto s = NormedSpace::linf(1);
    const auto same = PointSet::from_rows({{2}, {2}, {2}});
    CHECK(long_distances(s, same, {0, 0, 0}).ordered_size() == 0);

    // Two clusters r/2 apart, r = 4.
    const auto two = PointSet::from_rows({{0}, {0.1}, {2}, {2.1}});
    const auto L = long_distances(s, two, {2, 2, 2, 2});
    for (std::size_t i : {0u, 1u})
      for (std::size_t j : {2u, 3u}) {
        CHECK(L.contains(i, j));
        CHECK(L.contains(j, i));
      }
    CHECK_FALSE(L.contains(0, 1));
    CHECK(L.ordered_size() == 8);
    CHECK(L.unordered_size() == 4);

    const auto edge = PointSet::from_rows({{0}, {1.0 / 3.0}});
    CHECK(long_distances(s, edge, {0, 0}).ordered_size() == 0);

    // Asymmetric scales give a one-sided pair.
    const auto asym = long_distances(s, PointSet::from_rows({{0}, {1}}), {0, 3});
    CHECK(asym.contains(0, 1));
    CHECK_FALSE(asym.contains(1, 0));
    CHECK(asym.contains_unordered(1, 0));
    CHECK(asym.unordered_size() == 1);
    const auto shorts = asym.short_pairs();
    REQUIRE(shorts.size() == 1);
    CHECK(shorts[0] == std::pair<std::size_t, std::size_t>{1, 0});
    CHECK(LongDistanceSet::from_short_pairs(2, shorts) == asym);
  }

  TEST_CASE("a tight cluster discretizes to a single point") {
    const auto s = NormedSpace::lp(2, 2);
    PointTuple x(2);
    for (int i = 0; i < 5; ++i) x.push_back(Vector{1e-5 * i, -1e-5 * i});
    RandomStream rng(12);
    const auto rec = discretize(s, x, 4, Params{}, rng);
    for (std::size_t i = 1; i < 5; ++i) CHECK(rec.xhat[i][0] == rec.xhat[0][0]);
    CHECK(rec.L.ordered_size() == 0);
    CHECK(check_discretization(s, x, rec).ok());
  }

  TEST_CASE("line instance satisfies the proximity bounds") {
    const auto s = NormedSpace::lp(1, 2);
    const auto x = line16();
    RandomStream rng(13);
    const auto rec = discretize(s, x, 0, line_params(), rng);
    for (std::size_t i = 0; i < 16; ++i) {
      const double r = dyadic_radius(rec.profile.ells[i]);
      CHECK(s.distance(x[i], rec.xhat[i]) <= 0.01 * r + 1.0);
      CHECK(s.distance(x[i], rec.anchor_points[i]) <= r + 1.0);
    }
    const auto audit = check_discretization(s, x, rec);
    CHECK(audit.ok());
    CHECK(audit.factorization);
    CHECK(audit.proximity_checked == 16);
    CHECK(audit.close_pairs == 2 * (15 + 14));
  }

  TEST_CASE("discretize is deterministic and checks the domain") {
    const auto s = NormedSpace::lp(2, 2);
    RandomStream gen(14);
    const auto x = random_sparse_tuple(s, 300, 3, 8 * std::log(300.0), gen);
    RandomStream r1(15);
    RandomStream r2(15);
    const auto a = discretize(s, x, 3, Params{}, r1);
    const auto b = discretize(s, x, 3, Params{}, r2);
    CHECK(a.xhat == b.xhat);
    CHECK(a.anchors == b.anchors);
    CHECK(a.local_indices == b.local_indices);
    CHECK(a.L == b.L);
    CHECK(a.seeds.projected_union() == b.seeds.projected_union());
    CHECK(check_discretization(s, x, a).ok());

    // Sharing a prebuilt net gives the same record.
    const MultiscaleNet net(s, 300, Params{}, RandomStream(15).split("net"));
    const auto c = discretize(s, x, 3, Params{}, RandomStream(15), &net);
    CHECK(c.xhat == a.xhat);

    CHECK_THROWS_AS(discretize(s, x, 0, Params{}, r1), PreconditionError);
    auto far = x;
    far.mutable_point(0)[0] = 1000.0;
    CHECK_THROWS_AS(discretize(s, far, 3, Params{}, r1), PreconditionError);
  }

  TEST_CASE("regime predicate") {
    CHECK_FALSE(regime_predicate(4096, 2, 3, 0.1));
    // 10^{4 * 0.45} / 4 is about 15.8, short of 320.
    CHECK_FALSE(regime_predicate(10000, 1, 3, 0.45));
    CHECK(regime_predicate(10000, 1, 3, 0.9));
    CHECK_FALSE(regime_predicate(10000, 1, 3, 0.1));
    CHECK(regime_predicate(3000, 1, 3, 0.9));
  }

  TEST_CASE("conditional claims in the regime") {
    const auto s = NormedSpace::lp(1, 2);
    Params p;
    p.eps = 0.9;
    p.D = 100.0;
    RandomStream gen(16);
    const std::size_t n = 3000;
    const auto x = random_sparse_tuple(s, n, 3, p.D * std::log(double(n)), gen);
    RandomStream rng(17);
    const auto rec = discretize(s, x, 3, p, rng);
    const auto audit = check_discretization(s, x, rec);
    CHECK(audit.regime);
    CHECK(audit.min_radius >= 36.0);
    CHECK(audit.conditional_ok());
    CHECK(audit.ok());
    CHECK(audit.crowd_max_count <= static_cast<std::size_t>(rec.profile.threshold));
  }

  TEST_CASE("tampering with one xhat is caught by the proximity check") {
    const auto s = NormedSpace::lp(1, 2);
    const auto x = line16();
    RandomStream rng(18);
    auto rec = discretize(s, x, 0, line_params(), rng);
    rec.xhat.mutable_point(4)[0] += 50.0;
    rec.L = long_distances(s, rec);
    const auto audit = check_discretization(s, x, rec);
    CHECK(audit.factorization);
    CHECK(audit.proximity_violations >= 1);
    CHECK_FALSE(audit.ok());
    bool listed = false;
    for (const auto& v : audit.violations) listed = listed || (v.check == "xhat-distance" && v.i == 4);
    CHECK(listed);

    // Tampering with L alone breaks the factorization.
    auto rec2 = discretize(s, x, 0, line_params(), rng);
    rec2.L.insert(0, 1);
    CHECK_FALSE(check_discretization(s, x, rec2).factorization);
  }
}
