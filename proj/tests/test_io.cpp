#include <doctest.h>

#include <sstream>
#include <string>

#include "geomlab/cli.hpp"
#include "geomlab/error.hpp"
#include "geomlab/io.hpp"

using namespace geomlab;

namespace {

int run_cli(std::vector<std::string> args, std::string& out, std::string& err) {
  args.insert(args.begin(), "geomlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream o, e;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e);
  out = o.str();
  err = e.str();
  return code;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("tuple round trip") {
    const auto x = PointSet::from_rows({{0.5, -1.25}, {3, 4}});
    const auto j = tuple_to_json(x, "lp:2.0");
    CHECK(j["schema"] == kSchema);
    CHECK(j["dim"] == 2);
    CHECK(tuple_from_json(j) == x);
    CHECK(tuple_from_json(Json::parse(dump(j))) == x);
    CHECK_THROWS_AS(tuple_from_json(Json::parse(R"({"dim":2,"points":[[1,2],[3]]})")),
                    PreconditionError);
    CHECK_THROWS_AS(tuple_from_json(Json::parse(R"({"dim":2})")), PreconditionError);
  }

  TEST_CASE("long distances round trip through the complement") {
    const auto s = NormedSpace::lp(1, 2);
    const auto L = long_distances(s, PointSet::from_rows({{0}, {1}, {5}, {5.2}}), {0, 2, 0, 1});
    const auto j = long_distances_to_json(L);
    CHECK(j["encoding"] == "complement");
    CHECK(j["ordered_size"] == L.ordered_size());
    CHECK(long_distances_from_json(Json::parse(dump(j))) == L);
  }

  TEST_CASE("count and rational documents") {
    const auto c = count_to_json(count_regular_result(8, 3));
    CHECK(c["exact"] == "19355");
    const auto q = rational_to_json(Rational(2, 143));
    CHECK(q["numerator"] == "2");
    CHECK(q["denominator"] == "143");
    CHECK(rational_to_json(Rational(0))["log_value"].is_null());
  }

  TEST_CASE("record document") {
    const auto s = NormedSpace::lp(1, 2);
    PointTuple x(1);
    for (int i = 0; i < 12; ++i) x.push_back(Vector{1.5 * i});
    const auto rec = discretize(s, x, 0, Params{}, RandomStream(3));
    const auto j = record_to_json(rec);
    CHECK(j["n"] == 12);
    CHECK(j["params"]["defaults"] == true);
    CHECK(j["xhat"].size() == 12);
    CHECK(long_distances_from_json(j["L"]) == rec.L);
    const auto a = audit_to_json(check_discretization(s, x, rec));
    CHECK(a["ok"] == true);
    CHECK(a["factorization"] == true);
  }

  TEST_CASE("dump is stable") {
    Json j;
    j["b"] = 1;
    j["a"] = 2;
    CHECK(dump(j) == "{\n  \"b\": 1,\n  \"a\": 2\n}\n");
  }

  TEST_CASE("cli exit codes and error documents") {
    std::string out, err;
    CHECK(run_cli({"count", "--n", "6", "--delta", "3", "--exact"}, out, err) == 0);
    CHECK(Json::parse(out)["exact"] == "70");
    CHECK(run_cli({"count", "--n", "5", "--delta", "3", "--exact"}, out, err) == 2);
    const auto e = Json::parse(err);
    CHECK(e["schema"] == kSchema);
    CHECK(run_cli({"count", "--n", "20", "--delta", "3", "--exact"}, out, err) == 3);
    CHECK(run_cli({"frobnicate"}, out, err) != 0);
  }

  TEST_CASE("cli gen is reproducible") {
    std::string a, b, err;
    REQUIRE(run_cli({"gen", "--n", "20", "--delta", "3", "--seed", "4"}, a, err) == 0);
    REQUIRE(run_cli({"gen", "--n", "20", "--delta", "3", "--seed", "4"}, b, err) == 0);
    CHECK(a == b);
    const Graph g = parse_edge_list(a);
    CHECK(g.regular_degree() == 3);
  }
}
