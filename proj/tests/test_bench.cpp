#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "urm/bench.hpp"

using namespace urm;
using bench::json;

namespace {

std::vector<json> collect(const bench::FamilySpec& f, const bench::RunOptions& o, bench::Summary* out = nullptr) {
  std::vector<json> lines;
  auto s = bench::run(f, o, [&](const json& j) { lines.push_back(json::parse(j.dump())); });
  if (out) *out = s;
  return lines;
}

} // namespace

TEST_CASE("empty family gives only a summary", "[bench]") {
  bench::FamilySpec f;
  f.count = 0;
  bench::RunOptions o;
  o.algorithms = {"approx-subcubic"};
  auto lines = collect(f, o);
  REQUIRE(lines.size() == 1);
  REQUIRE(lines[0]["summary"] == true);
  REQUIRE(lines[0]["instances"] == 0);
}

TEST_CASE("records are deterministic and carry ratio iff oracle", "[bench]") {
  bench::FamilySpec f;
  f.count = 25;
  f.seed = 7;
  bench::RunOptions o;
  o.algorithms = {"approx-subcubic", "greedy", "improve"};
  bench::Summary s;
  auto a = collect(f, o, &s);
  auto b = collect(f, o);
  REQUIRE(a.size() == 25 * 3 + 1);
  REQUIRE(s.passed());
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    REQUIRE(a[i]["instance"] == b[i]["instance"]);
    REQUIRE(a[i]["seed"] == b[i]["seed"]);
    if (a[i].contains("error")) continue;
    REQUIRE(a[i]["output"] == b[i]["output"]);
    REQUIRE(a[i].contains("ratio") == a[i].contains("oracle"));
    REQUIRE(a[i]["bound_ok"] == true);
    if (a[i].contains("oracle") && a[i]["oracle"].get<std::size_t>() > 0) {
      double r = a[i]["output"].get<double>() / a[i]["oracle"].get<double>();
      REQUIRE(a[i]["ratio"].get<double>() == Catch::Approx(r));
    }
  }
  REQUIRE(a.back()["algorithms"]["approx-subcubic"]["records"] == 25);
}

TEST_CASE("oracle is opt-in and budgeted", "[bench]") {
  bench::FamilySpec f;
  f.count = 3;
  f.n_min = f.n_max = 40;
  bench::RunOptions o;
  o.algorithms = {"approx-subcubic"};
  for (const auto& j : collect(f, o)) {
    if (!j.contains("summary")) REQUIRE_FALSE(j.contains("oracle"));
  }
  f.n_min = f.n_max = 8;
  o.use_oracle = false;
  for (const auto& j : collect(f, o)) {
    if (!j.contains("summary")) REQUIRE_FALSE(j.contains("oracle"));
  }
}

TEST_CASE("delta2md over Δ=4 bipartite family stays within 12", "[bench]") {
  bench::FamilySpec f;
  f.model = "bipartite";
  f.delta = 4;
  f.count = 30;
  f.n_min = 10;
  f.n_max = 20;
  bench::RunOptions o;
  o.algorithms = {"delta2md"};
  o.use_oracle = false;
  bench::Summary s;
  collect(f, o, &s);
  REQUIRE(s.passed());
  REQUIRE(s.per_algorithm["delta2md"].max_output <= 12);
}

TEST_CASE("unknown names are rejected", "[bench]") {
  bench::FamilySpec f;
  bench::RunOptions o;
  o.algorithms = {"nope"};
  REQUIRE_THROWS_AS(bench::run(f, o, [](const json&) {}), precondition_error);
  o.algorithms = {"greedy"};
  f.model = "nope";
  REQUIRE_THROWS_AS(bench::run(f, o, [](const json&) {}), precondition_error);
}
