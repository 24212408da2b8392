#include <catch_amalgamated.hpp>

#include "urm/approx_c4free.hpp"
#include "urm/generators.hpp"
#include "urm/oracle.hpp"

using namespace urm;

namespace {

Graph spider() {
  // Center 0, middle layer 1..3, leaves 4..6.
  return Graph(7, {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 5}, {3, 6}});
}

} // namespace

TEST_CASE("alpha values", "[c4free]") {
  auto a3 = c4free_ratio(3), a4 = c4free_ratio(4), a5 = c4free_ratio(5);
  REQUIRE((a3.num == 5 && a3.den == 9));
  REQUIRE((a4.num == 11 && a4.den == 29));
  REQUIRE((a5.num == 19 && a5.den == 67));
  REQUIRE(a3.ceil_times(3) == 2);
}

TEST_CASE("extension_loop on C6", "[c4free]") {
  Graph c6 = cycle_graph(6);
  C4FreeOptions opt;
  opt.assert_invariants = true;
  auto r = extension_loop(c6, require_bipartition(c6), 3, opt);
  REQUIRE(r.matching.size() == 2);
  REQUIRE(is_ur(c6, r.matching));
  REQUIRE(r.invariant_checks == r.steps + 1);
}

TEST_CASE("extension_loop on the spider reaches |A|", "[c4free]") {
  Graph g = spider();
  auto parts = require_bipartition(g).swapped();
  REQUIRE(parts.side_a() == std::vector<Vertex>{1, 2, 3});
  C4FreeOptions opt;
  opt.assert_invariants = true;
  auto r = extension_loop(g, parts, 3, opt);
  REQUIRE(r.matching.size() == 3);
  REQUIRE(nu_ur_exact(g).value == 3);
}

TEST_CASE("extension_loop on P5 with interior A at Δ = 4", "[c4free]") {
  Graph p5 = path_graph(5);
  auto parts = require_bipartition(p5).swapped();
  REQUIRE(parts.side_a() == std::vector<Vertex>{1, 3});
  C4FreeOptions opt;
  opt.assert_invariants = true;
  auto r = extension_loop(p5, parts, 4, opt);
  REQUIRE(static_cast<std::int64_t>(r.matching.size()) >= c4free_ratio(4).ceil_times(2));
  REQUIRE(is_ur(p5, r.matching));
}

TEST_CASE("extension_loop preconditions are named", "[c4free]") {
  Graph c6 = cycle_graph(6);
  auto p = require_bipartition(c6);
  REQUIRE_THROWS_AS(extension_loop(c6, p, 2), precondition_error);
  REQUIRE_THROWS_AS(extension_loop(path_graph(4), require_bipartition(path_graph(4)), 3),
                    precondition_error);
  Graph k33 = complete_bipartite(3, 3);
  REQUIRE_THROWS_AS(extension_loop(k33, require_bipartition(k33), 3), contains_c4);
  Graph two(12, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {6, 7}, {7, 8}, {8, 9}, {9, 10},
                 {10, 11}, {11, 6}});
  REQUIRE_THROWS_AS(extension_loop(two, require_bipartition(two), 3), precondition_error);
}

TEST_CASE("approximate_c4free small cases", "[c4free]") {
  REQUIRE(approximate_c4free(path_graph(4)).matching.size() == 2);
  auto c6 = approximate_c4free(cycle_graph(6));
  REQUIRE(c6.matching.size() == 2);
  REQUIRE(c6.delta == 3);
  REQUIRE_THROWS_AS(approximate_c4free(cycle_graph(5)), not_bipartite);
  REQUIRE_THROWS_AS(approximate_c4free(cycle_graph(4)), contains_c4);
  C4FreeOptions opt;
  opt.delta = 5;
  REQUIRE(approximate_c4free(cycle_graph(6), opt).delta == 5);
  opt.delta = 1;
  REQUIRE(approximate_c4free(cycle_graph(6), opt).delta == 3);
}

TEST_CASE("approximate_c4free on the Fano incidence graph", "[c4free]") {
  Graph g = fano_incidence();
  C4FreeOptions opt;
  opt.assert_invariants = true;
  auto r = approximate_c4free(g, opt);
  auto exact = static_cast<std::int64_t>(nu_ur_exact(g).value);
  REQUIRE(is_ur(g, r.matching));
  auto size = static_cast<std::int64_t>(r.matching.size());
  if (r.regular_fallback) {
    REQUIRE(size >= c4free_ratio(3).ceil_times(exact - 1));
  } else {
    REQUIRE(size >= c4free_ratio(3).ceil_times(exact));
  }
}

TEST_CASE("approximate_c4free trace lines", "[c4free]") {
  std::vector<std::string> lines;
  C4FreeOptions opt;
  opt.trace = [&](const std::string& s) { lines.push_back(s); };
  approximate_c4free(cycle_graph(8), opt);
  REQUIRE_FALSE(lines.empty());
  bool saw_step = false;
  for (const auto& l : lines) saw_step = saw_step || l.rfind("step ", 0) == 0;
  REQUIRE(saw_step);
}

TEST_CASE("approximate_c4free ratio on random C4-free graphs", "[c4free][property]") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    std::size_t delta = 3 + seed % 3;
    std::size_t n = 8 + seed % 7;
    Graph g;
    try {
      g = random_c4free_bipartite(n, delta, seed, n + seed % 3);
    } catch (const precondition_error&) {
      continue;
    }
    C4FreeOptions opt;
    opt.assert_invariants = true;
    auto r = approximate_c4free(g, opt);
    REQUIRE(is_ur(g, r.matching));
    auto exact = static_cast<std::int64_t>(nu_ur_exact(g).value);
    auto need = c4free_ratio(r.delta).ceil_times(r.regular_fallback ? exact - 1 : exact);
    REQUIRE(static_cast<std::int64_t>(r.matching.size()) >= need);
  }
}
