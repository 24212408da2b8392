#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "urm/generators.hpp"
#include "urm/matching.hpp"

using namespace urm;

TEST_CASE("is_matching", "[matching]") {
  Graph c4 = cycle_graph(4);
  REQUIRE(is_matching(c4, {{0, 1}, {2, 3}}));
  REQUIRE_FALSE(is_matching(c4, {{0, 1}, {1, 2}}));
  REQUIRE_THROWS_AS(is_matching(c4, {{0, 2}}), precondition_error);
  Graph f = fig1_graph();
  std::vector<Edge> diag;
  for (int i = 1; i <= 5; ++i) diag.push_back(make_edge(fig1_a(i), fig1_b(i)));
  REQUIRE(is_matching(f, diag));
}

TEST_CASE("is_ur_bipartite on small cases", "[matching]") {
  Graph c4 = cycle_graph(4);
  auto p = require_bipartition(c4);
  Matching m({{0, 1}, {2, 3}});
  auto r = is_ur_bipartite(c4, p, m);
  REQUIRE_FALSE(r);
  REQUIRE(r.witness.size() == 4);
  REQUIRE(is_alternating_cycle(c4, m, r.witness));

  Graph p4 = path_graph(4);
  REQUIRE(is_ur_bipartite(p4, require_bipartition(p4), Matching({{0, 1}, {2, 3}})));

  Graph f = fig1_graph();
  std::vector<Edge> diag;
  for (int i = 1; i <= 5; ++i) diag.push_back(make_edge(fig1_a(i), fig1_b(i)));
  Matching md(diag);
  auto rf = is_ur_bipartite(f, require_bipartition(f), md);
  REQUIRE_FALSE(rf);
  REQUIRE(is_alternating_cycle(f, md, rf.witness));
}

TEST_CASE("is_ur_general", "[matching]") {
  REQUIRE(is_ur_general(complete_graph(4), Matching()));
  Matching m({{0, 1}, {2, 3}});
  auto r = is_ur_general(complete_graph(4), m);
  REQUIRE_FALSE(r);
  REQUIRE(is_alternating_cycle(complete_graph(4), m, r.witness));

  Graph k33 = complete_bipartite(3, 3);
  for (const auto& e1 : k33.edges()) {
    for (const auto& e2 : k33.edges()) {
      if (e1 < e2 && is_matching(k33, {e1, e2})) REQUIRE_FALSE(is_ur_general(k33, Matching({e1, e2})));
    }
  }
  // Triangle plus pendant: 01 and 23 with 0-2, 1-2 edges. Alternating
  // cycles need an even cycle through both edges; here 0-1-2-3 has none.
  Graph g(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  REQUIRE(is_ur_general(g, Matching({{0, 1}, {2, 3}})));
}

TEST_CASE("is_ur_general on large inputs", "[matching]") {
  Graph p = path_graph(400);
  std::vector<Edge> es;
  for (Vertex v = 0; v + 1 < 400; v += 2) es.push_back({v, v + 1});
  REQUIRE(is_ur_general(p, Matching(es)));
  // Odd cycle with a pendant: 0..200 cycle, matched around except 0,
  // plus pendant 201 on 0. Alternating cycles need an even cycle, and the
  // whole matched set here spans a path, so M is UR.
  std::vector<Edge> ce;
  for (Vertex v = 0; v < 201; ++v) ce.push_back(make_edge(v, (v + 1) % 201));
  ce.push_back({0, 201});
  Graph c(202, ce);
  std::vector<Edge> cm{{0, 201}};
  for (Vertex v = 1; v + 1 < 201; v += 2) cm.push_back({v, v + 1});
  REQUIRE(is_ur_general(c, Matching(cm)));
  // Two triangles joined by a perfect matching (prism): every perfect
  // matching of the prism is one of four, so the rungs are not UR.
  Graph prism(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}, {2, 5}});
  Matching rungs({{0, 3}, {1, 4}, {2, 5}});
  auto r = is_ur_general(prism, rungs);
  REQUIRE_FALSE(r);
  REQUIRE(is_alternating_cycle(prism, rungs, r.witness));
}

TEST_CASE("is_ur_general agrees with brute force on random general graphs", "[matching][property]") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 6 + seed % 5;
    std::vector<Edge> es;
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) {
        if (rng() % 3 == 0) es.push_back({a, b});
      }
    }
    Graph g(n, es);
    // Greedy maximal matching in a shuffled edge order.
    std::shuffle(es.begin(), es.end(), rng);
    std::vector<char> used(n, 0);
    std::vector<Edge> me;
    for (const auto& e : es) {
      if (used[e.u] || used[e.v]) continue;
      used[e.u] = used[e.v] = 1;
      me.push_back(e);
    }
    Matching m(me);
    // Brute force: count perfect matchings of g[V(M)].
    auto cov = m.covered();
    std::size_t count = 0;
    std::vector<char> taken(n, 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
      while (i < cov.size() && taken[cov[i]]) ++i;
      if (i == cov.size()) {
        ++count;
        return;
      }
      Vertex x = cov[i];
      taken[x] = 1;
      for (Vertex y : g.neighbors(x)) {
        if (taken[y] || std::find(cov.begin(), cov.end(), y) == cov.end()) continue;
        taken[y] = 1;
        self(self, i + 1);
        taken[y] = 0;
      }
      taken[x] = 0;
    };
    rec(rec, 0);
    auto r = is_ur_general(g, m);
    INFO("seed " << seed);
    REQUIRE(static_cast<bool>(r) == (count == 1));
    if (!r) REQUIRE(is_alternating_cycle(g, m, r.witness));
  }
}

TEST_CASE("is_induced_matching", "[matching]") {
  REQUIRE_FALSE(is_induced_matching(path_graph(4), Matching({{0, 1}, {2, 3}})));
  REQUIRE(is_induced_matching(path_graph(6), Matching({{0, 1}, {4, 5}})));
  REQUIRE(is_induced_matching(cycle_graph(4), Matching({{0, 1}})));
}

TEST_CASE("Hopcroft-Karp finds maximum matchings", "[matching]") {
  Graph f = fig1_graph();
  REQUIRE(maximum_matching_bipartite(f, require_bipartition(f)).size() == 5);
  Graph k = complete_bipartite(3, 5);
  REQUIRE(maximum_matching_bipartite(k, require_bipartition(k)).size() == 3);
  // Path on 7 vertices: 3.
  Graph p = path_graph(7);
  auto m = maximum_matching_bipartite(p, require_bipartition(p));
  REQUIRE(m.size() == 3);
  REQUIRE(is_matching(p, m));
}

TEST_CASE("maximum matching agrees with brute force on random graphs", "[matching][property]") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Graph g = random_bipartite(5, 6, 3, seed, 0.45);
    auto m = maximum_matching_bipartite(g, require_bipartition(g));
    REQUIRE(is_matching(g, m));
    // Brute force over edge subsets.
    std::size_t best = 0;
    const auto& es = g.edges();
    for (std::uint32_t mask = 0; mask < (1u << es.size()); ++mask) {
      std::vector<Edge> sub;
      for (std::size_t i = 0; i < es.size(); ++i) {
        if (mask >> i & 1u) sub.push_back(es[i]);
      }
      if (sub.size() > best && is_matching(g, sub)) best = sub.size();
    }
    REQUIRE(m.size() == best);
  }
}

TEST_CASE("witness soundness and verifier agreement on random bipartite graphs",
          "[matching][property]") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Graph g = random_bipartite(5, 5, 4, seed, 0.5);
    auto p = require_bipartition(g);
    auto m = maximum_matching_bipartite(g, p);
    auto rb = is_ur_bipartite(g, p, m);
    auto rg = is_ur_general(g, m);
    REQUIRE(static_cast<bool>(rb) == static_cast<bool>(rg));
    if (!rb) {
      REQUIRE(is_alternating_cycle(g, m, rb.witness));
      REQUIRE(is_alternating_cycle(g, m, rg.witness));
    }
    if (is_induced_matching(g, m)) REQUIRE(rb);
  }
}
