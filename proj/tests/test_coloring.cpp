#include <catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "urm/coloring.hpp"
#include "urm/enumerate.hpp"
#include "urm/generators.hpp"
#include "urm/io.hpp"
#include "urm/oracle.hpp"

using namespace urm;

namespace {

std::size_t color_of(const Graph& g, const EdgeColoring& c, Vertex u, Vertex v) {
  return c.color[edge_index(g, make_edge(u, v))];
}

Matching fig1_matching(const int (&pairs)[5][2]) {
  std::vector<Edge> es;
  for (auto [i, j] : pairs) es.push_back(make_edge(fig1_a(i), fig1_b(j)));
  return Matching(es);
}

constexpr int identity_pairs[5][2] = {{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}};
constexpr int diagonal_pairs[5][2] = {{1, 3}, {2, 1}, {3, 5}, {4, 2}, {5, 4}};

// K_{4,4} minus the edge a0-b1; m pairs a_i with b_i.
Graph k44_minus_edge() {
  std::vector<Edge> es;
  for (Vertex a = 0; a < 4; ++a) {
    for (Vertex b = 4; b < 8; ++b) {
      if (!(a == 0 && b == 5)) es.push_back({a, b});
    }
  }
  return Graph(8, es);
}

Matching diagonal_of(std::size_t k) {
  std::vector<Edge> es;
  for (Vertex i = 0; i < k; ++i) es.push_back({i, static_cast<Vertex>(k + i)});
  return Matching(es);
}

Graph connected_bipartite_delta4(std::uint64_t seed, std::size_t side) {
  return first_connected(
      [&](std::uint64_t s) {
        Graph g = random_bipartite(side, side, 4, s, 0.6);
        return g;
      },
      seed);
}

void require_partition(const Graph& g, const Matching& m, const MatchingPartition& p) {
  std::vector<Edge> all;
  for (const auto& part : p.parts) {
    REQUIRE(!part.empty());
    REQUIRE(is_ur(g, part));
    all.insert(all.end(), part.edges().begin(), part.edges().end());
  }
  std::sort(all.begin(), all.end());
  REQUIRE(std::adjacent_find(all.begin(), all.end()) == all.end());
  REQUIRE(all == m.edges());
}

} // namespace

TEST_CASE("greedy on P4 and single edge", "[coloring]") {
  Graph p4 = path_graph(4);
  auto c = greedy_coloring(p4);
  REQUIRE(color_of(p4, c, 0, 1) == 1);
  REQUIRE(color_of(p4, c, 1, 2) == 2);
  REQUIRE(color_of(p4, c, 2, 3) == 3);
  REQUIRE(c.color_count() == 3);
  REQUIRE(check_ur_coloring(p4, c));

  Graph k2 = path_graph(2);
  REQUIRE(greedy_coloring(k2).color_count() == 1);
  REQUIRE(greedy_coloring(Graph(3, {})).color_count() == 0);
}

TEST_CASE("greedy rejects a bad order", "[coloring]") {
  Graph g = path_graph(3);
  std::vector<Vertex> dup{0, 0, 1};
  REQUIRE_THROWS_AS(greedy_coloring(g, dup), precondition_error);
  std::vector<Vertex> shortv{0, 1};
  REQUIRE_THROWS_AS(greedy_coloring(g, shortv), precondition_error);
}

TEST_CASE("greedy on K_{d,d} needs d^2 colors", "[coloring]") {
  for (std::size_t d : {2u, 3u}) {
    Graph g = complete_bipartite(d, d);
    auto c = greedy_coloring(g);
    REQUIRE(c.color_count() == d * d);
    REQUIRE(check_ur_coloring(g, c));
    REQUIRE(chi_ur_exact(g).value == d * d);
  }
}

TEST_CASE("greedy bound and validity on every small graph", "[coloring][property]") {
  for (std::size_t n = 2; n <= 7; ++n) {
    for (const auto& g : enumerate_connected_graphs(n)) {
      const std::size_t d = g.max_degree();
      for (std::uint64_t seed : {0ull, 1ull}) {
        auto c = seed == 0 ? greedy_coloring(g) : greedy_coloring(g, random_order(n, seed));
        INFO(write_graph(g));
        REQUIRE(c.color_count() <= d * d);
        REQUIRE(check_ur_coloring(g, c));
      }
    }
  }
}

TEST_CASE("improve on P4 reaches the optimum", "[coloring]") {
  Graph p4 = path_graph(4);
  auto c = improve_coloring(p4, greedy_coloring(p4));
  REQUIRE(c.color_count() == 2);
  REQUIRE(check_ur_coloring(p4, c));
  REQUIRE(color_of(p4, c, 0, 1) == color_of(p4, c, 2, 3));
  REQUIRE(chi_ur_exact(p4).value == 2);
}

TEST_CASE("improve is blocked exactly on K_{d,d}", "[coloring]") {
  for (std::size_t d : {1u, 2u, 3u}) {
    Graph g = complete_bipartite(d, d);
    REQUIRE_THROWS_AS(improve_coloring(g, greedy_coloring(g)), improvement_blocked);
  }
  REQUIRE_THROWS_WITH(improve_coloring(cycle_graph(4), greedy_coloring(cycle_graph(4))),
                      Catch::Matchers::ContainsSubstring("no manipulation applies"));
}

TEST_CASE("improve on fig1", "[coloring]") {
  Graph g = fig1_graph();
  auto greedy = greedy_coloring(g);
  REQUIRE(greedy.color_count() <= 9);
  auto c = improve_coloring(g, greedy);
  REQUIRE(c.color_count() <= 8);
  REQUIRE(check_ur_coloring(g, c));
}

TEST_CASE("improve progress is monotone", "[coloring][property]") {
  Graph g = fano_incidence();
  std::vector<std::string> lines;
  ImproveOptions opt;
  opt.trace = [&](const std::string& s) { lines.push_back(s); };
  auto c = improve_coloring(g, greedy_coloring(g), opt);
  REQUIRE(check_ur_coloring(g, c));
  // "color k has m edges" counts strictly decrease within one victim
  long last_k = -1, last_m = -1;
  for (const auto& s : lines) {
    if (s.rfind("eliminate color ", 0) == 0) {
      last_k = -1;
      continue;
    }
    if (s.rfind("color ", 0) != 0) continue;
    long k = std::stol(s.substr(6));
    long m = std::stol(s.substr(s.find(" has ") + 5));
    if (k == last_k) REQUIRE(m < last_m);
    last_k = k;
    last_m = m;
  }
}

TEST_CASE("improve strict bound on every small connected graph", "[coloring][property]") {
  for (std::size_t n = 2; n <= 7; ++n) {
    for (const auto& g : enumerate_connected_graphs(n)) {
      const std::size_t d = g.max_degree();
      auto greedy = greedy_coloring(g);
      INFO(write_graph(g));
      if (detail::is_complete_bipartite_regular(g)) {
        if (greedy.color_count() == d * d) REQUIRE_THROWS_AS(improve_coloring(g, greedy), improvement_blocked);
        continue;
      }
      auto c = improve_coloring(g, greedy);
      REQUIRE(c.color_count() + 1 <= d * d);
      REQUIRE(check_ur_coloring(g, c));
    }
  }
}

TEST_CASE("improve from a hand-made d^2 coloring", "[coloring]") {
  // C6 with Δ² = 4 colors; edges in sorted order 01 05 12 23 34 45
  Graph g = cycle_graph(6);
  EdgeColoring c = blank_coloring(g);
  c.color = {1, 2, 2, 3, 4, 1};
  REQUIRE(check_ur_coloring(g, c));
  auto once = improve_coloring(g, c, {false, {}});
  REQUIRE(once.color_count() == 3);
  REQUIRE(check_ur_coloring(g, once));
  REQUIRE(improve_coloring(g, c).color_count() == 3);
  REQUIRE(chi_ur_exact(g).value == 3);
  // below Δ² the non-opportunistic mode leaves the input alone
  Graph p4 = path_graph(4);
  REQUIRE(improve_coloring(p4, greedy_coloring(p4), {false, {}}).color_count() == 3);
}

TEST_CASE("bipartite proper coloring", "[coloring]") {
  Graph c6 = cycle_graph(6);
  auto c = bipartite_proper_coloring(c6);
  REQUIRE(c.color_count() == 2);
  for (const auto& cls : c.classes()) REQUIRE(cls.size() == 3);

  Graph k33 = complete_bipartite(3, 3);
  auto k = bipartite_proper_coloring(k33);
  REQUIRE(k.color_count() == 3);
  for (const auto& cls : k.classes()) REQUIRE(is_matching(k33, cls));

  Graph f = fig1_graph();
  auto fc = bipartite_proper_coloring(f);
  REQUIRE(fc.color_count() == 3);
  for (const auto& cls : fc.classes()) {
    REQUIRE(cls.size() == 5);
    REQUIRE(is_matching(f, cls));
  }
  REQUIRE_THROWS_AS(bipartite_proper_coloring(cycle_graph(5)), not_bipartite);
  REQUIRE(bipartite_proper_coloring(Graph(2, {})).color_count() == 0);
}

TEST_CASE("bipartite proper coloring uses exactly Δ colors", "[coloring][property]") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Graph g = random_bipartite(3 + seed % 9, 4 + seed % 7, 1 + seed % 6, seed, 0.5);
    auto c = bipartite_proper_coloring(g);
    REQUIRE(c.color_count() == g.max_degree());
    for (const auto& cls : c.classes()) REQUIRE(is_matching(g, cls));
  }
}

TEST_CASE("partition on K44 minus an edge", "[coloring]") {
  Graph g = k44_minus_edge();
  Matching m = diagonal_of(4);
  auto p = partition_matching_ur(g, m);
  REQUIRE(p.parts.size() <= 3);
  require_partition(g, m, p);
  REQUIRE(min_ur_partition_of_matching(g, m).value <= p.parts.size());
  REQUIRE(min_ur_partition_of_matching(g, m).value <= 3);
}

TEST_CASE("partition trivial and precondition cases", "[coloring]") {
  Graph g = k44_minus_edge();
  REQUIRE(partition_matching_ur(g, Matching()).parts.empty());
  Graph f = fig1_graph();
  REQUIRE_THROWS_AS(partition_matching_ur(f, fig1_matching(diagonal_pairs)), precondition_error);
  REQUIRE_THROWS_AS(partition_matching_ur(complete_bipartite(4, 4), diagonal_of(4)), precondition_error);
  REQUIRE_THROWS_AS(partition_matching_ur(complete_graph(5), Matching()), not_bipartite);
  REQUIRE_THROWS_AS(partition_matching_ur(g, Matching({{0, 1}})), precondition_error);
}

TEST_CASE("Δ=3 counterexamples need more than Δ-1 parts", "[coloring][oracle]") {
  Graph f = fig1_graph();
  REQUIRE(min_ur_partition_of_matching(f, fig1_matching(identity_pairs)).value == 3);
  REQUIRE(min_ur_partition_of_matching(f, fig1_matching(diagonal_pairs)).value == 2);
  std::vector<Edge> joining;
  Graph twins = twin_cliques(3, &joining);
  REQUIRE(min_ur_partition_of_matching(twins, Matching(joining)).value == 3);
}

TEST_CASE("partition property on random Δ>=4 bipartite graphs", "[coloring][property]") {
  std::set<std::string> cases;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const std::size_t side = 4 + seed % 6;
    Graph g = random_bipartite(side, side, 4 + seed % 2, seed, 0.7);
    if (!is_connected(g) || g.max_degree() < 4 || detail::is_complete_bipartite_regular(g)) continue;
    auto parts = require_bipartition(g);
    Matching full = maximum_matching_bipartite(g, parts);
    // a random sub-matching too, to exercise the non-perfect case
    std::vector<Edge> half;
    for (std::size_t i = 0; i < full.size(); i += 2) half.push_back(full.edges()[i]);
    for (const Matching& m : {full, Matching(half)}) {
      auto p = partition_matching_ur(g, parts, m);
      INFO(write_graph(g));
      REQUIRE(p.parts.size() + 1 <= g.max_degree());
      require_partition(g, m, p);
      for (const auto& [name, n] : p.case_counts) cases.insert(name);
      if (m.size() <= 8) REQUIRE(min_ur_partition_of_matching(g, m).value <= p.parts.size());
      ++checked;
    }
  }
  REQUIRE(checked > 100);
  REQUIRE(cases.count("case (i)") == 1);
  REQUIRE(cases.count("case (ii)") == 1);
}

TEST_CASE("partition on regular graphs hits cases (iii) and (iv)", "[coloring]") {
  std::set<std::string> cases;
  // 4-regular bipartite: circulant with offsets, and two K44-minus-PM blocks joined
  for (std::size_t k = 5; k <= 9; ++k) {
    std::vector<Edge> es;
    for (Vertex i = 0; i < k; ++i) {
      for (Vertex off = 0; off < 4; ++off) es.push_back({i, static_cast<Vertex>(k + (i + off) % k)});
    }
    Graph g(2 * k, es);
    auto p = partition_matching_ur(g, diagonal_of(k));
    REQUIRE(p.parts.size() <= 3);
    require_partition(g, diagonal_of(k), p);
    for (const auto& [name, n] : p.case_counts) cases.insert(name);
  }
  // two copies of K_{4,4} minus an edge, bridged into a 4-regular graph by a
  // pair of edges; the matched pair next to the bridge separates the copies
  {
    std::vector<Edge> es;
    auto block = [&](Vertex off) {
      for (Vertex a = 0; a < 4; ++a) {
        for (Vertex b = 0; b < 4; ++b) {
          if (!(a == 0 && b == 1)) es.push_back({static_cast<Vertex>(off + a), static_cast<Vertex>(off + 4 + b)});
        }
      }
    };
    block(0);
    block(8);
    es.push_back({0, 13});  // a0 of copy 1 to b1 of copy 2
    es.push_back({8, 5});   // a0 of copy 2 to b1 of copy 1
    Graph g(16, es);
    REQUIRE(g.is_regular());
    std::vector<Edge> pm;
    for (Vertex off : {0u, 8u}) {
      for (Vertex i = 0; i < 4; ++i) pm.push_back(make_edge(off + i, off + 4 + i));
    }
    Matching m(pm);
    auto p = partition_matching_ur(g, m);
    REQUIRE(p.parts.size() <= 3);
    require_partition(g, m, p);
    for (const auto& [name, n] : p.case_counts) cases.insert(name);
  }
  REQUIRE(cases.count("case (iii)") == 1);
  REQUIRE(cases.count("case (iv)") == 1);
}

TEST_CASE("delta2md pipeline", "[coloring]") {
  // K44 minus a perfect matching is 3-regular
  std::vector<Edge> es;
  for (Vertex a = 0; a < 4; ++a) {
    for (Vertex b = 0; b < 4; ++b) {
      if (a != b) es.push_back({a, static_cast<Vertex>(4 + b)});
    }
  }
  REQUIRE_THROWS_AS(color_delta2_minus_delta(Graph(8, es)), precondition_error);
  REQUIRE_THROWS_AS(color_delta2_minus_delta(complete_bipartite(4, 4)), precondition_error);

  std::size_t done = 0;
  for (std::uint64_t seed = 0; done < 60; ++seed) {
    Graph g = connected_bipartite_delta4(seed, 5 + seed % 8);
    if (g.max_degree() != 4 || detail::is_complete_bipartite_regular(g)) continue;
    auto r = color_delta2_minus_delta_layered(g);
    REQUIRE(r.coloring.color_count() <= 12);
    REQUIRE(check_ur_coloring(g, r.coloring));
    REQUIRE(r.skeleton.color_count() == 4);
    for (const auto& cls : r.skeleton.classes()) REQUIRE(is_matching(g, cls));
    // each final class sits inside one skeleton class
    std::vector<std::size_t> home(r.coloring.max_color() + 1, 0);
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      auto& h = home[r.coloring.color[i]];
      if (h == 0) h = r.skeleton.color[i];
      REQUIRE(h == r.skeleton.color[i]);
    }
    ++done;
  }
}

TEST_CASE("fig1 shipped coloring and chi_ur", "[coloring][io]") {
  auto file = read_graph_file(std::string(URM_FIXTURES) + "/fig1.txt");
  REQUIRE(file.graph == fig1_graph());
  auto c = parse_coloring(read_text_file(std::string(URM_FIXTURES) + "/fig1_coloring.txt"), file);
  REQUIRE(c.color_count() == 6);
  REQUIRE(check_ur_coloring(file.graph, c));
  REQUIRE(chi_ur_exact(file.graph).value <= 6);
}

TEST_CASE("coloring round trip and parse errors", "[coloring][io]") {
  auto file = parse_graph("0 1\n1 2\n2 3\n");
  auto c = greedy_coloring(file.graph);
  auto text = write_coloring(c);
  REQUIRE(text == "0 1 1\n1 2 2\n2 3 3\ncolors: 3\n");
  auto back = parse_coloring(text, file);
  REQUIRE(back.color == c.color);
  REQUIRE_THROWS_AS(parse_coloring("0 1 1\n1 2 2\n", file), parse_error);           // 2-3 uncolored
  REQUIRE_THROWS_AS(parse_coloring("0 1 1\n1 2 2\n2 3 0\n", file), parse_error);    // color 0
  REQUIRE_THROWS_AS(parse_coloring("0 1 1\n0 2 2\n2 3 3\n", file), parse_error);    // not an edge
  REQUIRE_THROWS_AS(parse_coloring("0 1 1\n1 2 2\n2 3 3\ncolors: 4\n", file), parse_error);
  REQUIRE_THROWS_AS(parse_coloring("0 1 1\n0 1 2\n1 2 2\n2 3 3\n", file), parse_error);
}
