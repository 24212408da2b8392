#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "urm/error.hpp"
#include "urm/graph.hpp"

namespace urm {

/// SplitMix64 step; expands one master seed into independent per-instance
/// seeds.
inline std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t instance_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix_seed(master ^ mix_seed(index));
}

/// K_{a,b} with side A = 0..a-1 and side B = a..a+b-1.
inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<Edge> edges;
  for (Vertex x = 0; x < a; ++x) {
    for (Vertex y = 0; y < b; ++y) edges.push_back({x, static_cast<Vertex>(a + y)});
  }
  return Graph(a + b, std::move(edges));
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
  return Graph(n, std::move(edges));
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw precondition_error("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.push_back(make_edge(v, static_cast<Vertex>((v + 1) % n)));
  return Graph(n, std::move(edges));
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return Graph(n, std::move(edges));
}

/// Two copies of K_k on 0..k-1 and k..2k-1 joined by the perfect matching
/// i -- k+i. The joining edges are returned in `joining`.
inline Graph twin_cliques(std::size_t k, std::vector<Edge>* joining = nullptr) {
  std::vector<Edge> edges;
  for (std::size_t side = 0; side < 2; ++side) {
    for (Vertex u = 0; u < k; ++u) {
      for (Vertex v = u + 1; v < k; ++v) {
        edges.push_back({static_cast<Vertex>(side * k + u), static_cast<Vertex>(side * k + v)});
      }
    }
  }
  if (joining) joining->clear();
  for (Vertex i = 0; i < k; ++i) {
    Edge e{i, static_cast<Vertex>(k + i)};
    edges.push_back(e);
    if (joining) joining->push_back(e);
  }
  return Graph(2 * k, std::move(edges));
}

/// The 3-regular bipartite graph on a1..a5 (ids 0..4) and b1..b5 (ids 5..9)
/// whose edges split into six UR matchings although ν_ur-partitions of its
/// perfect matchings need three parts.
inline Graph fig1_graph() {
  // Neighbors of a_i as b indices (1-based).
  static constexpr int nb[5][3] = {{1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {2, 4, 5}, {3, 4, 5}};
  std::vector<Edge> edges;
  for (Vertex i = 0; i < 5; ++i) {
    for (int b : nb[i]) edges.push_back({i, static_cast<Vertex>(4 + b)});
  }
  return Graph(10, std::move(edges));
}

inline Vertex fig1_a(int i) { return static_cast<Vertex>(i - 1); }
inline Vertex fig1_b(int i) { return static_cast<Vertex>(4 + i); }

/// Point-line incidence graph of the Fano plane: points 0..6, lines 7..13.
/// 3-regular, bipartite, girth 6.
inline Graph fano_incidence() {
  std::vector<Edge> edges;
  for (Vertex l = 0; l < 7; ++l) {
    for (Vertex off : {0u, 1u, 3u}) edges.push_back({(l + off) % 7, 7 + l});
  }
  return Graph(14, std::move(edges));
}

/// Random bipartite graph with sides 0..nA-1 and nA..nA+nB-1. All pairs are
/// visited in random order; each is kept with probability `density` while
/// both endpoint degrees stay below `max_degree`.
inline Graph random_bipartite(std::size_t na, std::size_t nb, std::size_t max_degree,
                              std::uint64_t seed, double density = 1.0) {
  if (max_degree < 1) throw precondition_error("random_bipartite: max degree must be >= 1");
  if (density <= 0.0 || density > 1.0) throw precondition_error("random_bipartite: density in (0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Edge> pairs;
  pairs.reserve(na * nb);
  for (Vertex a = 0; a < na; ++a) {
    for (Vertex b = 0; b < nb; ++b) pairs.push_back({a, static_cast<Vertex>(na + b)});
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::bernoulli_distribution keep(density);
  std::vector<std::size_t> deg(na + nb, 0);
  std::vector<Edge> edges;
  for (const auto& e : pairs) {
    if (deg[e.u] >= max_degree || deg[e.v] >= max_degree) continue;
    if (density < 1.0 && !keep(rng)) continue;
    ++deg[e.u];
    ++deg[e.v];
    edges.push_back(e);
  }
  return Graph(na + nb, std::move(edges));
}

/// Random graph on n vertices with maximum degree `max_degree`, built like
/// random_bipartite over all pairs.
inline Graph random_bounded_degree(std::size_t n, std::size_t max_degree, std::uint64_t seed,
                                   double density = 1.0) {
  if (max_degree < 1) throw precondition_error("random_bounded_degree: max degree must be >= 1");
  if (density <= 0.0 || density > 1.0) throw precondition_error("random_bounded_degree: density in (0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Edge> pairs;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) pairs.push_back({u, v});
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::bernoulli_distribution keep(density);
  std::vector<std::size_t> deg(n, 0);
  std::vector<Edge> edges;
  for (const auto& e : pairs) {
    if (deg[e.u] >= max_degree || deg[e.v] >= max_degree) continue;
    if (density < 1.0 && !keep(rng)) continue;
    ++deg[e.u];
    ++deg[e.v];
    edges.push_back(e);
  }
  return Graph(n, std::move(edges));
}

/// Random bipartite graph with maximum degree 3 on n vertices: side A is
/// 0..ceil(n/2)-1. The edge target is drawn uniformly from [n-1, 3n/2] and
/// random unsaturated pairs are sampled until it is met or sampling stalls.
inline Graph random_subcubic_bipartite(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw precondition_error("random_subcubic_bipartite: n must be >= 2");
  std::mt19937_64 rng(seed);
  const std::size_t na = (n + 1) / 2, nb = n - na;
  const std::size_t cap = 3 * std::min(na, nb);
  std::uniform_int_distribution<std::size_t> pick_target(n - 1, 3 * n / 2);
  const std::size_t target = std::min(pick_target(rng), cap);

  std::vector<Vertex> open_a(na), open_b(nb);
  for (Vertex i = 0; i < na; ++i) open_a[i] = i;
  for (Vertex i = 0; i < nb; ++i) open_b[i] = static_cast<Vertex>(na + i);
  std::vector<std::array<Vertex, 3>> adj(n);
  std::vector<std::uint8_t> deg(n, 0);
  std::vector<Edge> edges;
  std::size_t stall = 0;
  while (edges.size() < target && !open_a.empty() && !open_b.empty() && stall < 64) {
    std::size_t ia = std::uniform_int_distribution<std::size_t>(0, open_a.size() - 1)(rng);
    std::size_t ib = std::uniform_int_distribution<std::size_t>(0, open_b.size() - 1)(rng);
    Vertex a = open_a[ia], b = open_b[ib];
    if (std::find(adj[a].begin(), adj[a].begin() + deg[a], b) != adj[a].begin() + deg[a]) {
      ++stall;
      continue;
    }
    stall = 0;
    adj[a][deg[a]++] = b;
    adj[b][deg[b]++] = a;
    edges.push_back({a, b});
    if (deg[a] == 3) {
      open_a[ia] = open_a.back();
      open_a.pop_back();
    }
    if (deg[b] == 3) {
      open_b[ib] = open_b.back();
      open_b.pop_back();
    }
  }
  return Graph(n, std::move(edges));
}

/// Connected variant: a random bipartite tree of maximum degree 3 (sides
/// interleaved, each new vertex hung on a random open vertex of the other
/// side), then random extra pairs up to a target drawn from [n-1, 3n/2].
inline Graph random_connected_subcubic_bipartite(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw precondition_error("random_connected_subcubic_bipartite: n must be >= 2");
  std::mt19937_64 rng(seed);
  const std::size_t na = (n + 1) / 2;
  std::vector<Vertex> order;
  for (Vertex i = 0; i < na; ++i) {
    order.push_back(i);
    if (na + i < n) order.push_back(static_cast<Vertex>(na + i));
  }
  std::vector<std::uint8_t> deg(n, 0);
  std::vector<Vertex> open[2];
  std::vector<Edge> edges;
  auto side = [&](Vertex v) { return v < na ? 0 : 1; };
  auto take = [&](std::vector<Vertex>& pool, std::size_t idx) {
    Vertex x = pool[idx];
    if (++deg[x] == 3) {
      pool[idx] = pool.back();
      pool.pop_back();
    }
    return x;
  };
  open[0].push_back(order[0]);
  for (std::size_t i = 1; i < order.size(); ++i) {
    Vertex v = order[i];
    auto& pool = open[1 - side(v)];
    if (pool.empty()) throw soundness_error("random_connected_subcubic_bipartite: no open vertex");
    Vertex p = take(pool, std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng));
    ++deg[v];
    open[side(v)].push_back(v);
    edges.push_back(make_edge(p, v));
  }
  std::set<Edge> have(edges.begin(), edges.end());
  const std::size_t target = std::uniform_int_distribution<std::size_t>(n - 1, 3 * n / 2)(rng);
  std::size_t stall = 0;
  while (edges.size() < target && !open[0].empty() && !open[1].empty() && stall < 64) {
    std::size_t ia = std::uniform_int_distribution<std::size_t>(0, open[0].size() - 1)(rng);
    std::size_t ib = std::uniform_int_distribution<std::size_t>(0, open[1].size() - 1)(rng);
    Edge e = make_edge(open[0][ia], open[1][ib]);
    if (have.count(e)) {
      ++stall;
      continue;
    }
    stall = 0;
    take(open[0], ia);
    take(open[1], ib);
    have.insert(e);
    edges.push_back(e);
  }
  return Graph(n, std::move(edges));
}

/// Random C4-free bipartite graph with maximum degree `max_degree`: random
/// pairs are inserted unless they would close a 4-cycle or exceed a degree
/// cap. `target` edges (default n) must be reached within 50n rejected
/// samples, otherwise precondition_error is raised.
inline Graph random_c4free_bipartite(std::size_t n, std::size_t max_degree, std::uint64_t seed,
                                     std::optional<std::size_t> target = std::nullopt) {
  if (n < 2) throw precondition_error("random_c4free_bipartite: n must be >= 2");
  if (max_degree < 1) throw precondition_error("random_c4free_bipartite: max degree must be >= 1");
  std::mt19937_64 rng(seed);
  const std::size_t na = (n + 1) / 2, nb = n - na;
  const std::size_t want = target.value_or(n);
  std::vector<std::vector<Vertex>> adj(n);
  std::vector<Edge> edges;
  std::uniform_int_distribution<Vertex> pa(0, static_cast<Vertex>(na - 1));
  std::uniform_int_distribution<Vertex> pb(static_cast<Vertex>(na), static_cast<Vertex>(n - 1));
  const std::size_t budget = 50 * n;
  std::size_t rejected = 0;
  auto adjacent = [&](Vertex x, Vertex y) {
    return std::find(adj[x].begin(), adj[x].end(), y) != adj[x].end();
  };
  while (edges.size() < want) {
    if (rejected >= budget) {
      throw precondition_error("random_c4free_bipartite: could not place " + std::to_string(want) +
                               " edges within the retry budget (placed " +
                               std::to_string(edges.size()) + ")");
    }
    if (nb == 0) break;
    Vertex a = pa(rng), b = pb(rng);
    bool ok = adj[a].size() < max_degree && adj[b].size() < max_degree && !adjacent(a, b);
    // a - b closes a 4-cycle iff some a' ~ b and b' ~ a have a' ~ b'.
    for (Vertex a2 : adj[b]) {
      if (!ok) break;
      for (Vertex b2 : adj[a]) {
        if (adjacent(a2, b2)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) {
      ++rejected;
      continue;
    }
    adj[a].push_back(b);
    adj[b].push_back(a);
    edges.push_back({a, b});
  }
  return Graph(n, std::move(edges));
}

/// Calls make(seed'), with seed' = instance_seed(seed, i) for i = 0, 1, ...
/// until the result is connected. Throws after `tries` attempts.
template <class Make>
Graph first_connected(Make&& make, std::uint64_t seed, std::size_t tries = 1000) {
  for (std::size_t i = 0; i < tries; ++i) {
    Graph g = make(instance_seed(seed, i));
    if (is_connected(g)) return g;
  }
  throw precondition_error("no connected instance within " + std::to_string(tries) + " seeds");
}

} // namespace urm
