#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

#include "urm/error.hpp"
#include "urm/graph.hpp"

namespace urm {

inline constexpr Vertex no_vertex = std::numeric_limits<Vertex>::max();

/// A set of edges; whether they form a matching is checked, not assumed.
class Matching {
public:
  Matching() = default;
  explicit Matching(std::vector<Edge> edges) : edges_(std::move(edges)) {
    for (auto& e : edges_) e = make_edge(e.u, e.v);
    std::sort(edges_.begin(), edges_.end());
  }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  void add(Edge e) {
    e = make_edge(e.u, e.v);
    edges_.insert(std::upper_bound(edges_.begin(), edges_.end(), e), e);
  }

  bool contains(Edge e) const {
    return std::binary_search(edges_.begin(), edges_.end(), make_edge(e.u, e.v));
  }

  /// Covered vertices V(M), ascending.
  std::vector<Vertex> covered() const {
    std::vector<Vertex> out;
    out.reserve(2 * edges_.size());
    for (const auto& e : edges_) {
      out.push_back(e.u);
      out.push_back(e.v);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// mate[v] is v's partner or no_vertex. Assumes a matching.
  std::vector<Vertex> mates(std::size_t n) const {
    std::vector<Vertex> mate(n, no_vertex);
    for (const auto& e : edges_) {
      mate[e.u] = e.v;
      mate[e.v] = e.u;
    }
    return mate;
  }

  friend bool operator==(const Matching&, const Matching&) = default;

private:
  std::vector<Edge> edges_;
};

inline Matching matching_from_mates(const std::vector<Vertex>& mate) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v < mate.size(); ++v) {
    if (mate[v] != no_vertex && v < mate[v]) edges.push_back({v, mate[v]});
  }
  return Matching(std::move(edges));
}

/// True iff no two edges share an endpoint. Throws if an edge is not in g.
inline bool is_matching(const Graph& g, const std::vector<Edge>& edges) {
  std::vector<char> used(g.vertex_count(), 0);
  bool ok = true;
  for (const auto& e : edges) {
    if (!g.has_edge(e)) {
      throw precondition_error("edge " + std::to_string(e.u) + " " + std::to_string(e.v) +
                               " is not in the graph");
    }
    if (used[e.u] || used[e.v]) ok = false;
    used[e.u] = used[e.v] = 1;
  }
  return ok;
}

inline bool is_matching(const Graph& g, const Matching& m) { return is_matching(g, m.edges()); }

inline void require_matching(const Graph& g, const Matching& m) {
  if (!is_matching(g, m)) throw precondition_error("edge set is not a matching");
}

/// Outcome of a UR test. When not UR, `witness` is an M-alternating cycle
/// given as a cyclic vertex sequence whose first edge is in M.
struct UrCheck {
  bool uniquely_restricted = true;
  std::vector<Vertex> witness;

  explicit operator bool() const noexcept { return uniquely_restricted; }
};

/// Independent recheck of a witness: even length >= 4, distinct vertices,
/// consecutive pairs are edges, alternating in/out of M starting with M.
inline bool is_alternating_cycle(const Graph& g, const Matching& m,
                                 const std::vector<Vertex>& cycle) {
  const std::size_t k = cycle.size();
  if (k < 4 || k % 2 != 0) return false;
  std::vector<Vertex> sorted(cycle);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 0; i < k; ++i) {
    Vertex x = cycle[i], y = cycle[(i + 1) % k];
    if (x >= g.vertex_count() || y >= g.vertex_count() || !g.has_edge(x, y)) return false;
    if (m.contains({x, y}) != (i % 2 == 0)) return false;
  }
  return true;
}

/// UR test for bipartite graphs via the matched-edge digraph: node per
/// matched edge (a, b), arc (a, b) -> (a', b') whenever b ~ a'. M is UR iff
/// this digraph is acyclic. O(n + m).
inline UrCheck is_ur_bipartite(const Graph& g, const Bipartition& parts, const Matching& m) {
  const std::size_t n = g.vertex_count();
  const auto mate = m.mates(n);
  // Node ids: index of the A endpoint in the matching order.
  std::vector<Vertex> a_of(m.size()), b_of(m.size());
  std::vector<std::uint32_t> node_of(n, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& e = m.edges()[i];
    Vertex a = parts.in_a(e.u) ? e.u : e.v;
    a_of[i] = a;
    b_of[i] = e.other(a);
    node_of[a] = static_cast<std::uint32_t>(i);
  }
  // Iterative DFS with colors: 0 white, 1 on stack, 2 done.
  std::vector<std::uint8_t> color(m.size(), 0);
  std::vector<std::uint32_t> parent(m.size(), 0);
  struct Frame {
    std::uint32_t node;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (std::uint32_t root = 0; root < m.size(); ++root) {
    if (color[root]) continue;
    color[root] = 1;
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& fr = stack.back();
      auto nb = g.neighbors(b_of[fr.node]);
      if (fr.next == nb.size()) {
        color[fr.node] = 2;
        stack.pop_back();
        continue;
      }
      Vertex a2 = nb[fr.next++];
      if (mate[a2] == no_vertex || a2 == a_of[fr.node]) continue;
      std::uint32_t to = node_of[a2];
      if (color[to] == 2) continue;
      if (color[to] == 1) {
        // Cycle to -> ... -> fr.node -> to, read back through parents.
        std::vector<std::uint32_t> nodes;
        for (std::uint32_t x = fr.node; x != to; x = parent[x]) nodes.push_back(x);
        nodes.push_back(to);
        std::reverse(nodes.begin(), nodes.end());
        UrCheck r{false, {}};
        for (auto x : nodes) {
          r.witness.push_back(a_of[x]);
          r.witness.push_back(b_of[x]);
        }
        return r;
      }
      parent[to] = fr.node;
      color[to] = 1;
      stack.push_back({to, 0});
    }
  }
  return {};
}

namespace detail {

// Edmonds augmenting-path search on a small local graph (adjacency lists
// over ids 0..k-1). Returns the exposed endpoint reached from `root`, or
// -1; `parent` then encodes the path.
class BlossomSearch {
public:
  explicit BlossomSearch(const std::vector<std::vector<int>>& adj)
      : adj_(adj), k_(static_cast<int>(adj.size())), base_(k_), parent_(k_), used_(k_), blossom_(k_) {}

  int find_path(int root, const std::vector<int>& match) {
    match_ = &match;
    std::fill(used_.begin(), used_.end(), 0);
    std::fill(parent_.begin(), parent_.end(), -1);
    for (int i = 0; i < k_; ++i) base_[i] = i;
    std::vector<int> queue{root};
    used_[root] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int to : adj_[v]) {
        if (base_[v] == base_[to] || match[v] == to) continue;
        if (to == root || (match[to] != -1 && parent_[match[to]] != -1)) {
          int cur = lca(v, to);
          std::fill(blossom_.begin(), blossom_.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < k_; ++i) {
            if (!blossom_[base_[i]]) continue;
            base_[i] = cur;
            if (!used_[i]) {
              used_[i] = 1;
              queue.push_back(i);
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (match[to] == -1) return to;
          used_[match[to]] = 1;
          queue.push_back(match[to]);
        }
      }
    }
    return -1;
  }

  // Flips the path ending at `end` into `match`.
  void augment(int end, std::vector<int>& match) const {
    for (int v = end; v != -1;) {
      int pv = parent_[v], ppv = match[pv];
      match[v] = pv;
      match[pv] = v;
      v = ppv;
    }
  }

private:
  int lca(int a, int b) {
    const auto& match = *match_;
    std::vector<char> seen(k_, 0);
    for (;;) {
      a = base_[a];
      seen[a] = 1;
      if (match[a] == -1) break;
      a = parent_[match[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[match[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    const auto& match = *match_;
    while (base_[v] != b) {
      blossom_[base_[v]] = blossom_[base_[match[v]]] = 1;
      parent_[v] = child;
      child = match[v];
      v = parent_[match[v]];
    }
  }

  const std::vector<std::vector<int>>& adj_;
  int k_;
  std::vector<int> base_, parent_;
  std::vector<char> used_, blossom_;
  const std::vector<int>* match_ = nullptr;
};

} // namespace detail

/// UR test for arbitrary graphs: M is UR iff for no edge xy of M does
/// g[V(M)] - xy have a perfect matching, i.e. iff M - xy has no x-y
/// augmenting path there. One blossom search per matched edge.
inline UrCheck is_ur_general(const Graph& g, const Matching& m) {
  const std::size_t n = g.vertex_count();
  const auto mate_m = m.mates(n);
  const auto covered = m.covered();
  const int k = static_cast<int>(covered.size());
  std::vector<int> local(n, -1);
  for (int i = 0; i < k; ++i) local[covered[i]] = i;
  std::vector<std::vector<int>> adj(k);
  for (int i = 0; i < k; ++i) {
    for (Vertex w : g.neighbors(covered[i])) {
      if (local[w] != -1) adj[i].push_back(local[w]);
    }
  }
  std::vector<int> base_match(k, -1);
  for (int i = 0; i < k; ++i) base_match[i] = local[mate_m[covered[i]]];

  for (const auto& banned : m.edges()) {
    const int x = local[banned.u], y = local[banned.v];
    // Drop the banned edge from the local graph for this search.
    auto adj_x = adj[x], adj_y = adj[y];
    std::erase(adj[x], y);
    std::erase(adj[y], x);
    std::vector<int> match = base_match;
    match[x] = match[y] = -1;
    detail::BlossomSearch search(adj);
    int end = search.find_path(x, match);
    adj[x] = std::move(adj_x);
    adj[y] = std::move(adj_y);
    if (end == -1) continue;
    search.augment(end, match);
    // M xor M' is a union of alternating cycles; walk the one through banned.
    UrCheck r{false, {}};
    Vertex start = banned.u, cur = banned.u;
    bool use_m = true;
    do {
      r.witness.push_back(cur);
      cur = use_m ? mate_m[cur] : covered[match[local[cur]]];
      use_m = !use_m;
    } while (cur != start);
    return r;
  }
  return {};
}

/// Dispatches to the digraph test when g is bipartite.
inline UrCheck is_ur(const Graph& g, const Matching& m) {
  if (auto b = bipartition(g)) return is_ur_bipartite(g, *b.parts, m);
  return is_ur_general(g, m);
}

/// True iff g[V(M)] has exactly |M| edges.
inline bool is_induced_matching(const Graph& g, const Matching& m) {
  const auto mate = m.mates(g.vertex_count());
  for (const auto& e : m.edges()) {
    for (Vertex x : {e.u, e.v}) {
      for (Vertex y : g.neighbors(x)) {
        if (mate[y] != no_vertex && y != mate[x]) return false;
      }
    }
  }
  return true;
}

/// Maximum matching of a bipartite graph (Hopcroft-Karp).
inline Matching maximum_matching_bipartite(const Graph& g, const Bipartition& parts) {
  const std::size_t n = g.vertex_count();
  constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max();
  std::vector<Vertex> mate(n, no_vertex);
  std::vector<std::uint32_t> dist(n, inf);
  std::vector<Vertex> a_side = parts.side_a();
  std::vector<Vertex> queue;

  // Cheap greedy start.
  for (Vertex a : a_side) {
    for (Vertex b : g.neighbors(a)) {
      if (mate[b] == no_vertex) {
        mate[a] = b;
        mate[b] = a;
        break;
      }
    }
  }

  auto bfs = [&]() {
    queue.clear();
    bool found = false;
    for (Vertex a : a_side) {
      if (mate[a] == no_vertex) {
        dist[a] = 0;
        queue.push_back(a);
      } else {
        dist[a] = inf;
      }
    }
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex a = queue[h];
      for (Vertex b : g.neighbors(a)) {
        Vertex a2 = mate[b];
        if (a2 == no_vertex) {
          found = true;
        } else if (dist[a2] == inf) {
          dist[a2] = dist[a] + 1;
          queue.push_back(a2);
        }
      }
    }
    return found;
  };

  // Iterative DFS along layered arcs.
  std::vector<std::size_t> it(n, 0);
  auto dfs = [&](Vertex root) {
    std::vector<Vertex> path{root};
    while (!path.empty()) {
      Vertex a = path.back();
      auto nb = g.neighbors(a);
      bool advanced = false;
      while (it[a] < nb.size()) {
        Vertex b = nb[it[a]++];
        Vertex a2 = mate[b];
        if (a2 == no_vertex) {
          // Augment along path; path[i] gets the b chosen from it.
          Vertex cur_b = b;
          for (std::size_t i = path.size(); i-- > 0;) {
            Vertex x = path[i];
            Vertex prev = mate[x];
            mate[x] = cur_b;
            mate[cur_b] = x;
            cur_b = prev;
          }
          return true;
        }
        if (dist[a2] == dist[a] + 1) {
          path.push_back(a2);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        dist[a] = inf;
        path.pop_back();
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (Vertex a : a_side) {
      if (mate[a] == no_vertex) dfs(a);
    }
  }
  return matching_from_mates(mate);
}

} // namespace urm
