#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "urm/error.hpp"

namespace urm {

using Vertex = std::uint32_t;

/// Undirected edge, always stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;

  bool touches(Vertex x) const noexcept { return u == x || v == x; }
  Vertex other(Vertex x) const noexcept { return x == u ? v : u; }
};

inline Edge make_edge(Vertex a, Vertex b) noexcept {
  return a < b ? Edge{a, b} : Edge{b, a};
}

/// Finite simple undirected graph on vertices 0..n-1.
///
/// Immutable after construction. Adjacency is stored in CSR form with every
/// neighbor list sorted ascending; the edge list is sorted lexicographically.
class Graph {
public:
  Graph() = default;

  /// Builds a graph from an edge list. Edges may be given in any order and
  /// orientation. Throws precondition_error on loops, duplicates, or ids >= n.
  Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
    for (auto& e : edges) {
      if (e.u == e.v) {
        throw precondition_error("loop at vertex " + std::to_string(e.u));
      }
      if (e.u >= n || e.v >= n) {
        throw precondition_error("edge " + std::to_string(e.u) + " " + std::to_string(e.v) +
                                 " references a vertex >= n = " + std::to_string(n));
      }
      e = make_edge(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
      throw precondition_error("duplicate edge " + std::to_string(dup->u) + " " +
                               std::to_string(dup->v));
    }
    edges_ = std::move(edges);

    offsets_.assign(n_ + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n_; ++i) {
      offsets_[i + 1] += offsets_[i];
    }
    targets_.resize(2 * edges_.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      targets_[fill[e.u]++] = e.v;
      targets_[fill[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
      max_degree_ = std::max(max_degree_, offsets_[i + 1] - offsets_[i]);
    }
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t max_degree() const noexcept { return max_degree_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex a, Vertex b) const noexcept {
    if (a >= n_ || b >= n_) return false;
    if (degree(a) > degree(b)) std::swap(a, b);
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  bool has_edge(const Edge& e) const noexcept { return has_edge(e.u, e.v); }

  std::size_t min_degree() const noexcept {
    if (n_ == 0) return 0;
    std::size_t lo = max_degree_;
    for (Vertex v = 0; v < n_; ++v) lo = std::min(lo, degree(v));
    return lo;
  }

  bool is_regular() const noexcept { return n_ > 0 && min_degree() == max_degree_; }

  friend bool operator==(const Graph& x, const Graph& y) {
    return x.n_ == y.n_ && x.edges_ == y.edges_;
  }

private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> targets_;
  std::size_t max_degree_ = 0;
};

/// An induced subgraph together with the ids its vertices had in the parent.
struct Subgraph {
  Graph graph;
  std::vector<Vertex> original;  // local id -> parent id
};

/// Induced subgraph on `keep`. Local ids follow the order of `keep`.
inline Subgraph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  std::vector<std::int64_t> local(g.vertex_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<std::int64_t>(i);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    if (local[e.u] >= 0 && local[e.v] >= 0) {
      edges.push_back(make_edge(static_cast<Vertex>(local[e.u]), static_cast<Vertex>(local[e.v])));
    }
  }
  return {Graph(keep.size(), std::move(edges)), std::vector<Vertex>(keep.begin(), keep.end())};
}

/// G - v, keeping the surviving vertices in ascending order.
inline Subgraph remove_vertex(const Graph& g, Vertex v) {
  std::vector<Vertex> keep;
  keep.reserve(g.vertex_count());
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    if (x != v) keep.push_back(x);
  }
  return induced_subgraph(g, keep);
}

/// Connected components; each sorted ascending, components ordered by their
/// smallest vertex.
inline std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
  std::vector<std::vector<Vertex>> out;
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (seen[s]) continue;
    std::vector<Vertex> comp;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex x = stack.back();
      stack.pop_back();
      comp.push_back(x);
      for (Vertex y : g.neighbors(x)) {
        if (!seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

inline bool is_connected(const Graph& g) {
  return g.vertex_count() <= 1 || connected_components(g).size() == 1;
}

// ---------------------------------------------------------------------------
// Bipartition

enum class Side : std::uint8_t { A = 0, B = 1 };

inline Side opposite(Side s) noexcept { return s == Side::A ? Side::B : Side::A; }

/// A proper 2-coloring of the vertices. Every edge joins side A to side B.
class Bipartition {
public:
  Bipartition() = default;
  explicit Bipartition(std::vector<Side> side) : side_(std::move(side)) {}

  Side side(Vertex v) const noexcept { return side_[v]; }
  bool in_a(Vertex v) const noexcept { return side_[v] == Side::A; }
  bool in_b(Vertex v) const noexcept { return side_[v] == Side::B; }
  std::size_t size() const noexcept { return side_.size(); }

  std::vector<Vertex> side_a() const { return collect(Side::A); }
  std::vector<Vertex> side_b() const { return collect(Side::B); }

  /// Same partition with the roles of A and B exchanged.
  Bipartition swapped() const {
    std::vector<Side> s(side_);
    for (auto& x : s) x = opposite(x);
    return Bipartition(std::move(s));
  }

  /// Restriction to the vertices of a subgraph.
  Bipartition restricted(std::span<const Vertex> original) const {
    std::vector<Side> s;
    s.reserve(original.size());
    for (Vertex v : original) s.push_back(side_[v]);
    return Bipartition(std::move(s));
  }

  friend bool operator==(const Bipartition&, const Bipartition&) = default;

private:
  std::vector<Vertex> collect(Side which) const {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < side_.size(); ++v) {
      if (side_[v] == which) out.push_back(v);
    }
    return out;
  }

  std::vector<Side> side_;
};

/// Result of a bipartiteness test: either a partition or an odd cycle.
struct BipartitionResult {
  std::optional<Bipartition> parts;
  std::vector<Vertex> odd_cycle;  // cyclic vertex sequence, empty when bipartite

  explicit operator bool() const noexcept { return parts.has_value(); }
};

/// BFS 2-coloring. The lowest-id vertex of each component lands on side A.
inline BipartitionResult bipartition(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<Side> side(n, Side::A);
  std::vector<std::int64_t> parent(n, -1);
  std::vector<std::size_t> depth(n, 0);
  std::vector<char> seen(n, 0);
  std::vector<Vertex> queue;
  for (Vertex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    side[s] = Side::A;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Vertex x = queue[head];
      for (Vertex y : g.neighbors(x)) {
        if (!seen[y]) {
          seen[y] = 1;
          side[y] = opposite(side[x]);
          parent[y] = x;
          depth[y] = depth[x] + 1;
          queue.push_back(y);
        } else if (side[y] == side[x]) {
          // Odd cycle: walk both tree paths up to their meeting point.
          std::vector<Vertex> left{x}, right{y};
          Vertex p = x, q = y;
          while (depth[p] > depth[q]) left.push_back(p = static_cast<Vertex>(parent[p]));
          while (depth[q] > depth[p]) right.push_back(q = static_cast<Vertex>(parent[q]));
          while (p != q) {
            left.push_back(p = static_cast<Vertex>(parent[p]));
            right.push_back(q = static_cast<Vertex>(parent[q]));
          }
          right.pop_back();
          left.insert(left.end(), right.rbegin(), right.rend());
          return {std::nullopt, std::move(left)};
        }
      }
    }
  }
  return {Bipartition(std::move(side)), {}};
}

inline Bipartition require_bipartition(const Graph& g) {
  auto r = bipartition(g);
  if (!r) throw not_bipartite(std::move(r.odd_cycle));
  return std::move(*r.parts);
}

inline bool is_bipartite(const Graph& g) { return static_cast<bool>(bipartition(g)); }

// ---------------------------------------------------------------------------
// Structural queries

/// All unordered pairs (u, v), u < v, with N(u) = N(v).
inline std::vector<std::pair<Vertex, Vertex>> find_twins(const Graph& g) {
  std::vector<Vertex> order(g.vertex_count());
  for (Vertex v = 0; v < order.size(); ++v) order[v] = v;
  auto same = [&](Vertex a, Vertex b) {
    auto x = g.neighbors(a), y = g.neighbors(b);
    return std::equal(x.begin(), x.end(), y.begin(), y.end());
  };
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    auto x = g.neighbors(a), y = g.neighbors(b);
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  });
  std::vector<std::pair<Vertex, Vertex>> out;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && same(order[i], order[j])) ++j;
    for (std::size_t p = i; p < j; ++p) {
      for (std::size_t q = p + 1; q < j; ++q) {
        out.emplace_back(std::min(order[p], order[q]), std::max(order[p], order[q]));
      }
    }
    i = j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

enum class C4Kind : std::uint8_t {
  c4_1,  // A-side degrees (3, 2)
  c4_2,  // A-side degrees (3, 3)
  twin,  // A-side degrees (2, 2); implies a twin pair
};

/// A 4-cycle a[0] b[0] a[1] b[1] with a on side A. For C4_1, a[0] is the
/// degree-3 vertex; otherwise a[0] < a[1]. Always b[0] < b[1].
struct C4Instance {
  std::array<Vertex, 2> a{};
  std::array<Vertex, 2> b{};
  C4Kind kind = C4Kind::c4_2;

  friend bool operator==(const C4Instance&, const C4Instance&) = default;
};

/// Every 4-cycle of a bipartite graph with maximum degree at most 3, each
/// listed once, classified by the G-degrees of its A-side vertices. Runs in
/// O(sum of d(v)^2). Ordered by (min a, other a, b pair).
inline std::vector<C4Instance> classify_c4s(const Graph& g, const Bipartition& parts) {
  if (g.max_degree() > 3) throw precondition_error("classify_c4s requires maximum degree <= 3");
  std::vector<std::tuple<Vertex, Vertex, Vertex>> wedges;  // (a_lo, a_hi, b)
  for (Vertex b = 0; b < g.vertex_count(); ++b) {
    if (!parts.in_b(b)) continue;
    auto nb = g.neighbors(b);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) wedges.emplace_back(nb[i], nb[j], b);
    }
  }
  std::sort(wedges.begin(), wedges.end());
  std::vector<C4Instance> out;
  for (std::size_t i = 0; i < wedges.size();) {
    std::size_t j = i;
    while (j < wedges.size() && std::get<0>(wedges[j]) == std::get<0>(wedges[i]) &&
           std::get<1>(wedges[j]) == std::get<1>(wedges[i])) {
      ++j;
    }
    for (std::size_t p = i; p < j; ++p) {
      for (std::size_t q = p + 1; q < j; ++q) {
        auto [lo, hi, b1] = wedges[p];
        Vertex b2 = std::get<2>(wedges[q]);
        C4Instance c;
        c.b = {std::min(b1, b2), std::max(b1, b2)};
        std::size_t dlo = g.degree(lo), dhi = g.degree(hi);
        if (dlo == 2 && dhi == 2) {
          c.kind = C4Kind::twin;
          c.a = {lo, hi};
        } else if (dlo == 3 && dhi == 3) {
          c.kind = C4Kind::c4_2;
          c.a = {lo, hi};
        } else {
          c.kind = C4Kind::c4_1;
          c.a = dlo == 3 ? std::array<Vertex, 2>{lo, hi} : std::array<Vertex, 2>{hi, lo};
        }
        out.push_back(c);
      }
    }
    i = j;
  }
  return out;
}

/// True if the graph has no 4-cycle (any maximum degree).
inline bool is_c4_free(const Graph& g) {
  // Two vertices sharing two common neighbors close a 4-cycle.
  std::vector<std::int64_t> mark(g.vertex_count(), -1);
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    for (Vertex y : g.neighbors(x)) {
      for (Vertex z : g.neighbors(y)) {
        if (z == x) continue;
        if (mark[z] == static_cast<std::int64_t>(x)) return false;
        mark[z] = x;
      }
    }
  }
  return true;
}

} // namespace urm
