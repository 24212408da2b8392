#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "urm/error.hpp"
#include "urm/graph.hpp"
#include "urm/matching.hpp"

namespace urm {

/// Limits for the exponential solvers. Exceeding any of them raises
/// budget_exceeded; no solver silently returns an approximation.
struct OracleBudget {
  std::size_t max_vertices = 20;
  std::size_t max_edges = 30;
  std::chrono::milliseconds time_limit{60'000};

  /// Defaults overridden by URM_ORACLE_MAX_VERTICES, URM_ORACLE_MAX_EDGES and
  /// URM_ORACLE_TIME_LIMIT (seconds).
  static OracleBudget from_env() {
    OracleBudget b;
    auto read = [](const char* name, std::size_t fallback) -> std::size_t {
      const char* v = std::getenv(name);
      if (!v || !*v) return fallback;
      char* end = nullptr;
      unsigned long long x = std::strtoull(v, &end, 10);
      if (*end != '\0' || x == 0) {
        throw precondition_error(std::string(name) + " must be a positive integer");
      }
      return static_cast<std::size_t>(x);
    };
    b.max_vertices = read("URM_ORACLE_MAX_VERTICES", b.max_vertices);
    b.max_edges = read("URM_ORACLE_MAX_EDGES", b.max_edges);
    b.time_limit = std::chrono::seconds(
        read("URM_ORACLE_TIME_LIMIT", static_cast<std::size_t>(b.time_limit.count() / 1000)));
    return b;
  }
};

namespace detail {

class Deadline {
public:
  explicit Deadline(std::chrono::milliseconds limit)
      : end_(std::chrono::steady_clock::now() + limit) {}

  void tick() {
    if ((++count_ & 0x3FF) == 1 && std::chrono::steady_clock::now() > end_) {
      throw budget_exceeded("oracle time limit exceeded");
    }
  }

private:
  std::chrono::steady_clock::time_point end_;
  std::uint64_t count_ = 0;
};

inline void check_size(const Graph& g, const OracleBudget& b, const char* what) {
  if (g.vertex_count() > b.max_vertices || g.edge_count() > b.max_edges) {
    throw budget_exceeded(std::string(what) + ": graph with " + std::to_string(g.vertex_count()) +
                          " vertices and " + std::to_string(g.edge_count()) +
                          " edges exceeds the budget (" + std::to_string(b.max_vertices) + ", " +
                          std::to_string(b.max_edges) + ")");
  }
}

// Edges ordered by descending degree sum, ties lexicographic.
inline std::vector<Edge> branching_order(const Graph& g) {
  std::vector<Edge> es = g.edges();
  std::stable_sort(es.begin(), es.end(), [&](const Edge& x, const Edge& y) {
    return g.degree(x.u) + g.degree(x.v) > g.degree(y.u) + g.degree(y.v);
  });
  return es;
}

inline std::size_t nu_general(const Graph& g, std::vector<char>& used, Vertex from, Deadline& dl) {
  dl.tick();
  while (from < g.vertex_count() && used[from]) ++from;
  if (from >= g.vertex_count()) return 0;
  used[from] = 1;
  std::size_t best = nu_general(g, used, from + 1, dl);
  for (Vertex y : g.neighbors(from)) {
    if (used[y]) continue;
    used[y] = 1;
    best = std::max(best, 1 + nu_general(g, used, from + 1, dl));
    used[y] = 0;
  }
  used[from] = 0;
  return best;
}

} // namespace detail

/// Matching number. Polynomial on bipartite input; exhaustive otherwise.
inline std::size_t nu_exact(const Graph& g, const OracleBudget& budget = {}) {
  if (auto b = bipartition(g)) return maximum_matching_bipartite(g, *b.parts).size();
  detail::check_size(g, budget, "nu_exact");
  detail::Deadline dl(budget.time_limit);
  std::vector<char> used(g.vertex_count(), 0);
  return detail::nu_general(g, used, 0, dl);
}

struct OracleMatching {
  std::size_t value = 0;
  Matching witness;
};

/// Maximum UR matching by include/exclude branch-and-bound. UR is monotone
/// under taking subsets, so a non-UR partial matching prunes its subtree.
inline OracleMatching nu_ur_exact(const Graph& g, const OracleBudget& budget = {}) {
  detail::check_size(g, budget, "nu_ur_exact");
  detail::Deadline dl(budget.time_limit);
  auto bp = bipartition(g);
  const auto order = detail::branching_order(g);
  const std::size_t upper = nu_exact(g, budget);

  std::vector<char> used(g.vertex_count(), 0);
  std::vector<Edge> cur;
  OracleMatching best;
  std::size_t free_vertices = g.vertex_count();

  auto is_ur_now = [&]() {
    Matching m(cur);
    return bp ? static_cast<bool>(is_ur_bipartite(g, *bp.parts, m))
              : static_cast<bool>(is_ur_general(g, m));
  };

  auto rec = [&](auto&& self, std::size_t i) -> void {
    dl.tick();
    if (best.value == upper) return;
    if (cur.size() > best.value) {
      best.value = cur.size();
      best.witness = Matching(cur);
    }
    if (i == order.size()) return;
    std::size_t bound = cur.size() + std::min(order.size() - i, free_vertices / 2);
    if (bound <= best.value) return;
    const Edge e = order[i];
    if (!used[e.u] && !used[e.v]) {
      cur.push_back(e);
      if (is_ur_now()) {
        used[e.u] = used[e.v] = 1;
        free_vertices -= 2;
        self(self, i + 1);
        used[e.u] = used[e.v] = 0;
        free_vertices += 2;
      }
      cur.pop_back();
    }
    self(self, i + 1);
  };
  rec(rec, 0);
  return best;
}

/// Maximum induced matching by include/exclude branch-and-bound.
inline OracleMatching nu_s_exact(const Graph& g, const OracleBudget& budget = {}) {
  detail::check_size(g, budget, "nu_s_exact");
  detail::Deadline dl(budget.time_limit);
  const auto order = detail::branching_order(g);
  // blocked[v] > 0: v is covered or adjacent to a covered vertex.
  std::vector<int> blocked(g.vertex_count(), 0);
  std::vector<Edge> cur;
  OracleMatching best;

  auto touch = [&](const Edge& e, int delta) {
    for (Vertex x : {e.u, e.v}) {
      blocked[x] += delta;
      for (Vertex y : g.neighbors(x)) blocked[y] += delta;
    }
  };

  auto rec = [&](auto&& self, std::size_t i) -> void {
    dl.tick();
    if (cur.size() > best.value) {
      best.value = cur.size();
      best.witness = Matching(cur);
    }
    if (i == order.size() || cur.size() + (order.size() - i) <= best.value) return;
    const Edge e = order[i];
    if (!blocked[e.u] && !blocked[e.v]) {
      cur.push_back(e);
      touch(e, 1);
      self(self, i + 1);
      touch(e, -1);
      cur.pop_back();
    }
    self(self, i + 1);
  };
  rec(rec, 0);
  return best;
}

/// A partition of edges into classes; color[i] is the class of edges[i].
struct OracleColoring {
  std::size_t value = 0;
  std::vector<Edge> edges;
  std::vector<std::size_t> color;  // 0-based
};

namespace detail {

// Assigns items (edges) to at most k classes so every class is a UR
// matching. First-use symmetry breaking: a new class is opened only as the next index.
class UrPartitioner {
public:
  UrPartitioner(const Graph& g, std::vector<Edge> items, Deadline& dl)
      : g_(g), bp_(bipartition(g)), items_(std::move(items)), dl_(dl) {}

  bool solve(std::size_t k) {
    k_ = k;
    classes_.assign(k, {});
    color_.assign(items_.size(), 0);
    occupied_.assign(k, std::vector<char>(g_.vertex_count(), 0));
    return rec(0, 0);
  }

  const std::vector<std::size_t>& color() const { return color_; }
  const std::vector<Edge>& items() const { return items_; }

private:
  bool class_ok(std::size_t c) {
    Matching m(classes_[c]);
    return bp_ ? static_cast<bool>(is_ur_bipartite(g_, *bp_.parts, m))
               : static_cast<bool>(is_ur_general(g_, m));
  }

  bool rec(std::size_t i, std::size_t opened) {
    dl_.tick();
    if (i == items_.size()) return true;
    // Each remaining item needs a class; cannot fail on count alone.
    const Edge e = items_[i];
    std::size_t limit = std::min(k_, opened + 1);
    for (std::size_t c = 0; c < limit; ++c) {
      if (occupied_[c][e.u] || occupied_[c][e.v]) continue;
      classes_[c].push_back(e);
      if (class_ok(c)) {
        occupied_[c][e.u] = occupied_[c][e.v] = 1;
        color_[i] = c;
        if (rec(i + 1, std::max(opened, c + 1))) return true;
        occupied_[c][e.u] = occupied_[c][e.v] = 0;
      }
      classes_[c].pop_back();
    }
    return false;
  }

  const Graph& g_;
  BipartitionResult bp_;
  std::vector<Edge> items_;
  Deadline& dl_;
  std::size_t k_ = 0;
  std::vector<std::vector<Edge>> classes_;
  std::vector<std::size_t> color_;
  std::vector<std::vector<char>> occupied_;
};

// Edges in BFS order from the highest-degree vertex so that conflicting
// edges are decided close together. An edge is emitted when its second
// endpoint is dequeued.
inline std::vector<Edge> local_edge_order(const Graph& g) {
  std::vector<Edge> out;
  std::vector<Vertex> verts(g.vertex_count());
  std::iota(verts.begin(), verts.end(), 0);
  std::stable_sort(verts.begin(), verts.end(),
                   [&](Vertex x, Vertex y) { return g.degree(x) > g.degree(y); });
  std::vector<char> seen(g.vertex_count(), 0), placed(g.vertex_count(), 0);
  std::vector<Vertex> queue;
  for (Vertex s : verts) {
    if (seen[s]) continue;
    seen[s] = 1;
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Vertex x = queue[h];
      placed[x] = 1;
      for (Vertex y : g.neighbors(x)) {
        if (placed[y]) {
          out.push_back(make_edge(x, y));
        } else if (!seen[y]) {
          seen[y] = 1;
          queue.push_back(y);
        }
      }
    }
  }
  return out;
}

} // namespace detail

/// Uniquely restricted chromatic index. Tries k upward from
/// max(Δ, ceil(m / ν_ur)).
inline OracleColoring chi_ur_exact(const Graph& g, const OracleBudget& budget = {}) {
  detail::check_size(g, budget, "chi_ur_exact");
  OracleColoring out;
  if (g.edge_count() == 0) return out;
  std::size_t nu_ur = nu_ur_exact(g, budget).value;
  std::size_t lower = std::max(g.max_degree(), (g.edge_count() + nu_ur - 1) / nu_ur);
  detail::Deadline dl(budget.time_limit);
  detail::UrPartitioner part(g, detail::local_edge_order(g), dl);
  for (std::size_t k = lower; k <= g.edge_count(); ++k) {
    if (part.solve(k)) {
      out.value = k;
      out.edges = part.items();
      out.color = part.color();
      return out;
    }
  }
  throw soundness_error("chi_ur_exact: every edge in its own class must succeed");
}

struct OraclePartition {
  std::size_t value = 0;
  std::vector<Matching> parts;
};

/// Fewest UR matchings of g whose disjoint union is m.
inline OraclePartition min_ur_partition_of_matching(const Graph& g, const Matching& m,
                                                    const OracleBudget& budget = {}) {
  require_matching(g, m);
  if (m.size() > budget.max_edges) {
    throw budget_exceeded("min_ur_partition_of_matching: |M| = " + std::to_string(m.size()) +
                          " exceeds the edge budget " + std::to_string(budget.max_edges));
  }
  OraclePartition out;
  if (m.empty()) return out;
  detail::Deadline dl(budget.time_limit);
  detail::UrPartitioner part(g, m.edges(), dl);
  for (std::size_t k = 1; k <= m.size(); ++k) {
    if (!part.solve(k)) continue;
    out.value = k;
    std::vector<std::vector<Edge>> classes(k);
    for (std::size_t i = 0; i < part.items().size(); ++i) {
      classes[part.color()[i]].push_back(part.items()[i]);
    }
    for (auto& c : classes) out.parts.emplace_back(std::move(c));
    return out;
  }
  throw soundness_error("min_ur_partition_of_matching: singletons must succeed");
}

} // namespace urm
