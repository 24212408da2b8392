#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urm/approx_common.hpp"
#include "urm/error.hpp"
#include "urm/graph.hpp"
#include "urm/io.hpp"
#include "urm/matching.hpp"

namespace urm {

/// Edge coloring indexed like g.edges(): color[i] belongs to edges[i].
/// Colors are 1-based, 0 marks an uncolored edge.
struct EdgeColoring {
  std::vector<Edge> edges;
  std::vector<std::size_t> color;

  std::size_t max_color() const {
    return color.empty() ? 0 : *std::max_element(color.begin(), color.end());
  }

  /// Number of distinct colors in use.
  std::size_t color_count() const {
    std::vector<std::size_t> c;
    for (auto x : color) {
      if (x != 0) c.push_back(x);
    }
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }

  /// classes()[c - 1] lists the edges of color c.
  std::vector<std::vector<Edge>> classes() const {
    std::vector<std::vector<Edge>> out(max_color());
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (color[i] != 0) out[color[i] - 1].push_back(edges[i]);
    }
    return out;
  }

  /// Renumbers colors to 1..k keeping their relative order.
  void compact() {
    std::vector<std::size_t> used;
    for (auto x : color) {
      if (x != 0) used.push_back(x);
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    for (auto& x : color) {
      if (x != 0) x = static_cast<std::size_t>(std::lower_bound(used.begin(), used.end(), x) - used.begin()) + 1;
    }
  }
};

inline EdgeColoring blank_coloring(const Graph& g) {
  EdgeColoring c;
  c.edges = g.edges();
  c.color.assign(c.edges.size(), 0);
  return c;
}

/// Position of e in g.edges(); throws if e is not an edge of g.
inline std::size_t edge_index(const Graph& g, const Edge& e) {
  const auto& es = g.edges();
  auto it = std::lower_bound(es.begin(), es.end(), e);
  if (it == es.end() || *it != e) {
    throw precondition_error("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is not in the graph");
  }
  return static_cast<std::size_t>(it - es.begin());
}

struct ColoringCheck {
  bool complete = false;
  bool proper = false;
  bool ur = false;
  std::size_t bad_color = 0;
  std::string reason;

  explicit operator bool() const noexcept { return complete && proper && ur; }
};

/// Every edge colored, every class a matching, every class UR in g.
inline ColoringCheck check_ur_coloring(const Graph& g, const EdgeColoring& c) {
  ColoringCheck out;
  if (c.edges != g.edges() || c.color.size() != c.edges.size()) {
    out.reason = "coloring does not match the edge set";
    return out;
  }
  for (std::size_t i = 0; i < c.color.size(); ++i) {
    if (c.color[i] == 0) {
      out.reason = "edge " + std::to_string(c.edges[i].u) + "-" + std::to_string(c.edges[i].v) + " is uncolored";
      return out;
    }
  }
  out.complete = true;
  auto cls = c.classes();
  for (std::size_t k = 0; k < cls.size(); ++k) {
    if (!is_matching(g, cls[k])) {
      out.bad_color = k + 1;
      out.reason = "color " + std::to_string(k + 1) + " is not a matching";
      return out;
    }
  }
  out.proper = true;
  auto parts = bipartition(g);
  for (std::size_t k = 0; k < cls.size(); ++k) {
    Matching m(cls[k]);
    bool ok = parts ? static_cast<bool>(is_ur_bipartite(g, *parts.parts, m))
                    : static_cast<bool>(is_ur_general(g, m));
    if (!ok) {
      out.bad_color = k + 1;
      out.reason = "color " + std::to_string(k + 1) + " is not uniquely restricted";
      return out;
    }
  }
  out.ur = true;
  return out;
}

inline std::vector<Vertex> identity_order(std::size_t n) {
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  return order;
}

inline std::vector<Vertex> random_order(std::size_t n, std::uint64_t seed) {
  auto order = identity_order(n);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

/// Vertex-by-vertex greedy: the forward edges of u_i get distinct colors,
/// each the smallest not already present on an edge at a neighbor of u_i.
inline EdgeColoring greedy_coloring(const Graph& g, std::span<const Vertex> order) {
  const std::size_t n = g.vertex_count();
  if (order.size() != n) throw precondition_error("greedy_coloring: order is not a permutation of the vertices");
  std::vector<std::size_t> pos(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order[i] >= n || pos[order[i]] != n) {
      throw precondition_error("greedy_coloring: order is not a permutation of the vertices");
    }
    pos[order[i]] = i;
  }
  EdgeColoring c = blank_coloring(g);
  std::vector<std::vector<std::size_t>> at(n);  // colors already on edges at v
  std::vector<std::size_t> blocked;             // stamp per color
  std::size_t stamp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vertex u = order[i];
    ++stamp;
    auto block = [&](std::size_t col) {
      if (blocked.size() <= col) blocked.resize(col + 1, 0);
      blocked[col] = stamp;
    };
    for (Vertex w : g.neighbors(u)) {
      for (auto col : at[w]) block(col);
    }
    std::vector<Vertex> fwd;
    for (Vertex w : g.neighbors(u)) {
      if (pos[w] > i) fwd.push_back(w);
    }
    std::sort(fwd.begin(), fwd.end(), [&](Vertex x, Vertex y) { return pos[x] < pos[y]; });
    std::size_t next = 1;
    for (Vertex w : fwd) {
      while (next < blocked.size() && blocked[next] == stamp) ++next;
      c.color[edge_index(g, make_edge(u, w))] = next;
      at[u].push_back(next);
      at[w].push_back(next);
      block(next);
    }
  }
  return c;
}

inline EdgeColoring greedy_coloring(const Graph& g) {
  auto order = identity_order(g.vertex_count());
  return greedy_coloring(g, order);
}

struct ImproveOptions {
  /// Keep eliminating lower colors once the count is below Δ².
  bool opportunistic = true;
  TraceSink trace;
};

namespace detail {

class Recolorer {
public:
  Recolorer(const Graph& g, EdgeColoring c) : g_(g), c_(std::move(c)), bp_(bipartition(g)) {
    for (std::size_t i = 0; i < c_.edges.size(); ++i) {
      if (cls_.size() < c_.color[i] + 1) cls_.resize(c_.color[i] + 1);
      cls_[c_.color[i]].push_back(i);
    }
  }

  const EdgeColoring& coloring() const { return c_; }
  std::size_t class_size(std::size_t col) const { return col < cls_.size() ? cls_[col].size() : 0; }
  std::vector<std::size_t> members(std::size_t col) const { return col < cls_.size() ? cls_[col] : std::vector<std::size_t>{}; }
  std::size_t color_of(std::size_t e) const { return c_.color[e]; }

  // Applies all changes; keeps them iff every touched class stays a UR matching.
  bool attempt(const std::vector<std::pair<std::size_t, std::size_t>>& changes) {
    std::vector<std::pair<std::size_t, std::size_t>> undo;
    std::vector<std::size_t> touched;
    for (auto [e, col] : changes) {
      undo.emplace_back(e, c_.color[e]);
      move(e, col);
      touched.push_back(col);
    }
    bool ok = true;
    for (auto col : touched) {
      if (!class_ok(col)) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      for (auto it = undo.rbegin(); it != undo.rend(); ++it) move(it->first, it->second);
    }
    return ok;
  }

private:
  void move(std::size_t e, std::size_t col) {
    auto& from = cls_[c_.color[e]];
    from.erase(std::find(from.begin(), from.end(), e));
    if (cls_.size() < col + 1) cls_.resize(col + 1);
    cls_[col].push_back(e);
    c_.color[e] = col;
  }

  bool class_ok(std::size_t col) const {
    std::vector<Edge> es;
    for (auto i : cls_[col]) es.push_back(c_.edges[i]);
    if (!is_matching(g_, es)) return false;
    Matching m(std::move(es));
    return bp_ ? static_cast<bool>(is_ur_bipartite(g_, *bp_.parts, m)) : static_cast<bool>(is_ur_general(g_, m));
  }

  const Graph& g_;
  EdgeColoring c_;
  BipartitionResult bp_;
  std::vector<std::vector<std::size_t>> cls_;
};

// Tries the three manipulations on victim edge e, alternatives in [k-1].
inline bool relieve_edge(const Graph& g, Recolorer& r, std::size_t e, std::size_t k, const TraceSink& trace) {
  const Edge uv = g.edges()[e];
  auto say = [&](const std::string& s) {
    if (trace) trace(s);
  };
  auto name = [](const Edge& x) { return std::to_string(x.u) + "-" + std::to_string(x.v); };
  for (std::size_t a = 1; a < k; ++a) {
    if (r.attempt({{e, a}})) {
      say("manipulation 1: " + name(uv) + " -> " + std::to_string(a));
      return true;
    }
  }
  const std::pair<Vertex, Vertex> orient[2] = {{uv.u, uv.v}, {uv.v, uv.u}};
  for (auto [u, v] : orient) {
    for (Vertex x : g.neighbors(u)) {
      if (x == v) continue;
      for (Vertex y : g.neighbors(x)) {
        if (y == u) continue;
        std::size_t h = edge_index(g, make_edge(x, y));
        std::size_t gamma = r.color_of(h);
        if (gamma == k) continue;
        for (std::size_t a = 1; a < k; ++a) {
          if (a == gamma) continue;
          if (r.attempt({{h, a}, {e, gamma}})) {
            say("manipulation 2: " + name(make_edge(x, y)) + " -> " + std::to_string(a) + ", " + name(uv) +
                " -> " + std::to_string(gamma));
            return true;
          }
        }
      }
    }
  }
  for (auto [u, v] : orient) {
    for (Vertex x : g.neighbors(u)) {
      if (x == v) continue;
      std::size_t f = edge_index(g, make_edge(u, x));
      for (Vertex y : g.neighbors(x)) {
        if (y == u) continue;
        std::size_t h = edge_index(g, make_edge(x, y));
        std::size_t cf = r.color_of(f), ch = r.color_of(h);
        if (cf == k || ch == k || cf == ch) continue;
        if (r.attempt({{e, cf}, {f, ch}, {h, cf}})) {
          say("manipulation 3: " + name(uv) + " -> " + std::to_string(cf) + ", " + name(make_edge(u, x)) + " -> " +
              std::to_string(ch) + ", " + name(make_edge(x, y)) + " -> " + std::to_string(cf));
          return true;
        }
      }
    }
  }
  return false;
}

} // namespace detail

/// Empties the highest color class by local recoloring. Fails with
/// improvement_blocked when a Δ²-coloring cannot be reduced.
inline EdgeColoring improve_coloring(const Graph& g, EdgeColoring c, const ImproveOptions& opt = {}) {
  if (!is_connected(g)) throw precondition_error("improve_coloring: graph is not connected");
  auto check = check_ur_coloring(g, c);
  if (!check) throw precondition_error("improve_coloring: input is not a uniquely restricted coloring: " + check.reason);
  const std::size_t delta = g.max_degree();
  const std::size_t cap = delta * delta;
  c.compact();
  if (c.max_color() > cap) {
    throw precondition_error("improve_coloring: input uses more than " + std::to_string(cap) + " colors");
  }
  detail::Recolorer r(g, std::move(c));
  std::size_t k = r.coloring().max_color();
  while (k >= 1 && (opt.opportunistic || k >= cap)) {
    if (opt.trace) {
      opt.trace("eliminate color " + std::to_string(k) + " (" + std::to_string(r.class_size(k)) + " edges)");
    }
    while (r.class_size(k) > 0) {
      bool moved = false;
      for (auto e : r.members(k)) {
        if (detail::relieve_edge(g, r, e, k, opt.trace)) {
          moved = true;
          break;
        }
      }
      if (!moved) break;
      if (opt.trace) opt.trace("color " + std::to_string(k) + " has " + std::to_string(r.class_size(k)) + " edges");
    }
    if (r.class_size(k) > 0) {
      if (k >= cap) throw improvement_blocked("improve_coloring: no manipulation applies");
      break;
    }
    --k;
  }
  EdgeColoring out = r.coloring();
  out.compact();
  return out;
}

/// Proper edge coloring of a bipartite graph with exactly Δ colors.
inline EdgeColoring bipartite_proper_coloring(const Graph& g) {
  require_bipartition(g);
  const std::size_t n = g.vertex_count(), d = g.max_degree();
  EdgeColoring c = blank_coloring(g);
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> at(n, std::vector<std::size_t>(d, none));  // at[v][col] = edge
  std::vector<std::size_t> col(c.edges.size(), none);
  auto free_at = [&](Vertex v) {
    for (std::size_t x = 0; x < d; ++x) {
      if (at[v][x] == none) return x;
    }
    throw soundness_error("bipartite_proper_coloring: no free color");
  };
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    const auto [u, v] = c.edges[i];
    std::size_t a = free_at(u), b = free_at(v);
    if (at[v][a] != none) {
      // flip the a/b path leaving v on color a; it cannot reach u
      std::vector<std::size_t> path;
      Vertex w = v;
      std::size_t want = a;
      while (at[w][want] != none) {
        std::size_t e = at[w][want];
        path.push_back(e);
        w = c.edges[e].other(w);
        want = want == a ? b : a;
      }
      for (auto e : path) {
        at[c.edges[e].u][col[e]] = none;
        at[c.edges[e].v][col[e]] = none;
      }
      for (auto e : path) {
        col[e] = col[e] == a ? b : a;
        at[c.edges[e].u][col[e]] = e;
        at[c.edges[e].v][col[e]] = e;
      }
    }
    col[i] = a;
    at[u][a] = i;
    at[v][a] = i;
  }
  for (std::size_t i = 0; i < col.size(); ++i) c.color[i] = col[i] + 1;
  return c;
}

struct MatchingPartition {
  std::vector<Matching> parts;
  std::map<std::string, std::size_t> case_counts;
};

namespace detail {

class MatchingSplitter {
public:
  using Colors = std::vector<std::size_t>;  // per vertex: color of its matched edge

  MatchingSplitter(const Graph& g, const Bipartition& parts, const Matching& m, const TraceSink& trace,
                   std::map<std::string, std::size_t>& counts)
      : g_(g), parts_(parts), d_(g.max_degree()), mate_(m.mates(g.vertex_count())), trace_(trace),
        counts_(counts) {}

  // M is perfect on G[s]; colors every matched edge inside s with [Δ-1].
  Colors solve(const std::vector<Vertex>& s) {
    Colors out(g_.vertex_count(), 0);
    for (const auto& comp : components(s)) {
      Colors c = solve_connected(comp);
      for (Vertex v : comp) out[v] = c[v];
    }
    return out;
  }

private:
  std::vector<char> mark(const std::vector<Vertex>& s) const {
    std::vector<char> in(g_.vertex_count(), 0);
    for (Vertex v : s) in[v] = 1;
    return in;
  }

  std::vector<std::vector<Vertex>> components(const std::vector<Vertex>& s) const {
    auto in = mark(s);
    std::vector<char> seen(g_.vertex_count(), 0);
    std::vector<std::vector<Vertex>> out;
    for (Vertex r : s) {
      if (seen[r]) continue;
      std::vector<Vertex> comp{r};
      seen[r] = 1;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (Vertex w : g_.neighbors(comp[i])) {
          if (in[w] && !seen[w]) {
            seen[w] = 1;
            comp.push_back(w);
          }
        }
      }
      out.push_back(std::move(comp));
    }
    return out;
  }

  std::size_t degree_in(Vertex v, const std::vector<char>& in) const {
    std::size_t k = 0;
    for (Vertex w : g_.neighbors(v)) k += in[w] ? 1 : 0;
    return k;
  }

  void note(const std::string& kind, const std::string& line) {
    ++counts_[kind];
    if (trace_) trace_(line);
  }

  Colors solve_connected(const std::vector<Vertex>& comp) {
    auto in = mark(comp);
    std::optional<Vertex> low_a, low_b;
    for (Vertex v : comp) {
      if (degree_in(v, in) >= d_) continue;
      auto& slot = parts_.in_a(v) ? low_a : low_b;
      if (!slot) slot = v;
    }
    if (low_a || low_b) {
      Vertex root = low_a ? *low_a : *low_b;
      note("case (ii)", "case (ii): " + std::to_string(comp.size() / 2) + " edges, root " + std::to_string(root) +
                            "-" + std::to_string(mate_[root]));
      Colors c(g_.vertex_count(), 0);
      std::vector<char> earlier(g_.vertex_count(), 0);
      order_and_color(comp, root, c, earlier);
      return c;
    }
    if (auto c = try_cut(comp)) return *c;
    return regular_triple(comp);
  }

  // Reverse BFS order of the matched edges of comp from root's edge, then
  // greedy with [Δ-1]; `earlier` already marks precolored vertices.
  void order_and_color(const std::vector<Vertex>& comp, Vertex root, Colors& c, std::vector<char>& earlier) {
    auto in = mark(comp);
    std::vector<char> seen(g_.vertex_count(), 0);
    std::vector<Vertex> bfs{root};  // one endpoint per matched edge
    seen[root] = seen[mate_[root]] = 1;
    for (std::size_t i = 0; i < bfs.size(); ++i) {
      for (Vertex end : {bfs[i], mate_[bfs[i]]}) {
        for (Vertex w : g_.neighbors(end)) {
          if (!in[w] || seen[w]) continue;
          seen[w] = seen[mate_[w]] = 1;
          bfs.push_back(w);
        }
      }
    }
    if (bfs.size() * 2 != comp.size()) throw soundness_error("partition_matching_ur: case analysis exhausted (disconnected order)");
    std::vector<char> blocked(d_, 0);
    for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
      const Vertex p = *it, q = mate_[p];
      Vertex u;
      if (p == root) {
        u = root;
      } else {
        auto earlier_nbrs = [&](Vertex x) {
          std::size_t k = 0;
          for (Vertex w : g_.neighbors(x)) k += earlier[w] ? 1 : 0;
          return k;
        };
        Vertex a = parts_.in_a(p) ? p : q, b = mate_[a];
        if (earlier_nbrs(a) + 2 <= d_) {
          u = a;
        } else if (earlier_nbrs(b) + 2 <= d_) {
          u = b;
        } else {
          throw soundness_error("partition_matching_ur: case analysis exhausted (no endpoint with <= Δ-2 earlier neighbors)");
        }
      }
      std::fill(blocked.begin(), blocked.end(), 0);
      for (Vertex w : g_.neighbors(u)) {
        if (earlier[w]) blocked[c[w]] = 1;
      }
      std::size_t pick = 0;
      for (std::size_t x = 1; x < d_; ++x) {
        if (!blocked[x]) {
          pick = x;
          break;
        }
      }
      if (pick == 0) throw soundness_error("partition_matching_ur: case analysis exhausted (no free color)");
      c[p] = c[q] = pick;
      earlier[p] = earlier[q] = 1;
    }
  }

  // Colors present on M_side edges next to u.
  std::vector<char> side_colors(Vertex u, const std::vector<char>& side, const Colors& c) const {
    std::vector<char> has(d_, 0);
    for (Vertex w : g_.neighbors(u)) {
      if (side[w]) has[c[w]] = 1;
    }
    return has;
  }

  void permute(Colors& c, const std::vector<Vertex>& s, const std::vector<std::size_t>& pi) const {
    for (Vertex v : s) c[v] = pi[c[v]];
  }

  std::optional<Colors> try_cut(const std::vector<Vertex>& comp) {
    std::vector<Vertex> reps;
    for (Vertex v : comp) {
      if (parts_.in_a(v)) reps.push_back(v);
    }
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (std::size_t j = i + 1; j < reps.size(); ++j) {
        const Vertex a = reps[i], b = mate_[a], a2 = reps[j], b2 = mate_[a2];
        std::vector<Vertex> rest;
        for (Vertex v : comp) {
          if (v != a && v != b && v != a2 && v != b2) rest.push_back(v);
        }
        auto pieces = components(rest);
        if (pieces.size() < 2) continue;
        note("case (iii)", "case (iii): cut " + std::to_string(a) + "-" + std::to_string(b) + ", " +
                               std::to_string(a2) + "-" + std::to_string(b2));
        const std::vector<Vertex> u_set{a, b, a2, b2};
        std::vector<Vertex> m1 = pieces[0], m2;
        for (std::size_t k = 1; k < pieces.size(); ++k) m2.insert(m2.end(), pieces[k].begin(), pieces[k].end());
        return reconcile(u_set, m1, m2);
      }
    }
    return std::nullopt;
  }

  Colors reconcile(const std::vector<Vertex>& u_set, std::vector<Vertex> m1, std::vector<Vertex> m2) {
    const Vertex a = u_set[0], a2 = u_set[2];
    auto with_u = [&](std::vector<Vertex> s) {
      s.insert(s.end(), u_set.begin(), u_set.end());
      return s;
    };
    Colors c1 = solve(with_u(m1)), c2 = solve(with_u(m2));
    auto in1 = mark(m1), in2 = mark(m2);
    // recolor the e/e' edge at some u to a color missing from C_i(u)
    auto fix = [&](Colors& c, const std::vector<char>& side) {
      const std::size_t alpha = c[a];
      for (Vertex u : u_set) {
        auto has = side_colors(u, side, c);
        for (std::size_t beta = 1; beta < d_; ++beta) {
          if (beta == alpha || has[beta]) continue;
          c[u] = c[mate_[u]] = beta;
          return true;
        }
      }
      return false;
    };
    bool stuck1 = c1[a] == c1[a2] && !fix(c1, in1);
    bool stuck2 = c2[a] == c2[a2] && !fix(c2, in2);
    Colors out(g_.vertex_count(), 0);
    if (!stuck1 && !stuck2) {
      std::vector<std::size_t> pi(d_);
      std::iota(pi.begin(), pi.end(), std::size_t{0});
      // transpositions taking c2(e), c2(e') onto c1(e), c1(e')
      auto swap_names = [&](std::size_t x, std::size_t y) {
        for (auto& p : pi) p = p == x ? y : (p == y ? x : p);
      };
      swap_names(pi[c2[a]], c1[a]);
      swap_names(pi[c2[a2]], c1[a2]);
      permute(c2, with_u(m2), pi);
      for (Vertex v : with_u(m1)) out[v] = c1[v];
      for (Vertex v : m2) out[v] = c2[v];
      if (c2[a] != c1[a] || c2[a2] != c1[a2]) throw soundness_error("partition_matching_ur: color alignment failed");
      return out;
    }
    if (!stuck1) {
      std::swap(c1, c2);
      std::swap(in1, in2);
      std::swap(m1, m2);
    }
    const std::size_t alpha = c1[a];
    auto occ = side_colors(a, in2, c2);
    auto occ2 = side_colors(a2, in2, c2);
    for (std::size_t x = 0; x < d_; ++x) occ[x] = occ[x] || occ2[x];
    if (occ[alpha]) {
      std::size_t gamma = 0;
      for (std::size_t x = 1; x < d_; ++x) {
        if (!occ[x]) {
          gamma = x;
          break;
        }
      }
      if (gamma == 0) throw soundness_error("partition_matching_ur: case analysis exhausted (no α-free color)");
      std::vector<std::size_t> pi(d_);
      std::iota(pi.begin(), pi.end(), std::size_t{0});
      std::swap(pi[alpha], pi[gamma]);
      permute(c2, m2, pi);
    }
    for (Vertex v : with_u(m1)) out[v] = c1[v];
    for (Vertex v : m2) out[v] = c2[v];
    for (Vertex u : u_set) out[u] = alpha;
    return out;
  }

  Colors regular_triple(const std::vector<Vertex>& comp) {
    auto in = mark(comp);
    for (bool hub_in_a : {true, false}) {
      for (Vertex x : comp) {
        if (parts_.in_a(x) != hub_in_a) continue;
        const Vertex y = mate_[x];
        for (Vertex y1 : g_.neighbors(x)) {
          if (y1 == y || !in[y1]) continue;
          for (Vertex y2 : g_.neighbors(x)) {
            if (y2 == y || y2 == y1 || !in[y2]) continue;
            const Vertex x1 = mate_[y1], x2 = mate_[y2];
            if (g_.has_edge(x1, y2)) continue;
            note("case (iv)", "case (iv): hub " + std::to_string(x) + "-" + std::to_string(y) + ", seeds " +
                                  std::to_string(x1) + "-" + std::to_string(y1) + ", " + std::to_string(x2) +
                                  "-" + std::to_string(y2));
            Colors c(g_.vertex_count(), 0);
            std::vector<char> earlier(g_.vertex_count(), 0);
            for (Vertex v : {x1, y1, x2, y2}) {
              c[v] = 1;
              earlier[v] = 1;
            }
            std::vector<Vertex> rest;
            for (Vertex v : comp) {
              if (!earlier[v]) rest.push_back(v);
            }
            order_and_color(rest, x, c, earlier);
            return c;
          }
        }
      }
    }
    throw soundness_error("partition_matching_ur: case analysis exhausted (no seed triple)");
  }

  const Graph& g_;
  const Bipartition& parts_;
  std::size_t d_;
  std::vector<Vertex> mate_;
  TraceSink trace_;
  std::map<std::string, std::size_t>& counts_;
};

inline bool is_complete_bipartite_regular(const Graph& g) {
  const std::size_t d = g.max_degree();
  return g.is_regular() && g.vertex_count() == 2 * d && g.edge_count() == d * d;
}

inline void require_coloring_domain(const Graph& g, const char* what) {
  if (!is_connected(g)) throw precondition_error(std::string(what) + ": graph is not connected");
  if (g.max_degree() < 4) throw precondition_error(std::string(what) + ": maximum degree is below 4");
  if (is_complete_bipartite_regular(g)) throw precondition_error(std::string(what) + ": graph is K_{Δ,Δ}");
}

} // namespace detail

/// Splits m into at most Δ-1 matchings, each UR in g.
inline MatchingPartition partition_matching_ur(const Graph& g, const Bipartition& parts, const Matching& m,
                                               const TraceSink& trace = {}) {
  require_matching(g, m);
  for (const auto& e : g.edges()) {
    if (parts.side(e.u) == parts.side(e.v)) throw precondition_error("partition_matching_ur: edge inside a side");
  }
  detail::require_coloring_domain(g, "partition_matching_ur");
  MatchingPartition out;
  if (m.empty()) return out;
  detail::MatchingSplitter split(g, parts, m, trace, out.case_counts);
  if (m.size() * 2 < g.vertex_count()) ++out.case_counts["case (i)"];
  auto col = split.solve(m.covered());
  const std::size_t d = g.max_degree();
  std::vector<std::vector<Edge>> cls(d);
  for (const auto& e : m.edges()) {
    if (col[e.u] == 0 || col[e.u] >= d || col[e.u] != col[e.v]) {
      throw soundness_error("partition_matching_ur: matched edge left uncolored");
    }
    cls[col[e.u]].push_back(e);
  }
  for (auto& c : cls) {
    if (c.empty()) continue;
    Matching part(std::move(c));
    if (!is_ur_bipartite(g, parts, part)) throw soundness_error("partition_matching_ur: a part is not uniquely restricted");
    out.parts.push_back(std::move(part));
  }
  return out;
}

inline MatchingPartition partition_matching_ur(const Graph& g, const Matching& m, const TraceSink& trace = {}) {
  return partition_matching_ur(g, require_bipartition(g), m, trace);
}

struct LayeredColoring {
  EdgeColoring coloring;
  /// The Δ-matching decomposition each class was cut from.
  EdgeColoring skeleton;
  std::map<std::string, std::size_t> case_counts;
};

/// Proper Δ-coloring, then every class split into at most Δ-1 UR matchings.
inline LayeredColoring color_delta2_minus_delta_layered(const Graph& g, const TraceSink& trace = {}) {
  auto parts = require_bipartition(g);
  detail::require_coloring_domain(g, "color_delta2_minus_delta");
  const std::size_t d = g.max_degree();
  LayeredColoring out;
  out.skeleton = bipartite_proper_coloring(g);
  out.coloring = blank_coloring(g);
  auto cls = out.skeleton.classes();
  for (std::size_t k = 0; k < cls.size(); ++k) {
    auto split = partition_matching_ur(g, parts, Matching(cls[k]), trace);
    for (const auto& [name, n] : split.case_counts) out.case_counts[name] += n;
    for (std::size_t j = 0; j < split.parts.size(); ++j) {
      for (const auto& e : split.parts[j].edges()) out.coloring.color[edge_index(g, e)] = k * (d - 1) + j + 1;
    }
  }
  out.coloring.compact();
  if (!check_ur_coloring(g, out.coloring)) throw soundness_error("color_delta2_minus_delta: result is not a UR coloring");
  return out;
}

inline EdgeColoring color_delta2_minus_delta(const Graph& g) { return color_delta2_minus_delta_layered(g).coloring; }

/// `<u> <v> <color>` lines then `colors: <k>`.
inline std::string write_coloring(const EdgeColoring& c, const std::vector<std::string>& names = {}) {
  std::ostringstream out;
  auto name = [&](Vertex v) { return v < names.size() ? names[v] : std::to_string(v); };
  for (std::size_t i = 0; i < c.edges.size(); ++i) {
    out << name(c.edges[i].u) << ' ' << name(c.edges[i].v) << ' ' << c.color[i] << '\n';
  }
  out << "colors: " << c.color_count() << '\n';
  return out.str();
}

/// Reads the format above; every edge of the graph must be colored once.
inline EdgeColoring parse_coloring(std::string_view text, const GraphFile& file) {
  const Graph& g = file.graph;
  EdgeColoring c = blank_coloring(g);
  std::optional<std::uint64_t> declared;
  std::size_t last = 0;
  for (const auto& l : detail::split_lines(text)) {
    last = l.number;
    if (l.tokens[0] == "colors:") {
      std::uint64_t k = 0;
      if (l.tokens.size() != 2 || !detail::parse_unsigned(l.tokens[1], k)) {
        throw parse_error(l.number, "expected 'colors: <k>'");
      }
      declared = k;
      continue;
    }
    if (declared) throw parse_error(l.number, "'colors:' must be the last line");
    if (l.tokens.size() != 3) throw parse_error(l.number, "expected '<u> <v> <color>'");
    Vertex u = file.lookup(l.tokens[0], l.number), v = file.lookup(l.tokens[1], l.number);
    std::uint64_t col = 0;
    if (!detail::parse_unsigned(l.tokens[2], col) || col == 0) {
      throw parse_error(l.number, "color must be a positive integer");
    }
    if (!g.has_edge(u, v)) throw parse_error(l.number, l.tokens[0] + " " + l.tokens[1] + " is not an edge of the graph");
    auto i = edge_index(g, make_edge(u, v));
    if (c.color[i] != 0) throw parse_error(l.number, "edge colored twice");
    c.color[i] = static_cast<std::size_t>(col);
  }
  for (std::size_t i = 0; i < c.color.size(); ++i) {
    if (c.color[i] == 0) {
      throw parse_error(last, "edge " + std::to_string(c.edges[i].u) + " " + std::to_string(c.edges[i].v) + " is uncolored");
    }
  }
  if (declared && *declared != c.color_count()) {
    throw parse_error(last, "declared " + std::to_string(*declared) + " colors, found " + std::to_string(c.color_count()));
  }
  return c;
}

} // namespace urm
