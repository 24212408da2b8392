#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "urm/approx_common.hpp"
#include "urm/error.hpp"
#include "urm/graph.hpp"
#include "urm/matching.hpp"

namespace urm {

/// α(Δ) = ((Δ-1)^2 + (Δ-2)) / ((Δ-1)^3 + (Δ-2)).
inline Ratio c4free_ratio(std::size_t delta) {
  const auto d = static_cast<std::int64_t>(delta);
  return {(d - 1) * (d - 1) + (d - 2), (d - 1) * (d - 1) * (d - 1) + (d - 2)};
}

struct C4FreeOptions {
  /// Degree parameter; raised to max(3, maximum degree) when smaller.
  std::optional<std::size_t> delta;
  /// Re-check properties (a)-(d), the counters and the potential bound after every step.
  bool assert_invariants = false;
  TraceSink trace;
};

/// State of the extension loop: the vertex set U, the matching M, and the
/// counters s, d, f over A ∩ U.
class ExtensionState {
public:
  enum class Kind : std::uint8_t { outside, matched, dash, full };

  ExtensionState(const Graph& g, const Bipartition& parts, std::size_t delta)
      : g_(g), parts_(parts), delta_(static_cast<std::int64_t>(delta)),
        in_u_(g.vertex_count(), 0), mate_(g.vertex_count(), no_vertex),
        out_deg_(g.vertex_count(), 0), kind_(g.vertex_count(), Kind::outside) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      out_deg_[v] = static_cast<std::uint32_t>(g.degree(v));
      if (parts.in_b(v)) frontier_.insert({out_deg_[v], v});
    }
  }

  std::int64_t s() const noexcept { return s_; }
  std::int64_t d() const noexcept { return d_; }
  std::int64_t f() const noexcept { return f_; }
  bool done() const noexcept { return frontier_.empty() && u_size_ == g_.vertex_count(); }
  bool in_u(Vertex v) const noexcept { return in_u_[v] != 0; }
  Vertex mate(Vertex v) const noexcept { return mate_[v]; }
  std::uint32_t outside_degree(Vertex v) const noexcept { return out_deg_[v]; }

  /// potential bound: (Δ-1)^2((Δ-2)s - (d+f)) - (Δ-2)f, which must stay >= 0.
  std::int64_t slack() const noexcept {
    return (delta_ - 1) * (delta_ - 1) * ((delta_ - 2) * s_ - (d_ + f_)) - (delta_ - 2) * f_;
  }

  /// B ∖ U vertex with the fewest neighbors outside U, lowest id on ties.
  std::optional<Vertex> pick() const {
    if (frontier_.empty()) return std::nullopt;
    return frontier_.begin()->second;
  }

  Matching matching() const { return matching_from_mates(mate_); }

  /// Case 1 of the extension step. Returns the number of edges added.
  std::size_t resolve_case1(Vertex u) {
    Vertex v = outside_neighbor(u);
    std::vector<Vertex> good, rest;
    for (Vertex x : g_.neighbors(v)) {
      if (in_u(x) || out_deg_[x] != 1) continue;
      bool has_u = false, has_matched = false;
      for (Vertex w : g_.neighbors(x)) {
        if (!in_u(w)) continue;
        has_u = true;
        has_matched = has_matched || mate_[w] != no_vertex;
      }
      (has_u && !has_matched ? good : rest).push_back(x);
    }
    std::vector<Vertex> added{v};
    added.insert(added.end(), good.begin(), good.end());
    added.insert(added.end(), rest.begin(), rest.end());
    std::size_t count = 0;
    if (good.size() >= 2) {
      std::vector<Vertex> used;
      for (Vertex ui : good) {
        Vertex w = no_vertex;
        for (Vertex x : g_.neighbors(ui)) {
          if (in_u(x)) {
            w = x;
            break;
          }
        }
        if (std::find(used.begin(), used.end(), w) != used.end()) {
          throw soundness_error("extension case 1: two frontier vertices share a U-neighbor "
                                "(the input has a 4-cycle)");
        }
        used.push_back(w);
        set_mate(ui, w);
        ++count;
      }
    } else {
      Vertex u1 = good.empty() ? rest.front() : good.front();
      set_mate(u1, v);
      count = 1;
    }
    enter(added);
    return count;
  }

  /// Case 2 of the extension step.
  void resolve_case2(Vertex u) {
    std::vector<Vertex> outside;
    Vertex unmatched_inner = no_vertex;
    bool any_matched_inner = false;
    for (Vertex x : g_.neighbors(u)) {
      if (!in_u(x)) {
        outside.push_back(x);
      } else if (mate_[x] != no_vertex) {
        any_matched_inner = true;
      } else if (unmatched_inner == no_vertex) {
        unmatched_inner = x;
      }
    }
    if (unmatched_inner != no_vertex && !any_matched_inner) {
      set_mate(u, unmatched_inner);
    } else {
      set_mate(u, outside.front());
    }
    std::vector<Vertex> added{u};
    added.insert(added.end(), outside.begin(), outside.end());
    enter(added);
  }

  /// Full scan of properties (b)-(d), the counters, and the potential bound. Throws
  /// soundness_error naming the first violated property.
  void check() const {
    for (Vertex v = 0; v < g_.vertex_count(); ++v) {
      if (mate_[v] != no_vertex && !in_u(v)) fail("(b) matched vertex outside U");
    }
    if (!is_ur_bipartite(g_, parts_, matching())) fail("(b) M is not uniquely restricted");
    std::int64_t s = 0, d = 0, f = 0;
    for (Vertex v = 0; v < g_.vertex_count(); ++v) {
      std::size_t outside = 0;
      for (Vertex x : g_.neighbors(v)) outside += in_u(x) ? 0 : 1;
      if (outside != out_deg_[v]) fail("outside-degree bookkeeping");
      if (parts_.in_b(v)) {
        if (in_u(v) && outside > 0) fail("(c) B ∩ U vertex with a neighbor in A ∖ U");
        if (!in_u(v) && outside == 0) fail("(d) B ∖ U vertex with all neighbors in U");
      } else if (in_u(v)) {
        if (mate_[v] != no_vertex) {
          ++s;
        } else if (outside > 0) {
          ++d;
        } else {
          ++f;
        }
      }
    }
    if (s != s_ || d != d_ || f != f_) fail("counters s, d, f out of sync");
    if (slack() < 0) fail("potential bound");
  }

private:
  [[noreturn]] static void fail(const std::string& what) {
    throw soundness_error("extension invariant violated: " + what);
  }

  Vertex outside_neighbor(Vertex u) const {
    for (Vertex x : g_.neighbors(u)) {
      if (!in_u(x)) return x;
    }
    throw soundness_error("frontier vertex without outside neighbor");
  }

  void set_mate(Vertex x, Vertex y) {
    mate_[x] = y;
    mate_[y] = x;
    for (Vertex a : {x, y}) {
      if (parts_.in_a(a) && in_u(a)) reclassify(a);
    }
  }

  Kind classify(Vertex a) const {
    if (mate_[a] != no_vertex) return Kind::matched;
    return out_deg_[a] > 0 ? Kind::dash : Kind::full;
  }

  void bump(Kind k, std::int64_t by) {
    if (k == Kind::matched) s_ += by;
    if (k == Kind::dash) d_ += by;
    if (k == Kind::full) f_ += by;
  }

  void reclassify(Vertex a) {
    Kind k = classify(a);
    if (k == kind_[a]) return;
    bump(kind_[a], -1);
    bump(k, +1);
    kind_[a] = k;
  }

  void enter(const std::vector<Vertex>& added) {
    for (Vertex x : added) {
      in_u_[x] = 1;
      ++u_size_;
      if (parts_.in_b(x)) frontier_.erase({out_deg_[x], x});
    }
    for (Vertex x : added) {
      for (Vertex y : g_.neighbors(x)) {
        if (parts_.in_b(y) && !in_u(y)) frontier_.erase({out_deg_[y], y});
        --out_deg_[y];
        if (parts_.in_b(y) && !in_u(y)) frontier_.insert({out_deg_[y], y});
        if (parts_.in_a(y) && in_u(y)) reclassify(y);
      }
    }
    for (Vertex x : added) {
      if (parts_.in_a(x)) reclassify(x);
    }
  }

  const Graph& g_;
  const Bipartition& parts_;
  std::int64_t delta_;
  std::vector<char> in_u_;
  std::vector<Vertex> mate_;
  std::vector<std::uint32_t> out_deg_;
  std::vector<Kind> kind_;
  std::set<std::pair<std::uint32_t, Vertex>> frontier_;
  std::size_t u_size_ = 0;
  std::int64_t s_ = 0, d_ = 0, f_ = 0;
};

/// The extension loop on a connected C4-free bipartite graph whose A-side
/// vertices all have degree >= 2 and whose B side has a vertex of degree
/// < Δ. Returns a UR matching of size >= α(Δ)|A|.
inline ApproxResult extension_loop(const Graph& g, const Bipartition& parts, std::size_t delta,
                                   const C4FreeOptions& opt = {}) {
  if (delta < 3) throw precondition_error("extension_loop: Δ must be at least 3");
  if (g.max_degree() > delta) throw precondition_error("extension_loop: maximum degree exceeds Δ");
  if (!is_connected(g)) throw precondition_error("extension_loop: graph is not connected");
  for (const auto& e : g.edges()) {
    if (parts.side(e.u) == parts.side(e.v)) throw precondition_error("extension_loop: edge inside a side");
  }
  if (!is_c4_free(g)) throw contains_c4();
  bool low_b = false;
  std::size_t a_count = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (parts.in_a(v)) {
      ++a_count;
      if (g.degree(v) < 2) throw precondition_error("extension_loop: an A vertex has degree < 2");
    } else if (g.degree(v) < delta) {
      low_b = true;
    }
  }
  if (!low_b) throw precondition_error("extension_loop: every B vertex has degree Δ");

  ApproxResult res;
  res.delta = delta;
  res.guarantee = c4free_ratio(delta);
  res.bound_reference = a_count;
  ExtensionState st(g, parts, delta);
  if (opt.assert_invariants) {
    st.check();
    ++res.invariant_checks;
  }
  const auto dd = static_cast<std::uint32_t>(delta);
  while (auto pick = st.pick()) {
    Vertex u = *pick;
    std::uint32_t k = st.outside_degree(u);
    if (k < 1 || k > dd - 1) {
      throw soundness_error("extension_loop: frontier minimum d_out(u) = " + std::to_string(k) +
                            " outside [1, Δ-1]");
    }
    const char* which = k == 1 ? "case1" : "case2";
    if (k == 1) {
      st.resolve_case1(u);
    } else {
      st.resolve_case2(u);
    }
    ++res.steps;
    ++res.case_counts[which];
    if (opt.assert_invariants) {
      st.check();
      ++res.invariant_checks;
    }
    if (opt.trace) {
      std::ostringstream line;
      line << "step " << res.steps << " " << which << " u=" << u << " s=" << st.s()
           << " d=" << st.d() << " f=" << st.f() << " slack=" << st.slack();
      opt.trace(line.str());
    }
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!st.in_u(v)) throw soundness_error("extension_loop: frontier empty while U != V");
  }
  res.matching = st.matching();
  // |M| ((Δ-1)^3 + (Δ-2)) >= ((Δ-1)^2 + (Δ-2)) |A|.
  const Ratio r = res.guarantee;
  if (static_cast<std::int64_t>(res.matching.size()) * r.den <
      r.num * static_cast<std::int64_t>(a_count)) {
    throw soundness_error("extension_loop: final size bound violated");
  }
  return res;
}

namespace detail {

// Peels degree-1 vertices (lowest id first), drops isolated vertices, then
// runs the extension loop on each residual component with B chosen to hold
// a vertex of degree < Δ.
inline ApproxResult c4free_pipeline(const Graph& g, std::size_t delta, const C4FreeOptions& opt,
                                    const TraceSink& trace) {
  const std::size_t n = g.vertex_count();
  std::vector<char> alive(n, 1);
  std::vector<std::size_t> deg(n);
  std::set<Vertex> leaves;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] == 1) leaves.insert(v);
  }
  std::vector<Edge> m1;
  auto kill = [&](Vertex x) {
    alive[x] = 0;
    leaves.erase(x);
    for (Vertex y : g.neighbors(x)) {
      if (!alive[y]) continue;
      --deg[y];
      if (deg[y] == 1) leaves.insert(y);
      if (deg[y] == 0) leaves.erase(y);
    }
  };
  while (!leaves.empty()) {
    Vertex u = *leaves.begin();
    Vertex v = no_vertex;
    for (Vertex y : g.neighbors(u)) {
      if (alive[y]) v = y;
    }
    m1.push_back(make_edge(u, v));
    if (trace) trace("peel " + std::to_string(u) + " " + std::to_string(v));
    kill(u);
    kill(v);
  }

  ApproxResult out;
  out.delta = delta;
  out.guarantee = c4free_ratio(delta);
  out.bound_reference = m1.size();
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < n; ++v) {
    if (alive[v] && deg[v] > 0) keep.push_back(v);
  }
  Subgraph residual = induced_subgraph(g, keep);
  std::vector<Edge> edges = m1;
  for (const auto& comp : connected_components(residual.graph)) {
    Subgraph k = induced_subgraph(residual.graph, comp);
    auto parts = require_bipartition(k.graph);
    auto has_low = [&](const Bipartition& p) {
      for (Vertex v = 0; v < k.graph.vertex_count(); ++v) {
        if (p.in_b(v) && k.graph.degree(v) < delta) return true;
      }
      return false;
    };
    if (!has_low(parts)) parts = parts.swapped();
    if (!has_low(parts)) throw soundness_error("c4free: residual component is Δ-regular");
    C4FreeOptions sub = opt;
    sub.trace = trace;
    ApproxResult r = extension_loop(k.graph, parts, delta, sub);
    out.absorb_stats(r);
    out.bound_reference += r.bound_reference;
    for (const auto& e : r.matching.edges()) {
      edges.push_back(make_edge(residual.original[k.original[e.u]], residual.original[k.original[e.v]]));
    }
  }
  out.matching = Matching(std::move(edges));
  return out;
}

} // namespace detail

/// α(Δ)-approximation of ν_ur for C4-free bipartite graphs of maximum
/// degree Δ >= 3. Regular components without a UR maximum matching fall
/// back to the G - u sweep (flagged in the result).
inline ApproxResult approximate_c4free(const Graph& g, const C4FreeOptions& opt = {}) {
  auto parts = require_bipartition(g);
  if (!is_c4_free(g)) throw contains_c4();
  std::size_t delta = std::max<std::size_t>(3, g.max_degree());
  if (opt.delta) delta = std::max(delta, *opt.delta);
  auto pipeline = [&](const Graph& h, const TraceSink& trace) {
    return detail::c4free_pipeline(h, delta, opt, trace);
  };
  ApproxResult res = detail::run_by_component(g, delta, pipeline, opt.trace);
  res.delta = delta;
  res.guarantee = c4free_ratio(delta);
  if (!is_matching(g, res.matching) || !is_ur_bipartite(g, parts, res.matching)) {
    throw soundness_error("approximate_c4free: result is not a uniquely restricted matching");
  }
  return res;
}

} // namespace urm
