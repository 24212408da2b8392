#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "urm/approx_common.hpp"
#include "urm/error.hpp"
#include "urm/graph.hpp"
#include "urm/matching.hpp"
#include "urm/subcubic/catalogue.hpp"
#include "urm/subcubic/pattern.hpp"

namespace urm::subcubic {

/// Graph of maximum degree 3 that supports vertex deletion.
class ShrinkingGraph {
public:
  explicit ShrinkingGraph(const Graph& g) : alive_(g.vertex_count(), 1), deg_(g.vertex_count(), 0),
                                            adj_(g.vertex_count()) {
    if (g.max_degree() > 3) throw precondition_error("maximum degree exceeds 3");
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      for (Vertex w : g.neighbors(v)) adj_[v][deg_[v]++] = w;
    }
  }

  std::size_t vertex_count() const noexcept { return alive_.size(); }
  bool alive(Vertex v) const noexcept { return alive_[v] != 0; }
  std::size_t degree(Vertex v) const noexcept { return deg_[v]; }
  std::span<const Vertex> neighbors(Vertex v) const noexcept { return {adj_[v].data(), deg_[v]}; }

  bool adjacent(Vertex x, Vertex y) const noexcept {
    for (Vertex w : neighbors(x)) {
      if (w == y) return true;
    }
    return false;
  }

  /// Deletes v and returns its former neighbors.
  std::vector<Vertex> remove(Vertex v) {
    std::vector<Vertex> touched(neighbors(v).begin(), neighbors(v).end());
    for (Vertex w : touched) {
      auto& row = adj_[w];
      for (std::uint8_t i = 0; i < deg_[w]; ++i) {
        if (row[i] == v) {
          row[i] = row[--deg_[w]];
          break;
        }
      }
    }
    deg_[v] = 0;
    alive_[v] = 0;
    return touched;
  }

private:
  std::vector<char> alive_;
  std::vector<std::uint8_t> deg_;
  std::vector<std::array<Vertex, 3>> adj_;
};

namespace detail {

struct ShrinkingHost {
  const ShrinkingGraph& g;
  bool free(Vertex v) const { return g.alive(v); }
  bool label_ok(Vertex, LabelReq) const { return false; }
  std::size_t free_degree(Vertex v) const { return g.degree(v); }
  std::size_t u_degree(Vertex) const { return 0; }
  bool adjacent(Vertex x, Vertex y) const { return g.adjacent(x, y); }
  template <class F>
  void for_neighbors(Vertex v, F&& f) const {
    for (Vertex w : g.neighbors(v)) f(w);
  }
};

} // namespace detail

struct ReductionHit {
  const Pattern* pattern = nullptr;
  std::vector<Vertex> image;
};

/// An occurrence of R.1-R.6 whose vertex c maps to `anchor`, if any.
inline std::optional<ReductionHit> reduction_pattern_at(const ShrinkingGraph& g, Vertex anchor) {
  if (!g.alive(anchor)) return std::nullopt;
  detail::ShrinkingHost host{g};
  for (const auto& p : reduction_patterns()) {
    std::vector<Vertex> image(p.size(), no_vertex);
    image[p.index("c")] = anchor;
    if (embed(p, host, image)) return ReductionHit{&p, std::move(image)};
  }
  return std::nullopt;
}

/// First R-pattern occurrence in g (scan by anchor id), if any.
inline std::optional<ReductionHit> find_reduction_pattern(const Graph& g) {
  ShrinkingGraph sg(g);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (auto hit = reduction_pattern_at(sg, v)) return hit;
  }
  return std::nullopt;
}

/// One applied reduction, in application order.
struct ReductionRecord {
  std::string kind;
  std::vector<Vertex> removed;
  std::vector<Edge> kept;
};

struct ReductionOutcome {
  Graph residual;
  /// Edges fixed by the reductions (the set M*), in input ids.
  std::vector<Edge> kept;
  /// residual id -> input id.
  std::vector<Vertex> vertex_map;
  /// Applications per reduction kind ("R.1".."R.6", "twin", "degree1", "isolated").
  std::map<std::string, std::size_t> applied;
  std::vector<ReductionRecord> log;
};

/// Applies Reductions (1)-(4) in priority order until none applies.
inline ReductionOutcome apply_reductions(const Graph& g, const TraceSink& trace = {}) {
  ShrinkingGraph sg(g);
  const std::size_t n = g.vertex_count();
  ReductionOutcome out;

  // Anchors whose pattern and twin status may have changed.
  std::set<Vertex> pattern_dirty, twin_dirty, leaves, isolated;
  for (Vertex v = 0; v < n; ++v) {
    pattern_dirty.insert(v);
    twin_dirty.insert(v);
    if (sg.degree(v) == 1) leaves.insert(v);
    if (sg.degree(v) == 0) isolated.insert(v);
  }

  std::vector<std::uint32_t> seen(n, 0);
  std::uint32_t epoch = 0;
  auto mark_ball = [&](const std::vector<Vertex>& from, std::size_t radius, std::set<Vertex>& into) {
    ++epoch;
    std::vector<Vertex> layer;
    for (Vertex v : from) {
      if (sg.alive(v) && seen[v] != epoch) {
        seen[v] = epoch;
        layer.push_back(v);
      }
    }
    for (std::size_t r = 0;; ++r) {
      for (Vertex v : layer) into.insert(v);
      if (r == radius) break;
      std::vector<Vertex> next;
      for (Vertex v : layer) {
        for (Vertex w : sg.neighbors(v)) {
          if (seen[w] != epoch) {
            seen[w] = epoch;
            next.push_back(w);
          }
        }
      }
      layer.swap(next);
    }
  };

  auto delete_all = [&](const std::vector<Vertex>& victims) {
    std::vector<Vertex> touched;
    for (Vertex v : victims) {
      if (!sg.alive(v)) continue;
      leaves.erase(v);
      isolated.erase(v);
      pattern_dirty.erase(v);
      twin_dirty.erase(v);
      for (Vertex w : sg.remove(v)) touched.push_back(w);
    }
    std::vector<Vertex> live;
    for (Vertex w : touched) {
      if (!sg.alive(w)) continue;
      live.push_back(w);
      leaves.erase(w);
      isolated.erase(w);
      if (sg.degree(w) == 1) leaves.insert(w);
      if (sg.degree(w) == 0) isolated.insert(w);
    }
    // Templates reach distance 4 from c; degrees one step further matter.
    mark_ball(live, 5, pattern_dirty);
    mark_ball(live, 2, twin_dirty);
  };

  auto twin_of = [&](Vertex v) -> Vertex {
    if (sg.degree(v) == 0) return no_vertex;
    std::array<Vertex, 3> mine{};
    auto nv = sg.neighbors(v);
    std::copy(nv.begin(), nv.end(), mine.begin());
    std::sort(mine.begin(), mine.begin() + nv.size());
    for (Vertex u : sg.neighbors(nv[0])) {
      if (u == v || sg.degree(u) != nv.size()) continue;
      std::array<Vertex, 3> theirs{};
      auto nu = sg.neighbors(u);
      std::copy(nu.begin(), nu.end(), theirs.begin());
      std::sort(theirs.begin(), theirs.begin() + nu.size());
      if (std::equal(mine.begin(), mine.begin() + nv.size(), theirs.begin())) return u;
    }
    return no_vertex;
  };

  while (true) {
    if (!pattern_dirty.empty()) {
      Vertex v = *pattern_dirty.begin();
      pattern_dirty.erase(pattern_dirty.begin());
      auto hit = reduction_pattern_at(sg, v);
      if (!hit) continue;
      const Pattern& p = *hit->pattern;
      std::vector<Vertex> victims;
      for (const auto& e : p.edges) {
        if (e.select) out.kept.push_back(make_edge(hit->image[e.x], hit->image[e.y]));
      }
      for (std::size_t t = 0; t < p.size(); ++t) {
        if (!p.vertices[t].open) victims.push_back(hit->image[t]);
      }
      ++out.applied[p.id];
      if (trace) trace("reduction " + p.id + " at c=" + std::to_string(v));
      ReductionRecord rec{p.id, victims, {}};
      rec.kept.assign(out.kept.end() - static_cast<long>(p.selected().size()), out.kept.end());
      out.log.push_back(std::move(rec));
      delete_all(victims);
      pattern_dirty.insert(v);
      continue;
    }
    if (!twin_dirty.empty()) {
      Vertex v = *twin_dirty.begin();
      twin_dirty.erase(twin_dirty.begin());
      if (!sg.alive(v)) continue;
      Vertex u = twin_of(v);
      if (u == no_vertex) continue;
      Vertex drop = std::max(u, v);
      ++out.applied["twin"];
      out.log.push_back({"twin", {drop}, {}});
      if (trace) trace("reduction twin drop " + std::to_string(drop) + " keep " + std::to_string(std::min(u, v)));
      delete_all({drop});
      continue;
    }
    if (!leaves.empty()) {
      Vertex u = *leaves.begin();
      Vertex w = sg.neighbors(u)[0];
      out.kept.push_back(make_edge(u, w));
      ++out.applied["degree1"];
      out.log.push_back({"degree1", {u, w}, {make_edge(u, w)}});
      if (trace) trace("reduction degree1 " + std::to_string(u) + " " + std::to_string(w));
      delete_all({u, w});
      continue;
    }
    if (!isolated.empty()) {
      Vertex u = *isolated.begin();
      ++out.applied["isolated"];
      out.log.push_back({"isolated", {u}, {}});
      delete_all({u});
      continue;
    }
    break;
  }

  std::vector<Vertex> keep;
  for (Vertex v = 0; v < n; ++v) {
    if (sg.alive(v)) keep.push_back(v);
  }
  Subgraph sub = induced_subgraph(g, keep);
  out.residual = std::move(sub.graph);
  out.vertex_map = std::move(sub.original);
  std::sort(out.kept.begin(), out.kept.end());
  return out;
}

struct LiftResult {
  Matching matching;
  /// R applications whose drawn edges closed an alternating cycle with the
  /// rest and were re-solved locally.
  std::vector<std::string> repaired;
};

/// Combines a UR matching of the residual (given in input ids) with M*.
/// When the union is not UR, the log is replayed backwards: every step
/// adds its edges if that keeps the matching UR, and otherwise picks the
/// largest UR completion among edges at its removed vertices.
inline LiftResult lift_reductions(const Graph& g, const ReductionOutcome& red, std::vector<Edge> inner) {
  const auto parts = require_bipartition(g);
  std::vector<Edge> all = inner;
  all.insert(all.end(), red.kept.begin(), red.kept.end());
  LiftResult out;
  out.matching = Matching(all);
  if (is_ur_bipartite(g, parts, out.matching)) return out;

  const std::size_t n = g.vertex_count();
  const std::size_t never = red.log.size();
  std::vector<std::size_t> removed_at(n, never);
  for (std::size_t i = 0; i < red.log.size(); ++i) {
    for (Vertex v : red.log[i].removed) removed_at[v] = i;
  }
  std::vector<char> matched(n, 0);
  auto take = [&](const Edge& e) {
    matched[e.u] = matched[e.v] = 1;
    inner.push_back(e);
  };
  for (const auto& e : inner) matched[e.u] = matched[e.v] = 1;

  for (std::size_t i = red.log.size(); i-- > 0;) {
    const auto& rec = red.log[i];
    if (rec.kept.empty()) continue;
    std::vector<Edge> trial = inner;
    trial.insert(trial.end(), rec.kept.begin(), rec.kept.end());
    if (rec.kind == "degree1" || is_ur_bipartite(g, parts, Matching(trial))) {
      for (const auto& e : rec.kept) take(e);
      continue;
    }
    // Local candidates: edges at removed vertices whose other end is still
    // present at step i and unmatched.
    std::vector<Edge> cand;
    for (Vertex v : rec.removed) {
      for (Vertex w : g.neighbors(v)) {
        if (matched[w] || removed_at[w] < i) continue;
        Edge e = make_edge(v, w);
        if (std::find(cand.begin(), cand.end(), e) == cand.end()) cand.push_back(e);
      }
    }
    std::sort(cand.begin(), cand.end());
    std::vector<std::vector<Edge>> options;
    std::vector<Edge> pick;
    std::vector<char> used(n, 0);
    auto rec_enum = [&](auto&& self, std::size_t k) -> void {
      if (k == cand.size()) {
        options.push_back(pick);
        return;
      }
      const Edge& e = cand[k];
      if (!used[e.u] && !used[e.v]) {
        used[e.u] = used[e.v] = 1;
        pick.push_back(e);
        self(self, k + 1);
        pick.pop_back();
        used[e.u] = used[e.v] = 0;
      }
      self(self, k + 1);
    };
    rec_enum(rec_enum, 0);
    std::stable_sort(options.begin(), options.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });
    for (const auto& opt : options) {
      std::vector<Edge> t = inner;
      t.insert(t.end(), opt.begin(), opt.end());
      if (!is_ur_bipartite(g, parts, Matching(t))) continue;
      for (const auto& e : opt) take(e);
      break;
    }
    out.repaired.push_back(rec.kind);
  }
  out.matching = Matching(std::move(inner));
  return out;
}

} // namespace urm::subcubic
