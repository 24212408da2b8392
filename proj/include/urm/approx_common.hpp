#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "urm/error.hpp"
#include "urm/graph.hpp"
#include "urm/matching.hpp"

namespace urm {

struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  /// Smallest integer k with k >= (num/den) * x.
  std::int64_t ceil_times(std::int64_t x) const noexcept { return (num * x + den - 1) / den; }
};

/// Receives one human-readable line per algorithm step.
using TraceSink = std::function<void(const std::string&)>;

struct ApproxResult {
  Matching matching;
  Ratio guarantee;
  std::size_t delta = 0;
  /// Sum of |A| over the components handed to the core loop plus the
  /// edges fixed by reductions; the core guarantee is stated against it.
  std::size_t bound_reference = 0;
  /// Some Δ-regular component had no UR maximum matching and was solved by
  /// the G - u sweep instead.
  bool regular_fallback = false;
  std::size_t steps = 0;
  std::size_t invariant_checks = 0;
  std::map<std::string, std::size_t> case_counts;

  void absorb_stats(const ApproxResult& other) {
    steps += other.steps;
    invariant_checks += other.invariant_checks;
    for (const auto& [k, v] : other.case_counts) case_counts[k] += v;
  }
};

namespace detail {

// Maps a matching of a subgraph back to parent ids and appends it.
inline void lift_into(std::vector<Edge>& out, const Matching& m, const std::vector<Vertex>& original) {
  for (const auto& e : m.edges()) out.push_back(make_edge(original[e.u], original[e.v]));
}

// Shared wrapper shape: split into components; a connected Δ-regular
// component first tries a maximum matching, and when that is not UR runs
// `pipeline` on every G - u keeping the largest result. Other components go
// to `pipeline` directly.
template <class Pipeline>
ApproxResult run_by_component(const Graph& g, std::size_t delta, Pipeline&& pipeline,
                              const TraceSink& trace) {
  ApproxResult total;
  std::vector<Edge> edges;
  for (const auto& comp : connected_components(g)) {
    Subgraph sub = induced_subgraph(g, comp);
    const Graph& h = sub.graph;
    if (h.edge_count() == 0) continue;
    bool regular = h.is_regular() && h.max_degree() == delta;
    if (!regular) {
      ApproxResult r = pipeline(h, trace);
      lift_into(edges, r.matching, sub.original);
      total.bound_reference += r.bound_reference;
      total.absorb_stats(r);
      continue;
    }
    auto parts = require_bipartition(h);
    Matching mm = maximum_matching_bipartite(h, parts);
    if (is_ur_bipartite(h, parts, mm)) {
      if (trace) trace("regular component: maximum matching is uniquely restricted");
      lift_into(edges, mm, sub.original);
      total.bound_reference += mm.size();
      continue;
    }
    total.regular_fallback = true;
    ApproxResult best;
    bool have = false;
    for (Vertex u = 0; u < h.vertex_count(); ++u) {
      Subgraph minus = remove_vertex(h, u);
      ApproxResult r = pipeline(minus.graph, TraceSink{});
      total.absorb_stats(r);
      if (!have || r.matching.size() > best.matching.size()) {
        std::vector<Edge> lifted;
        lift_into(lifted, r.matching, minus.original);
        best = r;
        best.matching = Matching(std::move(lifted));
        have = true;
      }
    }
    if (trace) {
      trace("regular component: G - u sweep over " + std::to_string(h.vertex_count()) +
            " vertices, best size " + std::to_string(best.matching.size()));
    }
    lift_into(edges, best.matching, sub.original);
    total.bound_reference += best.bound_reference;
  }
  total.matching = Matching(std::move(edges));
  return total;
}

} // namespace detail

} // namespace urm
