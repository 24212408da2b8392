#pragma once

#include <string>
#include <vector>

#include "urm/approx_common.hpp"
#include "urm/error.hpp"
#include "urm/graph.hpp"
#include "urm/matching.hpp"
#include "urm/subcubic/core.hpp"
#include "urm/subcubic/reductions.hpp"

namespace urm {

using subcubic::SubcubicOptions;

namespace detail {

// Reductions first, then the core loop on every residual component with B
// chosen to contain a vertex of degree <= 2.
inline ApproxResult subcubic_pipeline(const Graph& g, const SubcubicOptions& opt, const TraceSink& trace) {
  auto red = subcubic::apply_reductions(g, trace);
  ApproxResult out;
  out.delta = 3;
  out.guarantee = {5, 9};
  out.bound_reference = red.kept.size();
  for (const auto& [name, count] : red.applied) out.case_counts["reduction:" + name] += count;
  std::vector<Edge> edges;
  for (const auto& comp : connected_components(red.residual)) {
    Subgraph k = induced_subgraph(red.residual, comp);
    auto parts = require_bipartition(k.graph);
    auto has_low = [&](const Bipartition& p) {
      for (Vertex v = 0; v < k.graph.vertex_count(); ++v) {
        if (p.in_b(v) && k.graph.degree(v) <= 2) return true;
      }
      return false;
    };
    if (!has_low(parts)) parts = parts.swapped();
    if (!has_low(parts)) throw soundness_error("subcubic: residual component is 3-regular");
    SubcubicOptions sub = opt;
    sub.trace = trace;
    ApproxResult r = subcubic::core_loop(k.graph, parts, sub);
    out.absorb_stats(r);
    out.bound_reference += r.bound_reference;
    for (const auto& e : r.matching.edges()) {
      edges.push_back(make_edge(red.vertex_map[k.original[e.u]], red.vertex_map[k.original[e.v]]));
    }
  }
  auto lifted = subcubic::lift_reductions(g, red, std::move(edges));
  for (const auto& kind : lifted.repaired) {
    ++out.case_counts["reduction_repair:" + kind];
    if (trace) trace("reduction " + kind + " re-solved locally on lifting");
  }
  out.matching = std::move(lifted.matching);
  return out;
}

} // namespace detail

/// 5/9-approximation of ν_ur for bipartite graphs of maximum degree 3.
inline ApproxResult approximate_subcubic(const Graph& g, const SubcubicOptions& opt = {}) {
  auto parts = require_bipartition(g);
  if (g.max_degree() > 3) throw precondition_error("approximate_subcubic: maximum degree exceeds 3");
  auto pipeline = [&](const Graph& h, const TraceSink& trace) { return detail::subcubic_pipeline(h, opt, trace); };
  ApproxResult res = detail::run_by_component(g, 3, pipeline, opt.trace);
  res.delta = 3;
  res.guarantee = {5, 9};
  if (!is_matching(g, res.matching) || !is_ur_bipartite(g, parts, res.matching)) {
    throw soundness_error("approximate_subcubic: result is not a uniquely restricted matching");
  }
  return res;
}

} // namespace urm
