#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include "urm/error.hpp"
#include "urm/graph.hpp"

namespace urm {

/// Canonical labeling by individualization-refinement over adjacency
/// bitmasks (n <= 32). Two graphs get the same canonical string iff they are
/// isomorphic.
class CanonicalForm {
public:
  static std::string of(const Graph& g) {
    if (g.vertex_count() > 32) throw precondition_error("canonical form supports n <= 32");
    CanonicalForm c(g);
    std::vector<std::vector<Vertex>> cells{{}};
    for (Vertex v = 0; v < c.n_; ++v) cells[0].push_back(v);
    c.refine(cells);
    c.search(cells);
    return c.best_;
  }

private:
  explicit CanonicalForm(const Graph& g) : n_(static_cast<Vertex>(g.vertex_count())), adj_(n_, 0) {
    for (const auto& e : g.edges()) {
      adj_[e.u] |= 1u << e.v;
      adj_[e.v] |= 1u << e.u;
    }
  }

  using Cells = std::vector<std::vector<Vertex>>;

  // Equitable refinement. Cells split by neighbor counts into each cell; the
  // new pieces keep the position of their parent, ordered by signature, so
  // the result depends only on the isomorphism class of (g, partition).
  void refine(Cells& cells) const {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::uint32_t> masks(cells.size(), 0);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        for (Vertex v : cells[i]) masks[i] |= 1u << v;
      }
      Cells next;
      for (const auto& cell : cells) {
        if (cell.size() == 1) {
          next.push_back(cell);
          continue;
        }
        std::vector<std::pair<std::vector<int>, Vertex>> sig;
        for (Vertex v : cell) {
          std::vector<int> s(masks.size());
          for (std::size_t i = 0; i < masks.size(); ++i) s[i] = __builtin_popcount(adj_[v] & masks[i]);
          sig.emplace_back(std::move(s), v);
        }
        std::sort(sig.begin(), sig.end());
        std::size_t start = next.size();
        for (std::size_t i = 0; i < sig.size(); ++i) {
          if (i == 0 || sig[i].first != sig[i - 1].first) next.emplace_back();
          next.back().push_back(sig[i].second);
        }
        if (next.size() - start > 1) changed = true;
      }
      cells = std::move(next);
    }
  }

  // A cell structure is uniform when every cell is a clique or independent
  // set and every pair of cells is fully joined or not at all. Then all
  // leaves below give the same relabeled matrix.
  bool uniform(const Cells& cells) const {
    std::vector<std::uint32_t> masks(cells.size(), 0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (Vertex v : cells[i]) masks[i] |= 1u << v;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (std::size_t j = 0; j < cells.size(); ++j) {
        std::uint32_t target = masks[j];
        int want = -1;
        for (Vertex v : cells[i]) {
          std::uint32_t others = target & ~(1u << v);
          int cnt = __builtin_popcount(adj_[v] & others);
          int full = (cnt == __builtin_popcount(others)) ? 1 : (cnt == 0 ? 0 : 2);
          if (full == 2) return false;
          if (want == -1) want = full;
          if (full != want) return false;
        }
      }
    }
    return true;
  }

  std::string encode(const Cells& cells) const {
    std::vector<Vertex> order;
    for (const auto& c : cells) order.insert(order.end(), c.begin(), c.end());
    std::string s(static_cast<std::size_t>(n_) * (n_ - (n_ ? 1 : 0)) / 2 + 1, '0');
    s[0] = static_cast<char>('A' + n_);
    std::size_t k = 1;
    for (Vertex i = 0; i < n_; ++i) {
      for (Vertex j = i + 1; j < n_; ++j) s[k++] = (adj_[order[i]] >> order[j] & 1u) ? '1' : '0';
    }
    return s;
  }

  void search(const Cells& cells) {
    auto target = std::find_if(cells.begin(), cells.end(), [](const auto& c) { return c.size() > 1; });
    if (target == cells.end() || uniform(cells)) {
      std::string s = encode(cells);
      if (best_.empty() || s < best_) best_ = std::move(s);
      return;
    }
    std::size_t idx = static_cast<std::size_t>(target - cells.begin());
    for (Vertex v : cells[idx]) {
      Cells child;
      child.reserve(cells.size() + 1);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i != idx) {
          child.push_back(cells[i]);
          continue;
        }
        child.push_back({v});
        std::vector<Vertex> rest;
        for (Vertex w : cells[i]) {
          if (w != v) rest.push_back(w);
        }
        child.push_back(std::move(rest));
      }
      refine(child);
      search(child);
    }
  }

  Vertex n_;
  std::vector<std::uint32_t> adj_;
  std::string best_;
};

/// Class membership test for the enumerator. Must be hereditary (closed
/// under vertex deletion) so every member extends a smaller member.
using GraphFilter = std::function<bool(const Graph&)>;

struct EnumerationOptions {
  std::size_t max_degree = 0;  // 0 = unbounded
  bool bipartite_only = false;
  bool c4_free_only = false;
};

/// All graphs on exactly n vertices up to isomorphism in the hereditary
/// class described by `opt`, built by vertex addition with canonical
/// deduplication.
inline std::vector<Graph> enumerate_graphs(std::size_t n, const EnumerationOptions& opt = {}) {
  auto accept = [&](const Graph& g) {
    if (opt.max_degree && g.max_degree() > opt.max_degree) return false;
    if (opt.bipartite_only && !is_bipartite(g)) return false;
    if (opt.c4_free_only && !is_c4_free(g)) return false;
    return true;
  };
  std::vector<Graph> level{Graph(0, {})};
  for (std::size_t k = 1; k <= n; ++k) {
    std::unordered_set<std::string> seen;
    std::vector<Graph> next;
    const Vertex fresh = static_cast<Vertex>(k - 1);
    for (const auto& g : level) {
      std::vector<Vertex> eligible;
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (!opt.max_degree || g.degree(v) < opt.max_degree) eligible.push_back(v);
      }
      const std::size_t e = eligible.size();
      for (std::uint64_t mask = 0; mask < (1ull << e); ++mask) {
        if (opt.max_degree && static_cast<std::size_t>(__builtin_popcountll(mask)) > opt.max_degree) {
          continue;
        }
        std::vector<Edge> edges = g.edges();
        for (std::size_t i = 0; i < e; ++i) {
          if (mask >> i & 1u) edges.push_back({eligible[i], fresh});
        }
        Graph h(k, std::move(edges));
        if (!accept(h)) continue;
        if (seen.insert(CanonicalForm::of(h)).second) next.push_back(std::move(h));
      }
    }
    level = std::move(next);
  }
  return level;
}

inline std::vector<Graph> enumerate_connected_graphs(std::size_t n, const EnumerationOptions& opt = {}) {
  std::vector<Graph> out;
  for (auto& g : enumerate_graphs(n, opt)) {
    if (is_connected(g)) out.push_back(std::move(g));
  }
  return out;
}

} // namespace urm
